#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "motivecalc/biext_motive.hpp"

namespace motivecalc::io {

using json = nlohmann::json;

/// All problems found in a document, each prefixed with its JSON path.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(std::vector<std::string> errors)
      : std::runtime_error(join(errors)), errors_(std::move(errors)) {}
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  static std::string join(const std::vector<std::string>& e) {
    std::string s;
    for (const auto& x : e) s += (s.empty() ? "" : "\n") + x;
    return s;
  }
  std::vector<std::string> errors_;
};

/// A biextension entry; empty m2 means the Cartier dual of m1, empty m3 means Z(1).
struct BiextEntry {
  MotiveBiextension mb;
  std::string m1, m2, m3;
};

struct MorphismEntry {
  std::string name, source, target;
  BiextMorphismData data;
};

struct Document {
  std::optional<PrimeField> field;
  std::vector<EllipticCurve> curves;
  std::vector<OneMotive> motives;
  std::vector<BiextEntry> biextensions;
  std::vector<MorphismEntry> morphisms;

  const OneMotive* motive(const std::string& name) const {
    for (const auto& m : motives)
      if (m.name() == name) return &m;
    return nullptr;
  }
  const BiextEntry* biextension(const std::string& name) const {
    for (const auto& b : biextensions)
      if (b.mb.name == name) return &b;
    return nullptr;
  }
  const MorphismEntry* morphism(const std::string& name) const {
    for (const auto& m : morphisms)
      if (m.name == name) return &m;
    return nullptr;
  }
  const EllipticCurve* curve(const std::string& name) const {
    for (const auto& c : curves)
      if (c.name() == name) return &c;
    return nullptr;
  }
};

namespace detail {

struct Fail {
  std::string msg;
};

[[noreturn]] inline void fail(const std::string& path, const std::string& msg) { throw Fail{path + ": " + msg}; }

inline std::int64_t get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected integer");
  return j.get<std::int64_t>();
}

inline const json* member(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

inline std::string get_string(const json& obj, const char* key, const std::string& path, bool required = true) {
  const json* j = member(obj, key);
  if (!j) {
    if (required) fail(path, std::string("missing \"") + key + "\"");
    return {};
  }
  if (!j->is_string()) fail(path + "." + key, "expected string");
  return j->get<std::string>();
}

inline json point_to_json(const Elem& e) {
  auto P = motivecalc::detail::elem_curve(e);
  return P.infinity ? json::array() : json::array({P.x, P.y});
}

inline Elem point_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || (j.size() != 0 && j.size() != 2)) fail(path, "expected a point [x,y] or [] for infinity");
  if (j.empty()) return motivecalc::detail::curve_elem(CurvePoint::at_infinity());
  return motivecalc::detail::curve_elem(CurvePoint::affine(get_int(j[0], path + "[0]"), get_int(j[1], path + "[1]")));
}

/// A point of A[n]: one curve gives [x,y], several give an array of points.
inline json abelian_to_json(const Elem& e, std::size_t curves) {
  if (curves == 1) return point_to_json(e);
  json out = json::array();
  for (std::size_t k = 0; k < curves; ++k) out.push_back(point_to_json(Elem(e.begin() + 3 * k, e.begin() + 3 * k + 3)));
  return out;
}

inline Elem abelian_from_json(const json& j, std::size_t curves, const std::string& path) {
  if (curves == 0) {
    if (!j.is_null() && !(j.is_array() && j.empty())) fail(path, "abelian part is zero, expected []");
    return {};
  }
  if (curves == 1) return point_from_json(j, path);
  if (!j.is_array() || j.size() != curves) fail(path, "expected " + std::to_string(curves) + " points");
  Elem out;
  for (std::size_t k = 0; k < curves; ++k) {
    auto e = point_from_json(j[k], path + "[" + std::to_string(k) + "]");
    out.insert(out.end(), e.begin(), e.end());
  }
  return out;
}

/// A point of a split torus of rank r: an integer when r = 1, else an array.
inline json torus_to_json(const Elem& e) {
  if (e.size() == 1) return e[0];
  return json(e);
}

inline Elem torus_from_json(const json& j, std::size_t rank, const std::string& path) {
  if (rank == 1 && j.is_number_integer()) return Elem{j.get<std::int64_t>()};
  if (!j.is_array() || j.size() != rank) fail(path, "expected a torus point with " + std::to_string(rank) + " coordinates");
  Elem out;
  for (std::size_t k = 0; k < rank; ++k) out.push_back(get_int(j[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

inline json matrix_to_json(const IntMatrix& m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(row);
  }
  return out;
}

/// Rows of equal length; `cols` fixes the width when the matrix has no rows.
inline IntMatrix matrix_from_json(const json& j, const std::string& path, std::size_t cols_if_empty = 0) {
  if (!j.is_array()) fail(path, "expected an array of rows");
  if (j.empty()) return IntMatrix(0, cols_if_empty);
  for (const auto& row : j)
    if (!row.is_array() || row.size() != j[0].size()) fail(path, "rows must be arrays of equal length");
  IntMatrix m(j.size(), j[0].size());
  for (std::size_t r = 0; r < j.size(); ++r)
    for (std::size_t c = 0; c < j[r].size(); ++c)
      m(r, c) = get_int(j[r][c], path + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
  return m;
}

inline IntMatrix sized_matrix(const json& obj, const char* key, std::size_t rows, std::size_t cols, const std::string& path,
                              std::int64_t fill) {
  const json* j = member(obj, key);
  if (!j) {
    IntMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) m(r, c) = fill;
    return m;
  }
  IntMatrix m = matrix_from_json(*j, path + "." + key, cols);
  if (m.rows() != rows || m.cols() != cols)
    fail(path + "." + key, "dimension mismatch: expected " + std::to_string(rows) + "x" + std::to_string(cols));
  return m;
}

/// 1-based generator index.
inline std::size_t index_from_json(const json& j, std::size_t count, const std::string& path) {
  std::int64_t i = get_int(j, path);
  if (i < 1 || static_cast<std::size_t>(i) > count) fail(path, "generator index " + std::to_string(i) + " out of range 1.." + std::to_string(count));
  return static_cast<std::size_t>(i - 1);
}

inline const json& entry_array(const json& j, std::size_t width, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of entries");
  for (std::size_t k = 0; k < j.size(); ++k)
    if (!j[k].is_array() || j[k].size() != width)
      fail(path + "[" + std::to_string(k) + "]", "expected an entry of length " + std::to_string(width));
  return j;
}

inline std::vector<std::vector<Elem>> torus_grid(const json& j, std::size_t rows, std::size_t cols, std::size_t rank,
                                                 const std::string& path) {
  if (!j.is_array() || j.size() != rows) fail(path, "expected " + std::to_string(rows) + " rows");
  std::vector<std::vector<Elem>> out(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) fail(path + "[" + std::to_string(r) + "]", "expected " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c)
      out[r].push_back(torus_from_json(j[r][c], rank, path + "[" + std::to_string(r) + "][" + std::to_string(c) + "]"));
  }
  return out;
}

inline json torus_grid_to_json(const std::vector<std::vector<Elem>>& g) {
  json out = json::array();
  for (const auto& row : g) {
    json r = json::array();
    for (const auto& e : row) r.push_back(torus_to_json(e));
    out.push_back(r);
  }
  return out;
}

}  // namespace detail
namespace detail {

inline void check_keys(const json& obj, std::initializer_list<const char*> keys, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known |= it.key() == k;
    if (!known) fail(path, "unknown key \"" + it.key() + "\"");
  }
}

inline std::int64_t int_or(const json& obj, const char* key, std::int64_t def, const std::string& path) {
  const json* j = member(obj, key);
  return j ? get_int(*j, path + "." + key) : def;
}

inline Elem zero_abelian(std::size_t curves) {
  Elem e;
  for (std::size_t k = 0; k < curves; ++k) e.insert(e.end(), {1, 0, 0});
  return e;
}

inline std::vector<Elem> abelian_list(const json& obj, const char* key, int count, std::size_t curves, const std::string& path) {
  const json* j = member(obj, key);
  if (!j) return std::vector<Elem>(static_cast<std::size_t>(count), zero_abelian(curves));
  if (!j->is_array() || j->size() != static_cast<std::size_t>(count))
    fail(path + "." + key, "dimension mismatch: expected " + std::to_string(count) + " images");
  std::vector<Elem> out;
  for (std::size_t k = 0; k < j->size(); ++k) out.push_back(abelian_from_json((*j)[k], curves, path + "." + key + "[" + std::to_string(k) + "]"));
  return out;
}

inline EllipticCurve parse_curve(const json& j, const PrimeField& F, const std::string& path) {
  check_keys(j, {"name", "a", "b"}, path);
  std::string name = get_string(j, "name", path);
  if (name.empty()) fail(path, "curve name must be non-empty");
  const json* a = member(j, "a");
  const json* b = member(j, "b");
  if (!a || !b) fail(path, "missing curve coefficient");
  return EllipticCurve(F, get_int(*a, path + ".a"), get_int(*b, path + ".b"), name);
}

inline OneMotive parse_motive(const json& j, const Document& doc, const std::string& path) {
  check_keys(j, {"name", "X_rank", "Ydual_rank", "abelian", "abelian_dual", "torsion_n", "v", "vstar", "psi"}, path);
  OneMotiveData d;
  d.name = get_string(j, "name", path);
  d.field = *doc.field;
  d.x_rank = static_cast<int>(int_or(j, "X_rank", 0, path));
  d.ydual_rank = static_cast<int>(int_or(j, "Ydual_rank", 0, path));
  if (d.x_rank < 0 || d.ydual_rank < 0) fail(path, "lattice ranks must be non-negative");
  if (const json* ab = member(j, "abelian")) {
    std::vector<std::string> names;
    if (ab->is_string()) {
      names.push_back(ab->get<std::string>());
    } else if (ab->is_array()) {
      for (const auto& s : *ab) {
        if (!s.is_string()) fail(path + ".abelian", "expected curve names");
        names.push_back(s.get<std::string>());
      }
    } else {
      fail(path + ".abelian", "expected a curve name, an array of names or null");
    }
    for (const auto& n : names) {
      const EllipticCurve* c = doc.curve(n);
      if (!c) fail(path + ".abelian", "unresolved reference to curve \"" + n + "\"");
      d.curves.push_back(*c);
    }
  }
  d.torsion_n = int_or(j, "torsion_n", 0, path);
  if (const json* ad = member(j, "abelian_dual")) {
    if (!ad->is_boolean()) fail(path + ".abelian_dual", "expected boolean");
    d.abelian_is_dual = ad->get<bool>();
  }
  d.v = abelian_list(j, "v", d.x_rank, d.curves.size(), path);
  d.vstar = abelian_list(j, "vstar", d.ydual_rank, d.curves.size(), path);
  d.psi = sized_matrix(j, "psi", static_cast<std::size_t>(d.x_rank), static_cast<std::size_t>(d.ydual_rank), path, 1);
  return motive_from_seven_tuple(std::move(d));
}

inline const OneMotive& resolve_motive(const Document& doc, const std::string& name, const std::string& path) {
  const OneMotive* m = doc.motive(name);
  if (!m) fail(path, "unresolved reference to motive \"" + name + "\"");
  return *m;
}

inline BiextTables parse_tables(const json& j, const MotiveBiextension& mb, const std::string& path) {
  BiextTables t;
  if (j.is_string()) {
    t.mode = j.get<std::string>();
    if (t.mode != "zero" && t.mode != "weil") fail(path, "expected \"zero\", \"weil\" or a table object");
    return t;
  }
  check_keys(j, {"phi", "psi"}, path);
  t.mode = "table";
  const std::size_t c1 = mb.M1.data().curves.size(), c2 = mb.M2.data().curves.size(), r3 = static_cast<std::size_t>(mb.r3());
  if (const json* phi = member(j, "phi"))
    for (std::size_t k = 0; k < entry_array(*phi, 4, path + ".phi").size(); ++k) {
      const auto& e = (*phi)[k];
      const std::string p = path + ".phi[" + std::to_string(k) + "]";
      t.phi[{abelian_from_json(e[0], c1, p), abelian_from_json(e[1], c1, p), abelian_from_json(e[2], c2, p)}] = torus_from_json(e[3], r3, p);
    }
  if (const json* psi = member(j, "psi"))
    for (std::size_t k = 0; k < entry_array(*psi, 4, path + ".psi").size(); ++k) {
      const auto& e = (*psi)[k];
      const std::string p = path + ".psi[" + std::to_string(k) + "]";
      t.psi[{abelian_from_json(e[0], c1, p), abelian_from_json(e[1], c2, p), abelian_from_json(e[2], c2, p)}] = torus_from_json(e[3], r3, p);
    }
  return t;
}

template <class Key, class Make>
void parse_entries(const json* j, std::size_t width, const std::string& path, std::map<Key, Elem>& out, Make make) {
  if (!j) return;
  for (std::size_t k = 0; k < entry_array(*j, width, path).size(); ++k) {
    auto [key, val] = make((*j)[k], path + "[" + std::to_string(k) + "]");
    out[key] = val;
  }
}

inline BiextEntry parse_biext(const json& j, const Document& doc, const std::string& path) {
  check_keys(j, {"name", "m1", "m2", "m3", "kind", "torsion_n", "B", "Psi1", "Psi2", "Psi", "lambda", "endo"}, path);
  BiextEntry e;
  auto& mb = e.mb;
  mb.name = get_string(j, "name", path);
  e.m1 = get_string(j, "m1", path);
  e.m2 = get_string(j, "m2", path, false);
  e.m3 = get_string(j, "m3", path, false);
  mb.kind = static_cast<int>(int_or(j, "kind", 0, path));
  mb.M1 = resolve_motive(doc, e.m1, path + ".m1");
  mb.M2 = e.m2.empty() ? cartier_dual(mb.M1) : resolve_motive(doc, e.m2, path + ".m2");
  mb.M3 = e.m3.empty() ? unit_torus_motive(*doc.field) : resolve_motive(doc, e.m3, path + ".m3");
  if (const json* n = member(j, "torsion_n"))
    if (get_int(*n, path + ".torsion_n") != mb.M1.data().torsion_n) fail(path + ".torsion_n", "does not match the torsion level of m1");
  if (const json* B = member(j, "B")) mb.B = parse_tables(*B, mb, path + ".B");
  const std::size_t c1 = mb.M1.data().curves.size(), c2 = mb.M2.data().curves.size(), r3 = static_cast<std::size_t>(mb.r3());
  const std::size_t r1 = static_cast<std::size_t>(mb.r1()), r2 = static_cast<std::size_t>(mb.r2());
  parse_entries(member(j, "Psi1"), 3, path + ".Psi1", mb.Psi1, [&](const json& x, const std::string& p) {
    return std::pair{std::pair{index_from_json(x[0], r1, p), abelian_from_json(x[1], c2, p)}, torus_from_json(x[2], r3, p)};
  });
  parse_entries(member(j, "Psi2"), 3, path + ".Psi2", mb.Psi2, [&](const json& x, const std::string& p) {
    return std::pair{std::pair{abelian_from_json(x[0], c1, p), index_from_json(x[1], r2, p)}, torus_from_json(x[2], r3, p)};
  });
  if (const json* P = member(j, "Psi")) mb.Psi = torus_grid(*P, r1, r2, r3, path + ".Psi");
  if (const json* L = member(j, "lambda")) mb.lambda = matrix_from_json(*L, path + ".lambda", r1 * r2);
  if (const json* E = member(j, "endo")) mb.endo = matrix_from_json(*E, path + ".endo", r1 * r2);
  validate_biextension(mb);
  return e;
}

inline MotiveMorphism parse_level(const json* j, const OneMotive& s, const OneMotive& t, const std::string& path) {
  static const json empty = json::object();
  const json& o = j ? *j : empty;
  check_keys(o, {"fX", "fA", "fT"}, path);
  const auto& ds = s.data();
  const auto& dt = t.data();
  auto part = [&](const char* key, std::size_t rows, std::size_t cols) {
    const json* m = member(o, key);
    if (!m) {
      if (rows != cols) fail(path + "." + key, "required when source and target ranks differ");
      return IntMatrix::identity(rows);
    }
    IntMatrix mat = matrix_from_json(*m, path + "." + key, cols);
    if (mat.rows() != rows || mat.cols() != cols)
      fail(path + "." + key, "dimension mismatch: expected " + std::to_string(rows) + "x" + std::to_string(cols));
    return mat;
  };
  return {LatticeMap(Lattice(ds.x_rank), Lattice(dt.x_rank), part("fX", dt.x_rank, ds.x_rank)),
          part("fA", dt.curves.size(), ds.curves.size()),
          LatticeMap(Lattice(ds.ydual_rank), Lattice(dt.ydual_rank), part("fT", dt.ydual_rank, ds.ydual_rank))};
}

inline MorphismEntry parse_morphism(const json& j, const Document& doc, const std::string& path) {
  check_keys(j, {"name", "source", "target", "m1", "m2", "m3", "F", "upsilon1", "upsilon2", "upsilon"}, path);
  const std::string name = get_string(j, "name", path), source = get_string(j, "source", path), target = get_string(j, "target", path);
  const BiextEntry* s = doc.biextension(source);
  const BiextEntry* t = doc.biextension(target);
  if (!s) fail(path + ".source", "unresolved reference to biextension \"" + source + "\"");
  if (!t) fail(path + ".target", "unresolved reference to biextension \"" + target + "\"");
  const auto& src = s->mb;
  const auto& dst = t->mb;
  MorphismEntry e{name, source, target,
                  {parse_level(member(j, "m1"), src.M1, dst.M1, path + ".m1"), parse_level(member(j, "m2"), src.M2, dst.M2, path + ".m2"),
                   parse_level(member(j, "m3"), src.M3, dst.M3, path + ".m3"), {}, {}, {}, {}}};
  auto& d = e.data;
  const std::size_t c1 = src.M1.data().curves.size(), c2 = src.M2.data().curves.size(), r3 = static_cast<std::size_t>(dst.r3());
  const std::size_t r1 = static_cast<std::size_t>(src.r1()), r2 = static_cast<std::size_t>(src.r2());
  parse_entries(member(j, "F"), 3, path + ".F", d.F, [&](const json& x, const std::string& p) {
    return std::pair{std::pair{abelian_from_json(x[0], c1, p), abelian_from_json(x[1], c2, p)}, torus_from_json(x[2], r3, p)};
  });
  parse_entries(member(j, "upsilon1"), 3, path + ".upsilon1", d.upsilon1, [&](const json& x, const std::string& p) {
    return std::pair{std::pair{index_from_json(x[0], r1, p), abelian_from_json(x[1], c2, p)}, torus_from_json(x[2], r3, p)};
  });
  parse_entries(member(j, "upsilon2"), 3, path + ".upsilon2", d.upsilon2, [&](const json& x, const std::string& p) {
    return std::pair{std::pair{abelian_from_json(x[0], c1, p), index_from_json(x[1], r2, p)}, torus_from_json(x[2], r3, p)};
  });
  if (const json* U = member(j, "upsilon")) d.upsilon = torus_grid(*U, r1, r2, r3, path + ".upsilon");
  return e;
}

/// Runs `step` on each element of root[key], collecting failures and
/// checking that names are unique.
template <class Step>
void each_entry(const json& root, const char* key, std::vector<std::string>& errors, Step step) {
  const json* arr = member(root, key);
  if (!arr) return;
  if (!arr->is_array()) {
    errors.push_back(std::string(key) + ": expected an array");
    return;
  }
  std::vector<std::string> seen;
  for (std::size_t k = 0; k < arr->size(); ++k) {
    const std::string path = std::string(key) + "[" + std::to_string(k) + "]";
    try {
      const json& e = (*arr)[k];
      if (e.is_object() && e.contains("name") && e["name"].is_string()) {
        const std::string n = e["name"].get<std::string>();
        if (std::find(seen.begin(), seen.end(), n) != seen.end()) fail(path, "duplicate name \"" + n + "\"");
        seen.push_back(n);
      }
      step(e, path);
    } catch (const Fail& f) {
      errors.push_back(f.msg);
    } catch (const ValidationError& v) {
      errors.push_back(path + ": " + v.what());
    }
  }
}

}  // namespace detail

inline Document parse_document(const json& root) {
  using namespace detail;
  std::vector<std::string> errors;
  if (root.is_null()) throw ParseError({"no document"});
  if (!root.is_object()) throw ParseError({"top level: expected an object"});
  for (auto it = root.begin(); it != root.end(); ++it)
    if (it.key() != "field" && it.key() != "curves" && it.key() != "motives" && it.key() != "biextensions" && it.key() != "morphisms")
      errors.push_back("top level: unknown key \"" + it.key() + "\"");
  Document doc;
  try {
    if (const json* f = member(root, "field")) {
      check_keys(*f, {"p"}, "field");
      const json* p = member(*f, "p");
      if (!p) fail("field", "missing \"p\"");
      doc.field = PrimeField(get_int(*p, "field.p"));
    }
  } catch (const Fail& f) {
    errors.push_back(f.msg);
  } catch (const ValidationError& v) {
    errors.push_back(std::string("field: ") + v.what());
  }
  if (!doc.field) {
    for (const char* k : {"curves", "motives", "biextensions", "morphisms"})
      if (member(root, k)) {
        errors.push_back(std::string(k) + ": the field must be declared before use");
        throw ParseError(errors);
      }
  }
  each_entry(root, "curves", errors, [&](const json& e, const std::string& p) { doc.curves.push_back(parse_curve(e, *doc.field, p)); });
  each_entry(root, "motives", errors, [&](const json& e, const std::string& p) { doc.motives.push_back(parse_motive(e, doc, p)); });
  each_entry(root, "biextensions", errors, [&](const json& e, const std::string& p) { doc.biextensions.push_back(parse_biext(e, doc, p)); });
  each_entry(root, "morphisms", errors, [&](const json& e, const std::string& p) { doc.morphisms.push_back(parse_morphism(e, doc, p)); });
  if (!errors.empty()) throw ParseError(errors);
  return doc;
}

inline Document parse_text(const std::string& text) {
  bool blank = text.find_first_not_of(" \t\r\n") == std::string::npos;
  if (blank) throw ParseError({"no document"});
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError({std::string("syntax error: ") + e.what()});
  }
  return parse_document(root);
}

inline Document parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError({"cannot open " + path});
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str());
}

}  // namespace motivecalc::io

namespace motivecalc::io {

namespace detail {

inline bool all_zero_abelian(const std::vector<Elem>& v, std::size_t curves) {
  for (const auto& e : v)
    if (e != zero_abelian(curves)) return false;
  return true;
}

inline json abelian_list_to_json(const std::vector<Elem>& v, std::size_t curves) {
  json out = json::array();
  for (const auto& e : v) out.push_back(abelian_to_json(e, curves));
  return out;
}

inline bool is_identity(const IntMatrix& m) { return m.rows() == m.cols() && m == IntMatrix::identity(m.rows()); }

}  // namespace detail

inline json motive_to_json(const OneMotive& M) {
  using namespace detail;
  const auto& d = M.data();
  json j;
  j["name"] = d.name;
  if (d.x_rank) j["X_rank"] = d.x_rank;
  if (d.ydual_rank) j["Ydual_rank"] = d.ydual_rank;
  if (d.curves.size() == 1) j["abelian"] = d.curves[0].name();
  if (d.curves.size() > 1)
    for (const auto& c : d.curves) j["abelian"].push_back(c.name());
  if (d.torsion_n) j["torsion_n"] = d.torsion_n;
  if (d.abelian_is_dual) j["abelian_dual"] = true;
  if (!all_zero_abelian(d.v, d.curves.size())) j["v"] = abelian_list_to_json(d.v, d.curves.size());
  if (!all_zero_abelian(d.vstar, d.curves.size())) j["vstar"] = abelian_list_to_json(d.vstar, d.curves.size());
  bool ones = true;
  for (std::size_t r = 0; r < d.psi.rows(); ++r)
    for (std::size_t c = 0; c < d.psi.cols(); ++c) ones &= d.psi(r, c) == 1;
  if (!ones) j["psi"] = matrix_to_json(d.psi);
  return j;
}

inline json biext_to_json(const BiextEntry& e) {
  using namespace detail;
  const auto& mb = e.mb;
  const std::size_t c1 = mb.M1.data().curves.size(), c2 = mb.M2.data().curves.size();
  json j;
  j["name"] = mb.name;
  j["m1"] = e.m1;
  if (!e.m2.empty()) j["m2"] = e.m2;
  if (!e.m3.empty()) j["m3"] = e.m3;
  if (mb.kind) j["kind"] = mb.kind;
  if (mb.B.mode == "weil") j["B"] = "weil";
  if (mb.B.mode == "table") {
    json t = json::object();
    for (const auto& [k, v] : mb.B.phi)
      t["phi"].push_back({abelian_to_json(k[0], c1), abelian_to_json(k[1], c1), abelian_to_json(k[2], c2), torus_to_json(v)});
    for (const auto& [k, v] : mb.B.psi)
      t["psi"].push_back({abelian_to_json(k[0], c1), abelian_to_json(k[1], c2), abelian_to_json(k[2], c2), torus_to_json(v)});
    j["B"] = t;
  }
  for (const auto& [k, v] : mb.Psi1) j["Psi1"].push_back({k.first + 1, abelian_to_json(k.second, c2), torus_to_json(v)});
  for (const auto& [k, v] : mb.Psi2) j["Psi2"].push_back({abelian_to_json(k.first, c1), k.second + 1, torus_to_json(v)});
  if (!mb.Psi.empty()) j["Psi"] = torus_grid_to_json(mb.Psi);
  if (mb.lambda.rows() || mb.lambda.cols()) j["lambda"] = matrix_to_json(mb.lambda);
  if (mb.endo.rows() || mb.endo.cols()) j["endo"] = matrix_to_json(mb.endo);
  return j;
}

inline json morphism_to_json(const MorphismEntry& e, const Document& doc) {
  using namespace detail;
  const auto& src = doc.biextension(e.source)->mb;
  const std::size_t c1 = src.M1.data().curves.size(), c2 = src.M2.data().curves.size();
  const auto& d = e.data;
  json j;
  j["name"] = e.name;
  j["source"] = e.source;
  j["target"] = e.target;
  const std::pair<const char*, const MotiveMorphism*> levels[] = {{"m1", &d.m1}, {"m2", &d.m2}, {"m3", &d.m3}};
  for (const auto& [key, m] : levels) {
    json l = json::object();
    if (!is_identity(m->fX.matrix())) l["fX"] = matrix_to_json(m->fX.matrix());
    if (!is_identity(m->fA)) l["fA"] = matrix_to_json(m->fA);
    if (!is_identity(m->fT.matrix())) l["fT"] = matrix_to_json(m->fT.matrix());
    if (!l.empty()) j[key] = l;
  }
  for (const auto& [k, v] : d.F) j["F"].push_back({abelian_to_json(k.first, c1), abelian_to_json(k.second, c2), torus_to_json(v)});
  for (const auto& [k, v] : d.upsilon1) j["upsilon1"].push_back({k.first + 1, abelian_to_json(k.second, c2), torus_to_json(v)});
  for (const auto& [k, v] : d.upsilon2) j["upsilon2"].push_back({abelian_to_json(k.first, c1), k.second + 1, torus_to_json(v)});
  if (!d.upsilon.empty()) j["upsilon"] = torus_grid_to_json(d.upsilon);
  return j;
}

inline json document_to_json(const Document& doc) {
  json j = json::object();
  if (doc.field) j["field"] = {{"p", doc.field->p()}};
  for (const auto& c : doc.curves) j["curves"].push_back({{"name", c.name()}, {"a", c.a()}, {"b", c.b()}});
  for (const auto& m : doc.motives) j["motives"].push_back(motive_to_json(m));
  for (const auto& b : doc.biextensions) j["biextensions"].push_back(biext_to_json(b));
  for (const auto& m : doc.morphisms) j["morphisms"].push_back(morphism_to_json(m, doc));
  return j;
}

namespace detail {

inline bool has_object(const json& j) {
  if (j.is_object()) return true;
  if (j.is_array())
    for (const auto& e : j)
      if (has_object(e)) return true;
  return false;
}

inline void write_canonical(const json& j, int depth, std::string& out) {
  if (!has_object(j)) {
    out += j.dump();
    return;
  }
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' '), close(static_cast<std::size_t>(2 * depth), ' ');
  const bool obj = j.is_object();
  out += obj ? "{\n" : "[\n";
  std::size_t k = 0;
  for (auto it = j.begin(); it != j.end(); ++it, ++k) {
    out += pad;
    if (obj) out += json(it.key()).dump() + ": ";
    write_canonical(*it, depth + 1, out);
    out += k + 1 < j.size() ? ",\n" : "\n";
  }
  out += close + (obj ? "}" : "]");
}

}  // namespace detail

/// Canonical text: sorted keys, objects one key per line, arrays without
/// objects on a single line, trailing newline.
inline std::string canonical(const json& j) {
  std::string out;
  detail::write_canonical(j, 0, out);
  return out + "\n";
}

inline std::string serialize(const Document& doc) { return canonical(document_to_json(doc)); }

/// Appends M and any curves it uses that the document lacks.
inline void add_motive(Document& doc, const OneMotive& M) {
  if (!doc.field) doc.field = M.field();
  for (const auto& c : M.data().curves)
    if (!doc.curve(c.name())) doc.curves.push_back(c);
  doc.motives.push_back(M);
}

/// The field, the curves M uses and M itself.
inline Document motive_document(const OneMotive& M) {
  Document doc;
  add_motive(doc, M);
  return doc;
}

}  // namespace motivecalc::io
