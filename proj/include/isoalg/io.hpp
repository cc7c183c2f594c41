#ifndef ISOALG_IO_HPP
#define ISOALG_IO_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "isoalg/algebra.hpp"
#include "isoalg/error.hpp"
#include "isoalg/graphs.hpp"
#include "isoalg/linalg.hpp"
#include "isoalg/polysys.hpp"
#include "isoalg/scalars.hpp"
#include "isoalg/search.hpp"

namespace isoalg {

// Keys are held in a std::map, so every emitted object has sorted keys.
using Json = nlohmann::json;

namespace detail {

[[noreturn]] inline void bad_document(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::ParseError, where + ": " + what);
}

inline const Json& member(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) bad_document(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad_document(where, std::string("missing key \"") + key + "\"");
  return *it;
}

inline std::string string_at(const Json& j, const std::string& where) {
  if (!j.is_string()) bad_document(where, "expected a string");
  return j.get<std::string>();
}

inline std::size_t index_at(const Json& j, const std::string& where) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    bad_document(where, "expected a non-negative integer");
  }
  return j.get<std::size_t>();
}

/// Scalars are written as strings; plain JSON integers are accepted on input.
inline FieldElement element_at(const Field& f, const Json& j, const std::string& where) {
  try {
    if (j.is_number_integer()) return f.from_int(j.get<long long>());
    return f.parse_element(string_at(j, where));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ParseError) throw;
    bad_document(where, e.what());
  }
}

inline Field field_at(const Json& j, const std::string& where) {
  try {
    return Field::parse(string_at(j, where));
  } catch (const Error& e) {
    throw Error(e.kind(), where + ": " + e.what());
  }
}

inline Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).to_string());
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from(const Field& f, const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) bad_document(where, "expected a non-empty array of rows");
  std::vector<std::vector<FieldElement>> rows;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != j.size()) bad_document(w, "expected a square matrix row");
    std::vector<FieldElement> row;
    for (std::size_t c = 0; c < j[i].size(); ++c) row.push_back(element_at(f, j[i][c], w + "[" + std::to_string(c) + "]"));
    rows.push_back(std::move(row));
  }
  return Matrix::from_rows(f, rows);
}

}  // namespace detail

/// Parses JSON text; syntax errors name the byte offset.
inline Json parse_json(const std::string& text, const std::string& source = "<input>") {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::ParseError, source + ": byte " + std::to_string(e.byte) + ": invalid JSON");
  }
}

inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Algebra files

inline Json algebra_to_json(const Algebra& a) {
  Json table = Json::array();
  for (const auto& e : a.table()) table.push_back(Json::array({e.i, e.j, e.k, e.coeff.to_string()}));
  return Json{{"field", a.field().to_string()}, {"dim", a.dim()}, {"labels", a.labels()}, {"table", table}};
}

inline Algebra algebra_from_json(const Json& j, const std::string& source = "<algebra>") {
  const Field f = detail::field_at(detail::member(j, "field", source), source + ".field");
  const std::size_t n = detail::index_at(detail::member(j, "dim", source), source + ".dim");
  std::vector<std::string> labels;
  if (j.contains("labels")) {
    const Json& l = j["labels"];
    if (!l.is_array()) detail::bad_document(source + ".labels", "expected an array");
    for (std::size_t i = 0; i < l.size(); ++i) {
      labels.push_back(detail::string_at(l[i], source + ".labels[" + std::to_string(i) + "]"));
    }
  }
  const Json& t = detail::member(j, "table", source);
  if (!t.is_array()) detail::bad_document(source + ".table", "expected an array");
  std::vector<TableEntry> entries;
  for (std::size_t r = 0; r < t.size(); ++r) {
    const std::string w = source + ".table[" + std::to_string(r) + "]";
    if (!t[r].is_array() || t[r].size() != 4) detail::bad_document(w, "expected [i, j, k, coeff]");
    entries.push_back({detail::index_at(t[r][0], w + "[0]"), detail::index_at(t[r][1], w + "[1]"),
                       detail::index_at(t[r][2], w + "[2]"), detail::element_at(f, t[r][3], w + "[3]")});
  }
  return Algebra(f, n, std::move(labels), std::move(entries));
}

// ---------------------------------------------------------------------------
// Graph files

inline Json graph_to_json(const Graph& g) {
  Json edges = Json::array();
  for (const auto& e : g.edges) edges.push_back(Json{{"name", e.name}, {"src", e.src}, {"tgt", e.tgt}});
  return Json{{"X", g.x}, {"edges", edges}, {"vertices", g.vertices}};
}

/// "X" may be the string "regular" (all regular vertices) or be absent (empty X).
inline Graph graph_from_json(const Json& j, const std::string& source = "<graph>") {
  Graph g;
  const Json& v = detail::member(j, "vertices", source);
  if (!v.is_array()) detail::bad_document(source + ".vertices", "expected an array");
  for (std::size_t i = 0; i < v.size(); ++i) {
    g.vertices.push_back(detail::string_at(v[i], source + ".vertices[" + std::to_string(i) + "]"));
  }
  const Json& e = detail::member(j, "edges", source);
  if (!e.is_array()) detail::bad_document(source + ".edges", "expected an array");
  for (std::size_t i = 0; i < e.size(); ++i) {
    const std::string w = source + ".edges[" + std::to_string(i) + "]";
    g.edges.push_back({detail::string_at(detail::member(e[i], "name", w), w + ".name"),
                       detail::string_at(detail::member(e[i], "src", w), w + ".src"),
                       detail::string_at(detail::member(e[i], "tgt", w), w + ".tgt")});
  }
  bool regular = false;
  if (j.contains("X")) {
    const Json& x = j["X"];
    if (x.is_string()) {
      if (x.get<std::string>() != "regular") detail::bad_document(source + ".X", "expected \"regular\" or a list");
      regular = true;
    } else if (x.is_array()) {
      for (std::size_t i = 0; i < x.size(); ++i) {
        g.x.push_back(detail::string_at(x[i], source + ".X[" + std::to_string(i) + "]"));
      }
    } else {
      detail::bad_document(source + ".X", "expected \"regular\" or a list");
    }
  }
  validate_graph(g);
  if (regular) g.x = regular_vertices(g);
  return g;
}

// ---------------------------------------------------------------------------
// Certificates, candidates, verdicts, systems

inline Json certificate_to_json(const Certificate& c) {
  return Json{{"S", detail::matrix_json(c.s)},
              {"T", detail::matrix_json(c.t)},
              {"field", c.field.to_string()},
              {"verified", true}};
}

/// Reads {"T": [[..]], "S": [[..]] (optional)} over the given field. A
/// certificate file is a valid candidate file.
inline CandidateIso candidate_from_json(const Field& f, const Json& j, const std::string& source = "<candidate>") {
  if (j.contains("field")) {
    const Field g = detail::field_at(j["field"], source + ".field");
    if (g != f) throw Error(ErrorKind::FieldMismatch, source + ": candidate over " + g.to_string());
  }
  CandidateIso c{detail::matrix_from(f, detail::member(j, "T", source), source + ".T"), std::nullopt};
  if (j.contains("S") && !j["S"].is_null()) c.s = detail::matrix_from(f, j["S"], source + ".S");
  return c;
}

inline Json verification_to_json(const Verification& v) {
  Json out{{"verified", v.ok()}};
  Json violations = Json::array();
  for (const auto& x : v.violations) {
    violations.push_back(Json{{"generator", x.where.to_string()}, {"value", x.value.to_string()}});
  }
  out["violations"] = violations;
  out["certificate"] = v.certificate ? certificate_to_json(*v.certificate) : Json(nullptr);
  return out;
}

inline Json polynomials_to_json(const std::vector<Polynomial>& ps) {
  Json out = Json::array();
  for (const auto& p : ps) out.push_back(p.to_string());
  return out;
}

inline Json verdict_to_json(const Verdict& v) {
  Json out{{"verdict", verdict_name(v.kind)}};
  out["certificate"] = v.certificate ? certificate_to_json(*v.certificate) : Json(nullptr);
  out["groebner_basis"] = v.groebner_basis ? polynomials_to_json(*v.groebner_basis) : Json(nullptr);
  out["budget_used"] = Json{{"assignments", v.used.assignments},
                            {"groebner_pairs", v.used.groebner_pairs},
                            {"search_complete", v.used.search_complete},
                            {"search_exhaustive", v.used.search_exhaustive}};
  if (!v.reason.empty()) out["reason"] = v.reason;
  return out;
}

inline Json system_to_json(const IsoSystem& sys) {
  Json tags = Json::array();
  for (const auto& p : sys.provenance) tags.push_back(p.to_string());
  return Json{{"dim", sys.dim},
              {"field", sys.ring->field().to_string()},
              {"generators", polynomials_to_json(sys.generators)},
              {"order", sys.ring->order().kind() == OrderKind::Lex ? "lex" : "degrevlex"},
              {"provenance", tags},
              {"two_sided", sys.two_sided},
              {"variables", sys.ring->names()}};
}

inline Json invariants_to_json(const AlgebraInvariants& inv) {
  return Json{{"associative", inv.associative},  {"centroid_dim", inv.centroid},
              {"commutative", inv.commutative},  {"derivation_dim", inv.derivations},
              {"dim", inv.dim},                  {"unital", inv.has_unit}};
}

// ---------------------------------------------------------------------------
// Files

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes through a temporary sibling file and renames it into place.
inline void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, path + ": cannot write");
    out << content;
    out.flush();
    if (!out) throw Error(ErrorKind::Io, path + ": write failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::Io, path + ": cannot rename into place");
  }
}

inline Json read_json_file(const std::string& path) { return parse_json(read_file(path), path); }

inline Algebra read_algebra_file(const std::string& path) { return algebra_from_json(read_json_file(path), path); }

inline Graph read_graph_file(const std::string& path) { return graph_from_json(read_json_file(path), path); }

}  // namespace isoalg

#endif  // ISOALG_IO_HPP
