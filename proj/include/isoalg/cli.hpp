#ifndef ISOALG_CLI_HPP
#define ISOALG_CLI_HPP

#include <algorithm>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "isoalg/algebra.hpp"
#include "isoalg/error.hpp"
#include "isoalg/graphs.hpp"
#include "isoalg/io.hpp"
#include "isoalg/polysys.hpp"
#include "isoalg/search.hpp"

namespace isoalg::cli {

enum ExitCode { kOk = 0, kInputError = 1, kUndecided = 2 };

namespace detail {

inline std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) {
    cur.erase(0, cur.find_first_not_of(" \t"));
    cur.erase(cur.find_last_not_of(" \t") + 1);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

/// "a,b;c,d" -> rows of cells.
inline std::vector<std::vector<std::string>> split_matrix(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& row : split(text, ';')) rows.push_back(split(row, ','));
  return rows;
}

inline void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") out << content;
  else write_file_atomic(path, content);
}

struct Options {
  std::string field;
  std::string kind;
  std::size_t n = 0;
  std::string qa = "-1", qb = "-1";
  std::string cayley, structure;
  std::string a, b, in, out, graph, construction, candidate, certificate, emit_system;
  std::optional<std::string> x;
  std::string order = "degrevlex";
  bool two_sided = false;
  std::size_t budget_pairs = SearchBudget{}.max_gb_steps;
  std::size_t budget_assignments = SearchBudget{}.max_assignments;
  double wall_limit = SearchBudget{}.wall_limit;
  unsigned jobs = 1;
};

inline Algebra build_algebra(const Options& o) {
  if (o.kind == "canonical") return read_algebra_file(o.in);
  if (o.kind == "direct-sum") return direct_sum(read_algebra_file(o.a), read_algebra_file(o.b));
  const Field f = Field::parse(o.field);
  if (o.kind == "field") return field_algebra(f);
  if (o.kind == "dual") return dual_numbers(f);
  if (o.kind == "matrix") return matrix_algebra(f, o.n);
  if (o.kind == "cyclic-group") return group_algebra(f, cyclic_group_table(o.n));
  if (o.kind == "quaternion") return quaternion_algebra(f, f.parse_element(o.qa), f.parse_element(o.qb));
  if (o.kind == "group") {
    std::vector<std::vector<std::size_t>> table;
    for (const auto& row : split_matrix(o.cayley)) {
      std::vector<std::size_t> r;
      for (const auto& c : row) {
        try {
          r.push_back(std::stoul(c));
        } catch (const std::exception&) {
          throw Error(ErrorKind::ParseError, "--cayley: bad entry \"" + c + "\"");
        }
      }
      table.push_back(std::move(r));
    }
    return group_algebra(f, table);
  }
  if (o.kind == "evolution") {
    std::vector<std::vector<FieldElement>> m;
    for (const auto& row : split_matrix(o.structure)) {
      std::vector<FieldElement> r;
      for (const auto& c : row) r.push_back(f.parse_element(c));
      m.push_back(std::move(r));
    }
    return evolution_algebra(f, m);
  }
  throw Error(ErrorKind::ParseError, "--kind: unknown construction \"" + o.kind + "\"");
}

inline Algebra build_graph_algebra(const Options& o) {
  Graph g = read_graph_file(o.graph);
  if (o.x) {
    g.x = *o.x == "regular" ? regular_vertices(g) : split(*o.x, ',');
    validate_graph(g);
  }
  const Field f = Field::parse(o.field);
  if (o.construction == "path") return path_algebra(g, f);
  if (o.construction == "cohn") return cohn_algebra(g, f);
  if (o.construction == "relative") return relative_cohn(g, f);
  if (o.construction == "leavitt") return leavitt(g, f);
  throw Error(ErrorKind::ParseError, "--construction: expected path, cohn, relative or leavitt");
}

}  // namespace detail

/// Runs one job. Returns 0 on a definitive result, 1 on input errors, 2
/// when the decision ran out of budget.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  detail::Options o;
  CLI::App app{"Exact isomorphism testing for finite-dimensional algebras", "isoalg"};
  app.require_subcommand(1);

  auto* build = app.add_subcommand("build-algebra", "Build an algebra file from a named construction");
  build->add_option("--kind", o.kind, "field|dual|matrix|cyclic-group|group|evolution|quaternion|direct-sum|canonical")
      ->required();
  build->add_option("--field", o.field, "Q | Fp:<p> | ext:<base>:<modulus>");
  build->add_option("--n", o.n, "Matrix size or group order");
  build->add_option("--qa", o.qa, "Quaternion parameter a");
  build->add_option("--qb", o.qb, "Quaternion parameter b");
  build->add_option("--cayley", o.cayley, "Cayley table rows, e.g. \"0,1;1,0\"");
  build->add_option("--structure", o.structure, "Evolution matrix rows, e.g. \"1,0;0,1\"");
  build->add_option("--a", o.a, "First summand (direct-sum)");
  build->add_option("--b", o.b, "Second summand (direct-sum)");
  build->add_option("--in", o.in, "Algebra file to canonicalize");
  build->add_option("--out", o.out, "Output file (default stdout)");

  auto* graph = app.add_subcommand("build-graph-algebra", "Build a path, Cohn, relative Cohn or Leavitt algebra");
  graph->add_option("--graph", o.graph, "Graph file")->required();
  graph->add_option("--field", o.field, "Ground field")->required();
  graph->add_option("--construction", o.construction, "path|cohn|relative|leavitt")->required();
  graph->add_option("--x", o.x, "Vertex list \"v,w\", \"regular\" or \"\" (overrides the file)");
  graph->add_option("--out", o.out, "Output file (default stdout)");

  auto* extend = app.add_subcommand("extend", "Extend scalars of an algebra to a larger field");
  extend->add_option("--in", o.in, "Algebra file")->required();
  extend->add_option("--field", o.field, "Target field")->required();
  extend->add_option("--out", o.out, "Output file (default stdout)");

  auto* decide = app.add_subcommand("decide", "Decide whether two algebras are isomorphic");
  decide->add_option("--a", o.a, "First algebra file")->required();
  decide->add_option("--b", o.b, "Second algebra file")->required();
  decide->add_flag("--two-sided", o.two_sided, "Add the S*T = 1 generators");
  decide->add_option("--budget-pairs", o.budget_pairs, "Groebner critical pair limit");
  decide->add_option("--budget-assignments", o.budget_assignments, "Zero search node limit");
  decide->add_option("--wall-limit", o.wall_limit, "Seconds");
  decide->add_option("--order", o.order, "degrevlex|lex")->check(CLI::IsMember({"degrevlex", "lex"}));
  decide->add_option("--emit-system", o.emit_system, "Write the polynomial system here");
  decide->add_option("--jobs", o.jobs, "Search workers")->check(CLI::Range(1u, 256u));
  decide->add_option("--certificate", o.certificate, "Write the certificate here when one is found");
  decide->add_option("--out", o.out, "Verdict file (default stdout)");

  auto* verify = app.add_subcommand("verify", "Check a candidate isomorphism matrix");
  verify->add_option("--a", o.a, "Source algebra file")->required();
  verify->add_option("--b", o.b, "Target algebra file")->required();
  verify->add_option("--candidate", o.candidate, "Candidate or certificate file")->required();
  verify->add_option("--out", o.out, "Report file (default stdout)");

  auto* inv = app.add_subcommand("invariants", "Print the invariants used by the prefilter");
  inv->add_option("--in", o.in, "Algebra file")->required();
  inv->add_option("--out", o.out, "Output file (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "isoalg: " << e.what() << "\n";
    return kInputError;
  }

  try {
    if (build->parsed()) {
      const bool needs_field = o.kind != "canonical" && o.kind != "direct-sum";
      if (needs_field && o.field.empty()) throw Error(ErrorKind::ParseError, "--field is required for --kind " + o.kind);
      if ((o.kind == "matrix" || o.kind == "cyclic-group") && o.n == 0) {
        throw Error(ErrorKind::ParseError, "--n is required for --kind " + o.kind);
      }
      if (o.kind == "direct-sum" && (o.a.empty() || o.b.empty())) {
        throw Error(ErrorKind::ParseError, "--a and --b are required for --kind direct-sum");
      }
      if (o.kind == "canonical" && o.in.empty()) throw Error(ErrorKind::ParseError, "--in is required");
      detail::emit(o.out, dump_json(algebra_to_json(detail::build_algebra(o))), out);
      return kOk;
    }
    if (graph->parsed()) {
      detail::emit(o.out, dump_json(algebra_to_json(detail::build_graph_algebra(o))), out);
      return kOk;
    }
    if (extend->parsed()) {
      const Field target = Field::parse(o.field);
      detail::emit(o.out, dump_json(algebra_to_json(scalar_extension(read_algebra_file(o.in), target))), out);
      return kOk;
    }
    if (decide->parsed()) {
      const Algebra a = read_algebra_file(o.a);
      const Algebra b = read_algebra_file(o.b);
      SearchBudget budget{o.budget_assignments, o.budget_pairs, o.wall_limit};
      DecideOptions opts{o.two_sided, o.order == "lex" ? OrderKind::Lex : OrderKind::DegRevLex, o.jobs};
      if (!o.emit_system.empty()) {
        if (a.dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "--emit-system needs equal dimensions");
        write_file_atomic(o.emit_system, dump_json(system_to_json(build_iso_system(a, b, o.two_sided, opts.order))));
      }
      const Verdict v = decide_isomorphism(a, b, budget, opts);
      if (v.certificate && !o.certificate.empty()) {
        write_file_atomic(o.certificate, dump_json(certificate_to_json(*v.certificate)));
      }
      detail::emit(o.out, dump_json(verdict_to_json(v)), out);
      return v.kind == VerdictKind::Unknown ? kUndecided : kOk;
    }
    if (verify->parsed()) {
      const Algebra a = read_algebra_file(o.a);
      const Algebra b = read_algebra_file(o.b);
      const CandidateIso c = candidate_from_json(a.field(), read_json_file(o.candidate), o.candidate);
      detail::emit(o.out, dump_json(verification_to_json(verify_candidate(a, b, c))), out);
      return kOk;
    }
    if (inv->parsed()) {
      detail::emit(o.out, dump_json(invariants_to_json(compute_invariants(read_algebra_file(o.in)))), out);
      return kOk;
    }
  } catch (const Error& e) {
    err << "isoalg: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "isoalg: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

inline int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args);
}

}  // namespace isoalg::cli

#endif  // ISOALG_CLI_HPP
