/// @file   cli.hpp
/// @brief  The relctl command-line front end
///
/// Exit codes: 0 success (an infeasible control problem is still a success),
/// 1 usage or semantic error, 2 election or script syntax error, 3 script
/// type error.

#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "relctl/control.hpp"
#include "relctl/dsl.hpp"
#include "relctl/election.hpp"
#include "relctl/oracle.hpp"
#include "relctl/reduction.hpp"

namespace relctl::cli {

enum exit_code : int { ok = 0, usage = 1, syntax = 2, typing = 3 };

/// Bad flag combinations or unreadable files.
class usage_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw usage_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spill(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text))
    throw usage_error("cannot write " + path);
}

inline Election load_election(const std::string &path) {
  return parse_election(slurp(path));
}

inline nlohmann::json load_json(const std::string &path) {
  try {
    return nlohmann::json::parse(slurp(path));
  } catch (const nlohmann::json::parse_error &e) {
    throw instance_error(path + ": malformed JSON", {e.what()});
  }
}

inline std::string join(const std::vector<std::size_t> &v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i)
    s += (i ? " " : "") + std::to_string(v[i]);
  return v.empty() ? "(none)" : s;
}

inline std::string names(const Election &e, const std::vector<std::uint64_t> &idx) {
  std::string s;
  for (std::size_t i = 0; i < idx.size(); ++i)
    s += (i ? " " : "") + e.alternatives[idx[i]];
  return idx.empty() ? "(none)" : s;
}

/// "1,2,4" or "1 2 4" into voter numbers; the empty string means none.
inline std::vector<std::size_t> voter_list(const std::string &text) {
  std::vector<std::size_t> out;
  std::string tok;
  std::istringstream in(text);
  while (std::getline(in, tok, ',')) {
    std::istringstream words(tok);
    std::string w;
    while (words >> w) {
      if (w.find_first_not_of("0123456789") != std::string::npos)
        throw usage_error("--delete: '" + w + "' is not a voter number");
      out.push_back(std::stoull(w));
    }
  }
  return out;
}

inline std::size_t target_index(const Election &e, const std::string &name) {
  if (auto a = e.find(name))
    return *a;
  throw election_error("unknown alternative '" + name + "'");
}

inline void print_matrix(std::ostream &out, const std::string &title,
                         const Relation &r) {
  out << title << ":\n" << to_matrix_string(r);
}

} // namespace detail

struct Streams {
  std::ostream &out;
  std::ostream &err;
};

// -- winners -------------------------------------------------------------------

inline int cmd_winners(const std::string &file, bool json, Streams io) {
  const Election e = detail::load_election(file);
  ControlSession s(e);
  const DominanceView v = dominance(e, s.P());
  const Relation G = covering(v.C);
  const auto unc = uncovered(G);
  if (json) {
    nlohmann::json j = dominance_json(e, v, unc);
    j["covering"] = matrix_json(G);
    j["alternatives"] = e.alternatives;
    io.out << j.dump(2) << '\n';
    return ok;
  }
  const auto w = condorcet_winners(v.C);
  io.out << "voters: " << e.n() << "\n";
  io.out << "winner: " << (w.empty() ? "none" : e.alternatives[w.front()]) << "\n";
  detail::print_matrix(io.out, "dominance", v.C);
  detail::print_matrix(io.out, "covering", G);
  io.out << "uncovered: " << detail::names(e, unc) << "\n";
  return ok;
}

// -- control -------------------------------------------------------------------

struct ControlOptions {
  std::string file, target, rule = "condorcet";
  std::size_t enumerate = 10;
  bool oracle = false, json = false;
};

inline int cmd_control(const ControlOptions &o, Streams io) {
  const Election e = detail::load_election(o.file);
  const Rule rule = parse_rule(o.rule);
  const std::size_t t = detail::target_index(e, o.target);
  ControlResult r;
  if (o.oracle) {
    OracleConfig cfg = OracleConfig::from_env();
    cfg.limit = o.enumerate;
    r = oracle_solve(e, t, rule, cfg);
  } else {
    ControlSession s(e);
    r = s.solve(t, rule, o.enumerate);
  }
  if (o.json) {
    io.out << to_json(r).dump(2) << '\n';
    return ok;
  }
  io.out << "target: " << r.target << "\nrule: " << to_string(r.rule)
         << "\nbackend: " << r.backend << "\nfeasible: " << (r.feasible ? "yes" : "no")
         << '\n';
  if (!r.feasible)
    return ok;
  io.out << "min_deletions: " << *r.min_deletions << "\nnum_optimal: " << r.num_optimal
         << '\n';
  for (const auto &k : r.keeps)
    io.out << "  delete " << detail::join(r.deleted(k)) << "\n";
  if (r.truncated)
    io.out << "  ... " << (r.num_optimal - r.keeps.size())
           << " more (raise --enumerate)\n";
  return ok;
}

// -- check ---------------------------------------------------------------------

struct CheckOptions {
  std::string file, target, rule = "condorcet", deleted;
  bool json = false;
};

inline int cmd_check(const CheckOptions &o, Streams io) {
  const Election e = detail::load_election(o.file);
  const Rule rule = parse_rule(o.rule);
  const std::size_t t = detail::target_index(e, o.target);
  const auto del = detail::voter_list(o.deleted);
  Context ctx;
  const DeletionReport rep = check_deletion(ctx, e, del, t, rule);
  if (o.json) {
    nlohmann::json j;
    j["target"] = o.target;
    j["rule"] = to_string(rule);
    j["deleted"] = del;
    j["wins"] = rep.wins;
    j["dominance"] = matrix_json(rep.C);
    j["covering"] = matrix_json(rep.G);
    j["margins"] = rep.margins;
    j["uncovered"] = names_json(e, rep.uncovered);
    io.out << j.dump(2) << '\n';
    return ok;
  }
  io.out << "deleted: " << detail::join(del) << "\ntarget: " << o.target << " ("
         << to_string(rule) << ")\nwins: " << (rep.wins ? "true" : "false") << '\n';
  detail::print_matrix(io.out, "dominance", rep.C);
  detail::print_matrix(io.out, "covering", rep.G);
  io.out << "uncovered: " << detail::names(e, rep.uncovered) << '\n';
  return ok;
}

// -- eval ----------------------------------------------------------------------

struct EvalOptions {
  std::string script, expr, election, target;
  std::size_t limit = 20;
  bool json = false;
};

inline constexpr std::uint64_t max_printed_cells = 1u << 16;

inline int cmd_eval(const EvalOptions &o, Streams io) {
  if (o.script.empty() == o.expr.empty())
    throw usage_error("eval: give exactly one of a script file or --expr");
  dsl::Script script;
  if (o.expr.empty())
    script = dsl::parse(detail::slurp(o.script));
  else
    script.result = dsl::parse_expression(o.expr);

  std::optional<Election> e;
  std::optional<ControlSession> session;
  Context plain;
  Context *ctx = &plain;
  dsl::Env env;
  if (!o.election.empty()) {
    e = detail::load_election(o.election);
    session.emplace(*e);
    ctx = &session->context();
    std::optional<std::size_t> t;
    if (!o.target.empty())
      t = detail::target_index(*e, o.target);
    env = dsl::election_env(*ctx, *e, session->P(), t);
  } else if (!o.target.empty()) {
    throw usage_error("eval: --target needs --election");
  }
  const dsl::Type type = dsl::typecheck(script, env.types());
  const Relation r = dsl::Evaluator(*ctx, env).run(script);

  const BigInt entries = entry_count(r);
  const bool small = r.source().count() * std::max<std::uint64_t>(r.target().count(), 1) <=
                     max_printed_cells;
  std::vector<std::string> listed;
  if (r.is_vector())
    for (auto i : members(r, o.limit))
      listed.push_back(r.source().label(i));
  if (o.json) {
    nlohmann::json j;
    j["type"] = type.str();
    j["entries"] = entries.str();
    if (r.is_vector())
      j["members"] = listed;
    if (small)
      j["matrix"] = matrix_json(r);
    io.out << j.dump(2) << '\n';
    return ok;
  }
  io.out << "type: " << type.str() << "\nentries: " << entries << '\n';
  if (r.is_vector()) {
    io.out << "members:";
    for (const auto &m : listed)
      io.out << ' ' << m;
    if (entries > listed.size())
      io.out << " ...";
    io.out << '\n';
  } else if (small) {
    io.out << to_matrix_string(r);
  } else {
    io.out << "(matrix too large to print)\n";
  }
  return ok;
}

// -- reduction -----------------------------------------------------------------

struct ReduceOptions {
  std::string input, out, layout;
  bool audit = false;
};

inline int cmd_reduce(const ReduceOptions &o, Streams io) {
  const X4CInstance inst = x4c_from_json(detail::load_json(o.input));
  const ControlInstance ci = build_control_instance(inst);
  const std::string layout = o.layout.empty() ? o.out + ".layout.json" : o.layout;
  detail::spill(o.out, write_election(ci.election));
  detail::spill(layout, layout_json(ci).dump(2) + "\n");
  io.out << "wrote " << o.out << " (" << ci.election.n() << " voters, "
         << ci.election.m() << " alternatives, target " << "astar"
         << ", budget " << ci.layout.budget << ")\nwrote " << layout << '\n';
  if (!o.audit)
    return ok;
  const AuditReport rep = audit_margins(ci.election, ci.layout);
  io.out << "audit: " << rep.pairs_checked << " margins checked, "
         << rep.deviations.size() << " deviations\n"
         << "  margin(b, astar) = " << rep.b_over_astar << "\n"
         << "  margin(astar, s) = " << rep.astar_over_s << "\n"
         << "  margin(b_i, s_j) = " << rep.b_over_other_s << " for j != i\n"
         << "  margin(b_i, s_i) = " << rep.b_over_own_s << "\n";
  for (const auto &d : rep.deviations)
    io.out << "  deviation [" << d.claim << "] " << d.row << " over " << d.col
           << ": expected " << d.expected << ", got " << d.actual << '\n';
  return rep.ok() ? ok : usage;
}

inline int cmd_gen_x4c(std::size_t n, bool planted, std::uint64_t seed,
                       const std::string &out, Streams io) {
  std::mt19937_64 rng(seed);
  const std::string text = to_json(generate_x4c(n, planted, rng)).dump() + "\n";
  if (out.empty())
    io.out << text;
  else
    detail::spill(out, text);
  return ok;
}

inline int cmd_gen_1in3(std::size_t clauses, bool planted, std::uint64_t seed,
                        const std::string &out, Streams io) {
  std::mt19937_64 rng(seed);
  const std::string text =
      to_json(generate_one_in_three(clauses, planted, rng)).dump() + "\n";
  if (out.empty())
    io.out << text;
  else
    detail::spill(out, text);
  return ok;
}

inline int cmd_reduce_1in3(const std::string &input, const std::string &out,
                           Streams io) {
  const X4CInstance x =
      reduce_1in3_to_x4c(one_in_three_from_json(detail::load_json(input)));
  const std::string text = to_json(x).dump() + "\n";
  if (out.empty())
    io.out << text;
  else
    detail::spill(out, text);
  return ok;
}

// -- driver --------------------------------------------------------------------

inline int run(int argc, const char *const *argv, std::ostream &out = std::cout,
               std::ostream &err = std::cerr) {
  Streams io{out, err};
  CLI::App app{"Election control by deleting voters, computed with relation algebra"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "relctl 1.0.0");

  std::string file;
  bool json = false;

  auto *winners = app.add_subcommand("winners", "Condorcet winner, dominance and uncovered set");
  winners->add_option("election", file, "election file")->required();
  winners->add_flag("--json", json, "machine-readable output");

  ControlOptions co;
  auto *control = app.add_subcommand("control", "optimal voter deletions for a target");
  control->add_option("election", co.file, "election file")->required();
  control->add_option("--target", co.target, "alternative that should win")->required();
  control->add_option("--rule", co.rule, "condorcet or uncovered")
      ->check(CLI::IsMember({"condorcet", "uncovered"}));
  control->add_option("--enumerate", co.enumerate, "solutions to list")->check(CLI::NonNegativeNumber);
  control->add_flag("--oracle", co.oracle, "exhaustive search instead of the symbolic solver");
  control->add_flag("--json", co.json, "machine-readable output");

  CheckOptions ko;
  auto *check = app.add_subcommand("check", "re-check one deletion");
  check->add_option("election", ko.file, "election file")->required();
  check->add_option("--target", ko.target, "alternative that should win")->required();
  check->add_option("--rule", ko.rule, "condorcet or uncovered")
      ->check(CLI::IsMember({"condorcet", "uncovered"}));
  check->add_option("--delete", ko.deleted, "deleted voters, e.g. 1,2,4");
  check->add_flag("--json", ko.json, "machine-readable output");

  EvalOptions eo;
  auto *eval = app.add_subcommand("eval", "evaluate a relational script");
  eval->add_option("script", eo.script, "script file (.ra)");
  eval->add_option("--expr", eo.expr, "single expression instead of a script");
  eval->add_option("--election", eo.election, "binds N, A, A2, PN and P");
  eval->add_option("--target", eo.target, "binds the point p");
  eval->add_option("--limit", eo.limit, "vector members to list");
  eval->add_flag("--json", eo.json, "machine-readable output");

  ReduceOptions ro;
  auto *reduce = app.add_subcommand("reduce", "control instance from an X4C instance");
  reduce->add_option("instance", ro.input, "X4C instance (JSON)")->required();
  reduce->add_option("--out", ro.out, "election file to write")->required();
  reduce->add_option("--layout", ro.layout, "sidecar path (default: <out>.layout.json)");
  reduce->add_flag("--audit", ro.audit, "check the margin formulas");

  std::size_t gen_n = 16;
  bool planted = false;
  std::uint64_t seed = 1;
  std::string gen_out;
  auto *gen = app.add_subcommand("gen-x4c", "random X4C instance");
  gen->add_option("--n", gen_n, "ground-set size, a multiple of 4");
  gen->add_flag("--planted", planted, "guarantee an exact cover");
  gen->add_option("--seed", seed, "random seed");
  gen->add_option("--out", gen_out, "output file (default: stdout)");

  std::size_t clauses = 16;
  auto *gen13 = app.add_subcommand("gen-1in3", "random 1-in-3 instance");
  gen13->add_option("--clauses", clauses, "clause count, a multiple of 4");
  gen13->add_flag("--planted", planted, "guarantee satisfiability");
  gen13->add_option("--seed", seed, "random seed");
  gen13->add_option("--out", gen_out, "output file (default: stdout)");

  std::string in13;
  auto *red13 = app.add_subcommand("reduce-1in3", "X4C instance from a 1-in-3 instance");
  red13->add_option("instance", in13, "1-in-3 instance (JSON)")->required();
  red13->add_option("--out", gen_out, "output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? ok : usage;
  }

  try {
    if (winners->parsed())
      return cmd_winners(file, json, io);
    if (control->parsed())
      return cmd_control(co, io);
    if (check->parsed())
      return cmd_check(ko, io);
    if (eval->parsed())
      return cmd_eval(eo, io);
    if (reduce->parsed())
      return cmd_reduce(ro, io);
    if (gen->parsed())
      return cmd_gen_x4c(gen_n, planted, seed, gen_out, io);
    if (gen13->parsed())
      return cmd_gen_1in3(clauses, planted, seed, gen_out, io);
    if (red13->parsed())
      return cmd_reduce_1in3(in13, gen_out, io);
  } catch (const parse_error &e) {
    err << "parse error: " << e.what() << '\n';
    return syntax;
  } catch (const dsl::syntax_error &e) {
    err << e.what() << '\n';
    return syntax;
  } catch (const dsl::type_error &e) {
    err << e.what() << '\n';
    return typing;
  } catch (const instance_error &e) {
    err << "error: " << e.what() << '\n';
    for (const auto &v : e.violations())
      err << "  " << v << '\n';
    return usage;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return usage;
  }
  return usage;
}

} // namespace relctl::cli
