#pragma once

// Command-line front end. `run` is the whole program minus process setup so
// tests can drive it in-process.
//
// Exit codes: 0 success, 2 malformed input or parameters, 3 resource
// exhausted, 4 internal verification failure.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "padic_orth/error.hpp"
#include "padic_orth/generator.hpp"
#include "padic_orth/io.hpp"
#include "padic_orth/lattice.hpp"
#include "padic_orth/norm.hpp"
#include "padic_orth/oracle.hpp"
#include "padic_orth/orthogonalize.hpp"
#include "padic_orth/selftest.hpp"

namespace padic_orth::cli {

using json = nlohmann::json;

enum ExitCode : int { kOk = 0, kMalformed = 2, kExhausted = 3, kVerificationFailed = 4 };

struct CommonFlags {
  std::string instance_path;
  std::string out_path;
  std::uint64_t seed = 0x6f7274686fULL;
  unsigned max_level = 64;
  std::uint64_t trials = 500;
  unsigned depth = 5;
  bool verify = true;
  bool stats = false;
};

struct GenFlags {
  unsigned long p = 2;
  std::size_t n = 2;
  unsigned long d = 1;
  long entry_bound = 50;
  std::size_t count = 10;
  std::size_t rank = 0;
  bool dual = false;
};

namespace detail {

inline std::string fnv1a64(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << "fnv1a64:" << std::hex << h;
  return os.str();
}

inline json stats_json(const SearchStats& s) {
  return json{{"calls", s.calls},
              {"nodes_explored", s.nodes_explored},
              {"norm_evaluations", s.norm_evaluations},
              {"terminal_level", s.terminal_level}};
}

inline json exponents_json(const WeightedCoordinateNorm& norm, const std::vector<QVector>& vectors) {
  json a = json::array();
  for (const auto& v : vectors) a.push_back(io::to_json(norm.exponent(v), norm.prime()));
  return a;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::MalformedInput, "cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::MalformedInput, "cannot write '" + path + "'");
  f << text;
}

/// CVP/coset inputs: an explicit target against the whole basis, otherwise
/// basis[0] against the lattice of the remaining vectors.
inline std::pair<PAdicLattice, QVector> cvp_problem(const Instance& inst) {
  if (inst.target) return {PAdicLattice(inst.prime(), inst.basis), *inst.target};
  if (inst.basis.size() < 2) {
    throw Error(ErrorKind::InvalidParameters, "cvp needs a target or at least two basis vectors");
  }
  return {PAdicLattice(inst.prime(), std::vector<QVector>(inst.basis.begin() + 1, inst.basis.end())),
          inst.basis.front()};
}

struct Context {
  const CommonFlags& flags;
  SearchOptions search;
  bool all_verified = true;
};

inline json sampled_json(const SampledCheck& s) {
  json j{{"orthogonal", s.orthogonal}, {"trials_run", s.trials_run}};
  if (!s.orthogonal) {
    json w = json::array();
    for (const auto& a : s.witness) w.push_back(a.get_str());
    j["witness"] = w;
    j["witness_sum_w"] = s.witness_sum.to_string();
    j["witness_parts_w"] = s.witness_parts.to_string();
  }
  return j;
}

inline json run_orthogonalize(Context& ctx, const Instance& inst) {
  const OrthogonalBasisReport rep = orthogonalize(inst.norm, inst.basis, ctx.search);
  json j{{"vectors", io::to_json(rep.vectors)},
         {"exponents", exponents_json(inst.norm, rep.vectors)},
         {"change_of_basis", io::to_json(rep.change_of_basis)}};
  if (ctx.flags.verify) {
    const bool exact = oracle::check_orthogonal_determinant(inst.norm, rep.vectors).orthogonal;
    const SampledCheck sampled = check_orthogonal_sampled(inst.norm, rep.vectors, ctx.flags.trials, ctx.flags.depth,
                                                          ctx.flags.seed);
    j["verdicts"] = json{{"determinant", exact}, {"sampled", sampled_json(sampled)}};
    if (!exact || !sampled.orthogonal) ctx.all_verified = false;
  }
  if (ctx.flags.stats) j["stats"] = stats_json(rep.stats);
  return j;
}

inline json run_orthogonalize2(Context& ctx, const Instance& inst) {
  if (!inst.second_norm) throw Error(ErrorKind::InvalidParameters, "orthogonalize2 needs a second_norm");
  const NormPair<WeightedCoordinateNorm> pair(inst.norm, *inst.second_norm);
  const OrthogonalBasisReport rep = orthogonalize_simultaneous(pair, inst.basis, ctx.search);
  json j{{"vectors", io::to_json(rep.vectors)},
         {"exponents", json::array({exponents_json(inst.norm, rep.vectors),
                                    exponents_json(*inst.second_norm, rep.vectors)})},
         {"change_of_basis", io::to_json(rep.change_of_basis)}};
  if (ctx.flags.verify) {
    const bool first = oracle::check_orthogonal_determinant(inst.norm, rep.vectors).orthogonal;
    const bool second = oracle::check_orthogonal_determinant(*inst.second_norm, rep.vectors).orthogonal;
    const SampledCheck s1 = check_orthogonal_sampled(inst.norm, rep.vectors, ctx.flags.trials, ctx.flags.depth,
                                                     ctx.flags.seed);
    const SampledCheck s2 = check_orthogonal_sampled(*inst.second_norm, rep.vectors, ctx.flags.trials,
                                                     ctx.flags.depth, ctx.flags.seed);
    j["verdicts"] = json{{"determinant", json::array({first, second})},
                         {"sampled", json::array({sampled_json(s1), sampled_json(s2)})}};
    if (!first || !second || !s1.orthogonal || !s2.orthogonal) ctx.all_verified = false;
  }
  if (ctx.flags.stats) j["stats"] = stats_json(rep.stats);
  return j;
}

inline json run_rank2(Context& ctx, const Instance& inst) {
  if (inst.basis.size() != 2) throw Error(ErrorKind::InvalidParameters, "rank2 needs exactly two basis vectors");
  const Rank2LatticeBasis out = orthogonalize_rank2_lattice(inst.norm, inst.basis[0], inst.basis[1], ctx.search);
  const std::vector<QVector> vectors{out.alpha, out.beta};
  json j{{"vectors", io::to_json(vectors)},
         {"exponents", exponents_json(inst.norm, vectors)},
         {"change_of_basis", io::to_json(out.change_of_basis)}};
  if (ctx.flags.verify) {
    const Prime p = inst.prime();
    bool integral = true;
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t k = 0; k < 2; ++k) {
        if (valuation(out.change_of_basis(i, k), p) < ExtInt(0)) integral = false;
      }
    const bool unimodular = integral && valuation(det(out.change_of_basis), p) == ExtInt(0);
    const bool reproduces = QMatrix::from_columns(inst.basis) * out.change_of_basis == QMatrix::from_columns(vectors);
    const bool exact = oracle::check_orthogonal_determinant(inst.norm, vectors).orthogonal;
    j["verdicts"] = json{{"unimodular", unimodular && reproduces}, {"determinant", exact}};
    if (!unimodular || !reproduces || !exact) ctx.all_verified = false;
  }
  if (ctx.flags.stats) j["stats"] = stats_json(out.stats);
  return j;
}

inline json run_cvp(Context& ctx, const Instance& inst) {
  const auto [lattice, target] = cvp_problem(inst);
  const CVPResult res = solve_cvp(inst.norm, lattice, target, ctx.search);
  json coeffs = json::array();
  for (const auto& c : res.coefficients) coeffs.push_back(c.get_str());
  json j{{"closest", io::to_json(res.closest)},
         {"coefficients", coeffs},
         {"distance", io::to_json(res.distance, inst.prime())},
         {"level", res.level}};
  if (ctx.flags.stats) j["stats"] = stats_json(res.stats);
  if (ctx.flags.verify) {
    SearchOptions budget = ctx.search;
    budget.max_nodes = 2'000'000;
    try {
      const CVPResult slow = oracle::exhaustive_cvp(inst.norm, lattice, target, 0, budget);
      const bool agree = slow.distance == res.distance && slow.coefficients == res.coefficients;
      j["verdicts"] = json{{"exhaustive_agrees", agree}};
      if (ctx.flags.stats) j["oracle_stats"] = stats_json(slow.stats);
      if (!agree) ctx.all_verified = false;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ResourceExhausted) throw;
      j["verdicts"] = json{{"exhaustive_agrees", nullptr}, {"skipped", "exhaustive oracle over node budget"}};
    }
  }
  return j;
}

inline json run_cosets(Context& ctx, const Instance& inst) {
  const auto [lattice, target] = cvp_problem(inst);
  const CosetValueTable table = coset_norm_values(inst.norm, lattice, target, 0, ctx.search);
  json entries = json::array();
  for (const auto& e : table.entries) {
    json item = io::to_json(e.exponent, inst.prime());
    item["representative"] = io::to_json(e.representative);
    entries.push_back(item);
  }
  json j{{"values", entries}};
  if (ctx.flags.stats) j["stats"] = stats_json(table.stats);
  if (ctx.flags.verify) {
    const CVPResult res = solve_cvp(inst.norm, lattice, target, ctx.search);
    const bool agree = table.closest().exponent == res.distance;
    j["verdicts"] = json{{"minimum_matches_cvp", agree}};
    if (!agree) ctx.all_verified = false;
  }
  return j;
}

inline json run_lvp(Context& ctx, const Instance& inst) {
  const PAdicLattice lattice(inst.prime(), inst.basis);
  const LVPResult res = solve_lvp(inst.norm, lattice);
  json j{{"longest", io::to_json(res.longest)},
         {"index", res.index},
         {"exponent", io::to_json(res.exponent, inst.prime())}};
  if (ctx.flags.verify) j["verdicts"] = json{{"bound_sampled", true}};
  return j;
}

inline json run_induced_norm(Context& ctx, const Instance& inst) {
  const WeightedCoordinateNorm induced = lattice_induced_norm(inst.basis, inst.prime());
  json j{{"norm", io::to_json(induced)}};
  if (ctx.flags.verify) {
    const bool exact = oracle::check_orthogonal_determinant(induced, inst.basis).orthogonal;
    j["verdicts"] = json{{"basis_orthogonal", exact}};
    if (!exact) ctx.all_verified = false;
  }
  return j;
}

inline json run_check(Context& ctx, const Instance& inst) {
  const oracle::DeterminantCheck exact = oracle::check_orthogonal_determinant(inst.norm, inst.basis);
  const SampledCheck sampled =
      check_orthogonal_sampled(inst.norm, inst.basis, ctx.flags.trials, ctx.flags.depth, ctx.flags.seed);
  json j{{"orthogonal", exact.orthogonal},
         {"determinant", json{{"orthogonal", exact.orthogonal},
                              {"determinant_w", to_string(exact.determinant_exponent)},
                              {"exponent_sum_w", to_string(exact.exponent_sum)}}},
         {"sampled", sampled_json(sampled)},
         {"exponents", exponents_json(inst.norm, inst.basis)}};
  // The sampled check is one-sided: it may only refute, never contradict a
  // determinant "true".
  if (ctx.flags.verify && exact.orthogonal && !sampled.orthogonal) ctx.all_verified = false;
  return j;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Norm-orthogonal bases over Q_p", "padic_orth"};
  app.require_subcommand(1);
  CommonFlags flags;
  GenFlags gen;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--instance", flags.instance_path, "Instance or corpus JSON file");
    sub->add_option("--out", flags.out_path, "Write the report here instead of stdout");
    sub->add_option("--seed", flags.seed, "Seed for sampled checks");
    sub->add_option("--max-level", flags.max_level, "Search level cap")->check(CLI::PositiveNumber);
    sub->add_option("--trials", flags.trials, "Sampled-check trials");
    sub->add_option("--depth", flags.depth, "Sampled-check digit depth")->check(CLI::PositiveNumber);
    sub->add_flag("--verify,!--no-verify", flags.verify, "Cross-check results with the oracle");
    sub->add_flag("--stats", flags.stats, "Include search counters");
  };

  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate an instance corpus");
  gen_cmd->add_option("--seed", flags.seed, "Corpus seed");
  gen_cmd->add_option("--out", flags.out_path, "Output file (default stdout)");
  gen_cmd->add_option("--p", gen.p, "Prime");
  gen_cmd->add_option("--n", gen.n, "Dimension");
  gen_cmd->add_option("--d", gen.d, "Weight denominator");
  gen_cmd->add_option("--entry-bound", gen.entry_bound, "Bound on basis entries");
  gen_cmd->add_option("--count", gen.count, "Number of instances");
  gen_cmd->add_option("--rank", gen.rank, "Basis size (default n)");
  gen_cmd->add_flag("--dual", gen.dual, "Also draw a second norm");

  struct Command {
    const char* name;
    const char* help;
    json (*body)(detail::Context&, const Instance&);
  };
  const Command commands[] = {
      {"orthogonalize", "N-orthogonal basis of the instance basis span", &detail::run_orthogonalize},
      {"orthogonalize2", "Basis orthogonal for norm and second_norm", &detail::run_orthogonalize2},
      {"rank2", "N-orthogonal basis of a rank-2 lattice", &detail::run_rank2},
      {"cvp", "Closest vector (target, or basis[0] vs the rest)", &detail::run_cvp},
      {"lvp", "Longest lattice vector", &detail::run_lvp},
      {"cosets", "All norm values on the target coset", &detail::run_cosets},
      {"induced-norm", "The norm a full-rank lattice induces", &detail::run_induced_norm},
      {"check", "Run both orthogonality checkers on the basis", &detail::run_check},
  };
  std::vector<std::pair<CLI::App*, const Command*>> subs;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    add_common(sub);
    subs.emplace_back(sub, &c);
  }
  CLI::App* selftest_cmd = app.add_subcommand("selftest", "Run the acceptance suite");
  selftest_cmd->add_option("--seed", flags.seed, "Suite seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kMalformed;
  }

  try {
    if (gen_cmd->parsed()) {
      GenerationParams params;
      params.p = gen.p;
      params.n = gen.n;
      params.weight_denominator = gen.d;
      params.entry_bound = gen.entry_bound;
      params.rank = gen.rank == gen.n ? 0 : gen.rank;
      params.dual = gen.dual;
      const std::vector<Instance> instances = generate_instances(flags.seed, params, gen.count);
      detail::write_output(flags.out_path, io::corpus_to_json(flags.seed, params, instances).dump(2) + "\n", out);
      return kOk;
    }
    if (selftest_cmd->parsed()) {
      selftest::Options opt;
      if (selftest_cmd->count("--seed") > 0) opt.seed = flags.seed;
      const auto results = selftest::run_all(opt, out);
      for (const auto& r : results) {
        if (!r.passed) return kVerificationFailed;
      }
      return kOk;
    }

    for (const auto& [sub, command] : subs) {
      if (!sub->parsed()) continue;
      if (flags.instance_path.empty()) throw Error(ErrorKind::InvalidParameters, "--instance is required");
      const auto start = std::chrono::steady_clock::now();
      const std::string text = detail::read_file(flags.instance_path);
      const json input = io::parse(text);
      const std::vector<Instance> instances = io::instances_from_json(input);

      detail::Context ctx{flags, SearchOptions{}, true};
      ctx.search.max_level = flags.max_level;
      json results = json::array();
      for (const auto& inst : instances) {
        json r = command->body(ctx, inst);
        if (inst.seed) r["seed"] = std::to_string(*inst.seed);
        results.push_back(std::move(r));
      }
      json report{{"command", command->name},
                  {"arguments", std::vector<std::string>(argv + 1, argv + argc)},
                  {"input_digest", detail::fnv1a64(input.dump())},
                  {"prime", instances.front().prime().value()},
                  {"results", std::move(results)},
                  {"wall_time_seconds",
                   std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()}};
      if (flags.verify) report["verified"] = ctx.all_verified;
      detail::write_output(flags.out_path, report.dump(2) + "\n", out);
      return ctx.all_verified || !flags.verify ? kOk : kVerificationFailed;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::ResourceExhausted: return kExhausted;
      case ErrorKind::VerificationFailure: return kVerificationFailed;
      default: return kMalformed;
    }
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed JSON input: " << e.what() << "\n";
    return kMalformed;
  }
  return kMalformed;
}

}  // namespace padic_orth::cli
