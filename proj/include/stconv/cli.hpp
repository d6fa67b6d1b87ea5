#pragma once

#include "CLI11.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "stconv/classify.hpp"
#include "stconv/density.hpp"
#include "stconv/error.hpp"
#include "stconv/parse.hpp"
#include "stconv/report.hpp"
#include "stconv/stanalysis.hpp"
#include "stconv/theorems.hpp"

namespace stconv::cli {

inline constexpr const char* kHorizonEnv = "STCONV_HORIZON";
inline constexpr std::uint64_t kDefaultDensityHorizon = 1'000'000;

enum ExitCode : int { ok = 0, expectation_failed = 1, bad_input = 2, runtime_failure = 3 };

/// Everything a command needs, with defaults resolved. Echoed into reports.
struct RunConfig {
  std::string command;
  std::uint64_t horizon = 0;
  double tolerance = 0;
  std::vector<double> epsilon_grid = default_epsilon_grid();
  std::string output = "json";
  std::uint64_t seed = 1;
  std::optional<std::string> expect;
  std::string set;
  std::string sequence;
  std::optional<std::string> candidate;
  std::string op;
  std::string property;
  std::string corpus = "auto";
  std::string schedule = "geometric(10)";
  std::optional<std::string> target;
  std::vector<double> probes;
  bool weak = false;
  std::vector<std::string> checks;
};

/// Default horizon for a command, after the environment override.
inline std::uint64_t default_horizon(const std::string& command) {
  if (const char* env = std::getenv(kHorizonEnv); env && *env) {
    try {
      std::size_t used = 0;
      auto v = std::stoull(env, &used);
      if (used == std::string(env).size() && v >= 2) return v;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument(std::string(kHorizonEnv) + " must be an integer >= 2, got '" + env + "'");
  }
  return command == "density" ? kDefaultDensityHorizon : kDefaultSequenceHorizon;
}

namespace detail {

inline Json config_json(const RunConfig& c) {
  Json j;
  j["command"] = c.command;
  j["horizon"] = c.horizon;
  j["tolerance"] = c.tolerance;
  if (c.command != "density") j["epsilon_grid"] = c.epsilon_grid;
  j["seed"] = c.seed;
  j["output"] = c.output;
  if (c.expect) j["expect"] = *c.expect;
  if (c.command == "density") {
    j["set"] = c.set;
    j["schedule"] = c.schedule;
    j["target"] = c.target ? Json(*c.target) : Json(nullptr);
  }
  if (c.command == "converge" || c.command == "bounded" || c.command == "cauchy") j["sequence"] = c.sequence;
  if (c.command == "converge") j["candidate"] = c.candidate ? Json(*c.candidate) : Json(nullptr);
  if (c.command == "bounded") {
    j["probes"] = c.probes;
    j["weak"] = c.weak;
  }
  if (c.command == "classify") {
    j["operator"] = c.op;
    j["property"] = c.property;
    j["corpus"] = c.corpus;
  }
  if (c.command == "suite") j["checks"] = c.checks;
  return j;
}

inline void emit(std::ostream& out, const RunConfig& c, const Json& result) {
  Json doc;
  doc["config"] = config_json(c);
  doc["result"] = result;
  out << doc.dump(2) << "\n";
}

inline int check_expectation(const RunConfig& c, Decision d, std::ostream& err) {
  if (!c.expect || *c.expect == to_string(d)) return ExitCode::ok;
  err << "expectation failed: wanted " << *c.expect << ", got " << to_string(d) << "\n";
  return ExitCode::expectation_failed;
}

inline int run_density(RunConfig& c, std::ostream& out, std::ostream& err) {
  auto set = parse_set(c.set);
  auto sched = parse_schedule(c.schedule);
  c.set = set.descriptor();
  c.schedule = sched.describe();
  std::optional<Rational> target = c.target ? std::optional(parse_rational(*c.target)) : set.analytic_density();
  if (target) c.target = target->describe();
  auto profile = density_profile(set, c.horizon, sched);
  std::optional<DensityVerdict> verdict;
  if (target) verdict = density_verdict(profile, *target, c.tolerance);
  if (c.output == "csv") {
    out << profile_csv(profile);
  } else {
    Json r;
    r["set"] = c.set;
    r["analytic_density"] = set.analytic_density() ? Json(set.analytic_density()->describe()) : Json(nullptr);
    r["count"] = profile.counts.back();
    r["final_ratio"] = profile.final_ratio();
    r["checkpoints"] = checkpoints_json(profile);
    r["verdict"] = verdict ? density_verdict_json(*verdict) : Json(nullptr);
    emit(out, c, r);
  }
  if (c.expect && !verdict) {
    err << "expectation needs a target density (--target)\n";
    return ExitCode::bad_input;
  }
  return verdict ? check_expectation(c, verdict->decision, err) : ExitCode::ok;
}

inline int emit_verdict(const RunConfig& c, const StVerdict& v, std::ostream& out, std::ostream& err) {
  if (c.output == "csv")
    out << verdict_csv(v);
  else
    emit(out, c, verdict_json(v));
  return check_expectation(c, v.decision, err);
}

inline AnalysisOptions analysis_options(const RunConfig& c) {
  return {c.horizon, c.tolerance, Schedule::geometric(10)};
}

inline int run_converge(RunConfig& c, std::ostream& out, std::ostream& err) {
  auto seq = parse_sequence(c.sequence);
  c.sequence = seq.label();
  StVerdict v;
  if (c.candidate) {
    auto cand = parse_element(*c.candidate);
    c.candidate = cand.describe();
    v = st_converges(seq, cand, c.epsilon_grid, analysis_options(c));
  } else {
    v = st_converges_search(seq, c.epsilon_grid, analysis_options(c));
  }
  return emit_verdict(c, v, out, err);
}

inline int run_bounded(RunConfig& c, std::ostream& out, std::ostream& err) {
  auto seq = parse_sequence(c.sequence);
  c.sequence = seq.label();
  if (c.probes.empty()) c.probes = default_probes(c.horizon);
  const auto a = analysis_options(c);
  StVerdict v = c.weak ? weakly_st_bounded(seq, default_probe_functionals(seq.space().dim, c.seed), c.probes, a)
                       : st_bounded(seq, c.probes, a);
  return emit_verdict(c, v, out, err);
}

inline int run_cauchy(RunConfig& c, std::ostream& out, std::ostream& err) {
  auto seq = parse_sequence(c.sequence);
  c.sequence = seq.label();
  return emit_verdict(c, st_cauchy(seq, c.epsilon_grid, analysis_options(c)), out, err);
}

inline int run_classify(RunConfig& c, std::ostream& out, std::ostream& err) {
  auto m = parse_mapping(c.op);
  c.op = describe(m);
  auto prop = property_from_string(c.property);
  if (!prop) throw std::invalid_argument("unknown property '" + c.property + "'");
  Corpus corpus = c.corpus == "auto"     ? default_corpus(m)
                  : c.corpus == "sparse" ? sparse_corpus()
                  : c.corpus == "cauchy" ? cauchy_corpus()
                                         : dense_corpus(std::stoul(c.corpus.substr(6)));
  ClassifyOptions opt;
  opt.horizon = c.horizon;
  opt.tolerance = c.tolerance;
  opt.epsilon_grid = c.epsilon_grid;
  auto r = classify(m, *prop, corpus, opt);
  if (c.output == "csv")
    out << classification_csv(r);
  else
    emit(out, c, classification_json(r));
  if (!c.expect) return ExitCode::ok;
  const std::string want = *c.expect == "confirmed" ? "consistent" : *c.expect;
  if (want == to_string(r.outcome)) return ExitCode::ok;
  err << "expectation failed: wanted " << want << ", got " << to_string(r.outcome) << "\n";
  return ExitCode::expectation_failed;
}

inline int run_suite_command(RunConfig& c, std::ostream& out, std::ostream& err) {
  SuiteOptions opt;
  opt.classify.horizon = c.horizon;
  opt.classify.tolerance = c.tolerance;
  opt.classify.epsilon_grid = c.epsilon_grid;
  std::vector<TheoremCheckResult> results;
  if (c.checks.empty())
    results = run_suite(opt);
  else
    for (const auto& id : c.checks) results.push_back(check_theorem(id, opt));
  if (c.output == "csv") {
    out << suite_csv(results);
  } else {
    Json arr = Json::array();
    for (const auto& r : results) arr.push_back(theorem_json(r));
    emit(out, c, arr);
  }
  bool all = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed(); });
  for (const auto& r : results)
    if (!r.passed()) err << "check " << r.id << " failed (" << r.passes << "/" << r.instances << ")\n";
  return all ? ExitCode::ok : ExitCode::expectation_failed;
}

}  // namespace detail

/// Runs one command. `args` excludes the program name. Reports go to `out`,
/// diagnostics to `err`.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-horizon statistical convergence and operator classification"};
  app.require_subcommand(1);
  RunConfig c;
  std::optional<std::uint64_t> horizon;
  std::optional<double> tolerance;

  auto common = [&](CLI::App* sub, bool with_eps) {
    sub->add_option("--horizon", horizon, "Largest index examined")->check(CLI::Range(2ULL, ~0ULL));
    sub->add_option("--tolerance", tolerance, "Density tolerance")->check(CLI::PositiveNumber);
    if (with_eps)
      sub->add_option("--eps", c.epsilon_grid, "Comma-separated epsilon grid")
          ->delimiter(',')
          ->check(CLI::PositiveNumber);
    sub->add_option("--seed", c.seed, "Seed for randomized probes");
    sub->add_option("--output", c.output, "Report format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--expect", c.expect, "Exit 1 unless the decision matches")
        ->check(CLI::IsMember({"confirmed", "refuted", "inconclusive", "consistent"}));
  };

  auto* density = app.add_subcommand("density", "Density profile of an index set");
  density->add_option("--set", c.set, "Index set descriptor")->required();
  density->add_option("--schedule", c.schedule, "Checkpoint schedule");
  density->add_option("--target", c.target, "Target density p/q (default: analytic density)");
  common(density, false);

  auto* converge = app.add_subcommand("converge", "Statistical convergence of a sequence");
  converge->add_option("--sequence", c.sequence, "Sequence descriptor")->required();
  converge->add_option("--candidate", c.candidate, "Limit candidate (default: searched)");
  common(converge, true);

  auto* bounded = app.add_subcommand("bounded", "Statistical boundedness of a sequence");
  bounded->add_option("--sequence", c.sequence, "Sequence descriptor")->required();
  bounded->add_option("--probes", c.probes, "Comma-separated probe bounds M")->delimiter(',');
  bounded->add_flag("--weak", c.weak, "Use probe functionals (dense sequences)");
  common(bounded, false);

  auto* cauchy = app.add_subcommand("cauchy", "Statistical Cauchy property of a sequence");
  cauchy->add_option("--sequence", c.sequence, "Sequence descriptor")->required();
  common(cauchy, true);

  auto* cls = app.add_subcommand("classify", "Classify an operator against a corpus");
  cls->add_option("--operator", c.op, "Operator or transform descriptor")->required();
  cls->add_option("--property", c.property, "Property")
      ->required()
      ->check(CLI::IsMember({"st_bounded", "n_st_bounded", "st_continuous", "n_st_continuous", "st_compact"}));
  cls->add_option("--corpus", c.corpus, "auto, sparse, cauchy or dense(d)");
  common(cls, true);

  auto* suite = app.add_subcommand("suite", "Run the theorem suite");
  suite->add_option("--check", c.checks, "Run only these checks");
  common(suite, true);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return ExitCode::ok;
    }
    err << "error: " << e.what() << "\n";
    return ExitCode::bad_input;
  }

  try {
    c.command = app.get_subcommands().front()->get_name();
    c.horizon = horizon ? *horizon : default_horizon(c.command);
    c.tolerance = tolerance ? *tolerance : (c.command == "classify" || c.command == "suite")
                                               ? kClassificationTolerance
                                               : kDefaultTolerance;
    if (c.corpus != "auto" && c.corpus != "sparse" && c.corpus != "cauchy") {
      const bool dense_form = c.corpus.rfind("dense(", 0) == 0 && c.corpus.back() == ')' && c.corpus.size() > 7 &&
                              std::all_of(c.corpus.begin() + 6, c.corpus.end() - 1, [](unsigned char ch) { return std::isdigit(ch) != 0; });
      if (!dense_form) throw std::invalid_argument("unknown corpus '" + c.corpus + "'");
    }
    if (c.command == "density") return detail::run_density(c, out, err);
    if (c.command == "converge") return detail::run_converge(c, out, err);
    if (c.command == "bounded") return detail::run_bounded(c, out, err);
    if (c.command == "cauchy") return detail::run_cauchy(c, out, err);
    if (c.command == "classify") return detail::run_classify(c, out, err);
    return detail::run_suite_command(c, out, err);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return ExitCode::bad_input;
  } catch (const SpaceMismatch& e) {
    err << "space mismatch: " << e.what() << "\n";
    return ExitCode::bad_input;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << "\n";
    return ExitCode::bad_input;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return ExitCode::runtime_failure;
  }
}

}  // namespace stconv::cli
