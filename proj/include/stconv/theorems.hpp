#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "stconv/classify.hpp"
#include "stconv/density.hpp"
#include "stconv/operators.hpp"
#include "stconv/parse.hpp"
#include "stconv/sequences.hpp"
#include "stconv/stanalysis.hpp"

namespace stconv {

struct CheckFailure {
  std::string instance;
  std::string reason;
  std::vector<Evaluation> witnesses;
};

struct TheoremCheckResult {
  TheoremCheckResult() = default;
  TheoremCheckResult(std::string id_, std::size_t minimum_) : id(std::move(id_)), minimum(minimum_) {}

  std::string id;
  std::size_t minimum = 1;
  std::size_t instances = 0;
  std::size_t passes = 0;
  std::vector<CheckFailure> failures;
  std::vector<std::string> notes;

  bool passed() const { return failures.empty() && instances >= minimum; }
  const char* status() const { return passed() ? "pass" : "fail"; }

  void record(bool ok, std::string instance, std::string reason = {}, std::vector<Evaluation> witnesses = {}) {
    ++instances;
    if (ok)
      ++passes;
    else
      failures.push_back({std::move(instance), std::move(reason), std::move(witnesses)});
  }
};

struct SuiteOptions {
  ClassifyOptions classify;
  /// Tolerance for the ratio test of theorem_M and the sequence-level checks.
  double fine_tolerance = kDefaultTolerance;
};

/// Seeded d x d matrix with standard normal entries.
inline OperatorSpec random_matrix(std::size_t d, std::uint64_t seed) {
  std::vector<std::vector<double>> rows(d, std::vector<double>(d));
  for (std::size_t i = 0; i < d; ++i) {
    detail::CounterRng rng(seed ^ 0xa11ce5ULL, i + 1);
    for (double& v : rows[i]) v = rng.normal();
  }
  return OperatorSpec::matrix(std::move(rows));
}

namespace detail {

/// Suite checks classify the same operators repeatedly; reports are memoized
/// on (descriptor, property, corpus members, options).
inline ClassificationReport classify_memo(const Mapping& m, Property p, const Corpus& corpus,
                                          const ClassifyOptions& opt) {
  using Key = std::tuple<std::string, int, std::string, std::uint64_t, double, std::vector<double>>;
  static std::mutex mutex;
  static std::map<Key, ClassificationReport> memo;
  std::string members = corpus.version;
  for (const auto& s : corpus.members) members += ";" + s.label();
  Key key{describe(m), static_cast<int>(p), std::move(members), opt.horizon, opt.tolerance, opt.epsilon_grid};
  {
    std::lock_guard lock(mutex);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
  }
  auto r = classify(m, p, corpus, opt);
  std::lock_guard lock(mutex);
  return memo.emplace(std::move(key), std::move(r)).first->second;
}

inline ClassificationReport classify_memo(const Mapping& m, Property p, const ClassifyOptions& opt) {
  return classify_memo(m, p, default_corpus(m), opt);
}

inline std::string expectation_failure(const ClassificationReport& r, Outcome want) {
  return r.op + " " + to_string(r.property) + ": expected " + to_string(want) + ", got " + to_string(r.outcome);
}

inline void expect_outcome(TheoremCheckResult& res, const Mapping& m, Property p, Outcome want, const Corpus& corpus,
                           const SuiteOptions& opt) {
  auto r = classify_memo(m, p, corpus, opt.classify);
  bool ok = r.outcome == want;
  res.record(ok, r.op + " " + to_string(p), ok ? "" : expectation_failure(r, want), ok ? std::vector<Evaluation>{}
                                                                                      : r.witnesses);
}

inline void expect_outcome(TheoremCheckResult& res, const Mapping& m, Property p, Outcome want,
                           const SuiteOptions& opt) {
  expect_outcome(res, m, p, want, default_corpus(m), opt);
}

/// Linear operators covered by the bounded/continuous agreement checks.
inline std::vector<std::string> linear_operator_zoo() {
  return {
      "identity",
      "diag(inv)",
      "diag(trunc_inv(3))",
      "diag(-2.5)",
      "rank1(coord(2),sparse{1:1})",
      "rank1(inv_square_weights,sparse{1:1,3:-2})",
      "finrank(rank1(coord(1),sparse{1:1}),rank1(coord(3),sparse{2:-1}))",
      "compose(diag(inv),diag(prime_scale))",
      "combo(1,identity,-1,diag(inv))",
      "matrix[[2,0],[0,3]]",
      "matrix[[0.5,-1,2],[1,1,0],[0,0,-3]]",
      "diag(prime_scale)",
      "rank1(ramp_weights,sparse{1:1})",
  };
}

/// Norm-bounded linear operators (each has a finite, known operator norm).
inline std::vector<std::string> bounded_operator_zoo() {
  return {
      "identity",
      "diag(inv)",
      "diag(trunc_inv(4))",
      "diag(-2.5)",
      "rank1(coord(2),sparse{1:1})",
      "rank1(inv_square_weights,sparse{1:1,3:-2})",
      "matrix[[2,0],[0,3]]",
      "matrix[[0.5,-1,2],[1,1,0],[0,0,-3]]",
  };
}

/// Smallest M = 2^j for which {n : ||S x_n|| > M ||x_n||} is confirmed
/// density-zero on every member whose st-boundedness is confirmed. The
/// doubling starts at the power of two just below the median ratio, since any
/// smaller M leaves an exceedance set of density >= 1/2.
inline std::optional<double> doubling_ratio_bound(const OperatorSpec& op, const Corpus& corpus,
                                                  const SuiteOptions& opt) {
  const AnalysisOptions a{opt.classify.horizon, opt.fine_tolerance, Schedule::geometric(10)};
  std::vector<std::shared_ptr<const Trace>> ratios;
  double start = 0;
  for (const auto& seq : corpus.members) {
    if (hypothesis_cache().get(seq, Hypothesis::st_bounded, opt.classify).decision != Decision::confirmed) continue;
    auto in = norm_trace(seq, a.horizon);
    auto out = norm_trace(image_sequence(op, seq), a.horizon);
    auto r = std::make_shared<Trace>(a.horizon);
    for (std::size_t k = 0; k < r->size(); ++k) (*r)[k] = in[k] > 0 ? out[k] / in[k] : 0.0;
    Trace sorted(*r);
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2), sorted.end());
    start = std::max(start, sorted[sorted.size() / 2]);
    ratios.push_back(std::move(r));
  }
  if (ratios.empty()) return std::nullopt;
  double m = start > 0 ? std::exp2(std::floor(std::log2(start))) : std::exp2(-30.0);
  for (int step = 0; step < 80; ++step, m *= 2) {
    bool all = true;
    for (const auto& r : ratios) {
      // Relative slack absorbs rounding in ratios that equal M exactly.
      auto set = exceedance_set(r, m * (1 + 1e-12), true, "||Sx_k||/||x_k||");
      if (density_verdict(density_profile(set, a.horizon, a.schedule), Rational::zero(), a.tolerance).decision !=
          Decision::confirmed) {
        all = false;
        break;
      }
    }
    if (all) return m;
  }
  return std::nullopt;
}

}  // namespace detail

// --- individual checks -----------------------------------------------------------

/// Norm-bounded sequences are st-bounded, and norm-bounded operators are
/// n-st-bounded.
inline TheoremCheckResult check_bounded_inclusion(const SuiteOptions& opt = {}) {
  TheoremCheckResult res{"bounded_inclusion", 12};
  std::vector<Corpus> corpora{sparse_corpus(), dense_corpus(3), cauchy_corpus()};
  for (const auto& c : corpora)
    for (const auto& seq : c.members) {
      auto nb = detail::hypothesis_cache().get(seq, Hypothesis::norm_bounded, opt.classify);
      if (nb.decision != Decision::confirmed) continue;
      auto sb = detail::hypothesis_cache().get(seq, Hypothesis::st_bounded, opt.classify);
      res.record(sb.decision == Decision::confirmed, seq.label(),
                 std::string("norm-bounded but st_bounded is ") + to_string(sb.decision));
    }
  for (const auto& d : detail::bounded_operator_zoo())
    detail::expect_outcome(res, parse_mapping(d), Property::n_st_bounded, Outcome::consistent, opt);
  return res;
}

inline TheoremCheckResult check_finite_dim_all_bounded(const SuiteOptions& opt = {}) {
  TheoremCheckResult res{"finite_dim_all_bounded", 20};
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const std::size_t d = 1 + (seed - 1) % 8;
    detail::expect_outcome(res, random_matrix(d, seed), Property::st_bounded, Outcome::consistent, dense_corpus(d),
                           opt);
  }
  return res;
}

/// For st-bounded operators a doubling search finds M with
/// ||S x_n|| <= M ||x_n|| on a set of density one; for matrices M must lie
/// within a factor 2 of the operator norm estimate.
inline TheoremCheckResult check_theorem_M(const SuiteOptions& opt = {}) {
  TheoremCheckResult res{"theorem_M", 8};
  std::vector<std::pair<OperatorSpec, bool>> ops{{OperatorSpec::identity(), true},
                                                 {parse_operator("diag(inv)"), false},
                                                 {parse_operator("rank1(coord(1),sparse{1:2})"), false}};
  for (std::uint64_t seed = 1; seed <= 6; ++seed) ops.emplace_back(random_matrix(2 + (seed - 1) % 3, seed), true);
  for (const auto& [op, compare] : ops) {
    const Corpus corpus = default_corpus(op);
    auto cls = detail::classify_memo(op, Property::st_bounded, corpus, opt.classify);
    if (cls.outcome != Outcome::consistent) {
      res.record(false, op.descriptor(), detail::expectation_failure(cls, Outcome::consistent), cls.witnesses);
      continue;
    }
    auto m = detail::doubling_ratio_bound(op, corpus, opt);
    if (!m) {
      res.record(false, op.descriptor(), "doubling search found no M");
      continue;
    }
    if (!compare) {
      res.record(true, op.descriptor());
      res.notes.push_back(op.descriptor() + ": M = " + format_number(*m));
      continue;
    }
    const double est = operator_norm_estimate(op, 200, corpus.space);
    const bool ok = *m <= 2 * est && est <= 2 * *m;
    res.record(ok, op.descriptor(),
               "M = " + format_number(*m) + " not within a factor 2 of estimate " + format_number(est));
    res.notes.push_back(op.descriptor() + ": M = " + format_number(*m) + ", estimate " + format_number(est));
  }
  return res;
}

/// st-bounded operators form a linear subspace: S + T and alpha S stay consistent.
inline TheoremCheckResult check_subspace_closure(const SuiteOptions& opt = {}) {
  TheoremCheckResult res{"subspace_closure", 4};
  const double alpha = -2.5;
  std::vector<std::pair<OperatorSpec, OperatorSpec>> pairs{
      {random_matrix(2, 1), random_matrix(2, 2)},
      {parse_operator("diag(inv)"), parse_operator("rank1(coord(1),sparse{1:1})")},
      {parse_operator("diag(trunc_inv(5))"), OperatorSpec::identity()},
      {parse_operator("finrank(rank1(coord(1),sparse{2:1}),rank1(coord(2),sparse{1:1}))"),
       parse_operator("diag(0.5)")},
      {random_matrix(3, 4), parse_operator("matrix[[1,0,0],[0,0,0],[0,0,-1]]")},
  };
  for (const auto& [s, t] : pairs) {
    const Corpus corpus = default_corpus(s);
    auto rs = detail::classify_memo(s, Property::st_bounded, corpus, opt.classify);
    auto rt = detail::classify_memo(t, Property::st_bounded, corpus, opt.classify);
    if (rs.outcome != Outcome::consistent || rt.outcome != Outcome::consistent) {
      res.notes.push_back("skipped " + s.descriptor() + ", " + t.descriptor() + ": summands not both consistent");
      continue;
    }
    for (const auto& combo : {OperatorSpec::linear_combo(1, s, 1, t), OperatorSpec::linear_combo(alpha, s, 0, s)}) {
      auto r = detail::classify_memo(combo, Property::st_bounded, corpus, opt.classify);
      res.record(r.outcome == Outcome::consistent, combo.descriptor(),
                 detail::expectation_failure(r, Outcome::consistent), r.witnesses);
    }
  }
  return res;
}

inline TheoremCheckResult check_finite_rank_bounded(const SuiteOptions& opt = {}) {
  TheoremCheckResult res{"finite_rank_bounded", 4};
  for (const char* d : {"finrank(rank1(coord(1),sparse{1:1}),rank1(coord(3),sparse{2:-1}))",
                        "finrank(rank1(inv_square_weights,sparse{1:1,4:2}),rank1(coord(2),sparse{3:1}))",
                        "rank1(weights[1,2],dense[1,0,-1])",
                        "finrank(rank1(weights[1,-1,0.5],dense[2,1]),rank1(coord(3),dense[0,1]))"})
    detail::expect_outcome(res, parse_mapping(d), Property::st_bounded, Outcome::consistent, opt);
  return res;
}

/// For linear operators st-boundedness and st-continuity coincide.
inline TheoremCheckResult check_bounded_iff_continuous(const SuiteOptions& opt = {}) {
  TheoremCheckResult res{"bounded_iff_continuous", 10};
  for (const auto& d : detail::linear_operator_zoo()) {
    auto m = parse_mapping(d);
    auto b = detail::classify_memo(m, Property::st_bounded, opt.classify);
    auto c = detail::classify_memo(m, Property::st_continuous, opt.classify);
    std::vector<Evaluation> w = b.witnesses;
    w.insert(w.end(), c.witnesses.begin(), c.witnesses.end());
    res.record(b.outcome == c.outcome && b.outcome != Outcome::inconclusive, d,
               std::string("st_bounded ") + to_string(b.outcome) + " vs st_continuous " + to_string(c.outcome), w);
    res.notes.push_back(d + ": " + to_string(b.outcome));
  }
  return res;
}

/// Norm-continuous operators are st-continuous and n-st-continuous, and the
/// two statistical notions agree on every operator tried.
inline TheoremCheckResult check_continuity_inclusions(const SuiteOptions& opt = {}) {
  TheoremCheckResult res{"continuity_inclusions", 16};
  for (const auto& d : detail::bounded_operator_zoo()) {
    auto m = parse_mapping(d);
    detail::expect_outcome(res, m, Property::st_continuous, Outcome::consistent, opt);
    detail::expect_outcome(res, m, Property::n_st_continuous, Outcome::consistent, opt);
  }
  for (const auto& d : detail::linear_operator_zoo()) {
    auto m = parse_mapping(d);
    auto a = detail::classify_memo(m, Property::st_continuous, opt.classify);
    auto b = detail::classify_memo(m, Property::n_st_continuous, opt.classify);
    const bool clash = (a.outcome == Outcome::consistent && b.outcome == Outcome::refuted) ||
                       (a.outcome == Outcome::refuted && b.outcome == Outcome::consistent);
    res.record(!clash, d + " st vs n-st",
               std::string("st_continuous ") + to_string(a.outcome) + " vs n_st_continuous " + to_string(b.outcome));
  }
  return res;
}

inline std::vector<std::string> compact_candidates() {
  return {
      "rank1(coord(1),sparse{1:1})",
      "rank1(inv_square_weights,sparse{2:1,3:-1})",
      "finrank(rank1(coord(1),sparse{1:1}),rank1(coord(2),sparse{5:2}))",
      "diag(inv)",
      "diag(trunc_inv(6))",
      "compose(diag(inv),rank1(coord(3),sparse{1:1}))",
      "matrix[[1,2],[0,1]]",
      "rank1(ramp_weights,sparse{1:1})",
  };
}

/// st-compact operators are st-bounded and st-continuous.
inline TheoremCheckResult check_compact_implies_bounded_and_continuous(const SuiteOptions& opt = {}) {
  TheoremCheckResult res{"compact_implies_bounded_and_continuous", 5};
  for (const auto& d : compact_candidates()) {
    auto m = parse_mapping(d);
    auto k = detail::classify_memo(m, Property::st_compact, opt.classify);
    if (k.outcome != Outcome::consistent) {
      res.notes.push_back(d + ": st_compact " + to_string(k.outcome) + ", not an instance");
      continue;
    }
    auto b = detail::classify_memo(m, Property::st_bounded, opt.classify);
    auto c = detail::classify_memo(m, Property::st_continuous, opt.classify);
    std::vector<Evaluation> w = b.witnesses;
    w.insert(w.end(), c.witnesses.begin(), c.witnesses.end());
    res.record(b.outcome == Outcome::consistent && c.outcome == Outcome::consistent, d,
               std::string("compact-consistent but st_bounded ") + to_string(b.outcome) + ", st_continuous " +
                   to_string(c.outcome),
               w);
  }
  return res;
}

/// T compact, S continuous => S o T compact; R bounded => T o R compact.
inline TheoremCheckResult check_compact_composition(const SuiteOptions& opt = {}) {
  TheoremCheckResult res{"compact_composition", 6};
  const std::vector<std::string> compact{"rank1(coord(1),sparse{1:1})", "diag(inv)",
                                         "finrank(rank1(coord(1),sparse{1:1}),rank1(coord(2),sparse{5:2}))"};
  const std::vector<std::string> outer{"identity", "diag(trunc_inv(3))", "rank1(coord(5),sparse{2:3})"};
  for (const auto& td : compact) {
    auto t = parse_operator(td);
    if (detail::classify_memo(t, Property::st_compact, opt.classify).outcome != Outcome::consistent) {
      res.notes.push_back(td + " is not compact-consistent, skipped");
      continue;
    }
    for (const auto& sd : outer) {
      auto s = parse_operator(sd);
      if (detail::classify_memo(s, Property::st_continuous, opt.classify).outcome == Outcome::consistent) {
        auto st = OperatorSpec::compose(s, t);
        detail::expect_outcome(res, st, Property::st_compact, Outcome::consistent, opt);
      }
      // Here s plays the role of the st-bounded right factor R.
      if (detail::classify_memo(s, Property::st_bounded, opt.classify).outcome == Outcome::consistent) {
        auto tr = OperatorSpec::compose(t, s);
        detail::expect_outcome(res, tr, Property::st_compact, Outcome::consistent, opt);
      }
    }
  }
  return res;
}

/// S_m = sum_{k<=m} rank1(coord(k), e_k/k) approaches S = diag(inv) with
/// ||S_m - S|| = 1/(m+1); each S_m and the limit S classify compact-consistent.
inline OperatorSpec truncated_inverse_diagonal(std::uint64_t m) {
  std::vector<OperatorSpec> terms;
  for (std::uint64_t k = 1; k <= m; ++k)
    terms.push_back(OperatorSpec::rank_one(FunctionalSpec::coordinate(k),
                                           SpaceElement::sparse({{k, 1.0 / static_cast<double>(k)}})));
  return OperatorSpec::finite_rank(std::move(terms));
}

inline TheoremCheckResult check_compact_norm_limit(const SuiteOptions& opt = {}) {
  TheoremCheckResult res{"compact_norm_limit", 6};
  const auto s = parse_operator("diag(inv)");
  for (std::uint64_t m : {1, 2, 5, 10, 20}) {
    auto sm = truncated_inverse_diagonal(m);
    const double gap = operator_norm_estimate(OperatorSpec::linear_combo(1, sm, -1, s), m + 50, Space::sparse());
    const double want = 1.0 / static_cast<double>(m + 1);
    bool ok = std::abs(gap - want) <= 1e-12;
    auto r = detail::classify_memo(sm, Property::st_compact, opt.classify);
    ok = ok && r.outcome == Outcome::consistent;
    res.record(ok, "S_" + std::to_string(m),
               "||S_m - S|| probe " + format_number(gap) + " (want " + format_number(want) + "), st_compact " +
                   to_string(r.outcome),
               r.witnesses);
    res.notes.push_back("m = " + std::to_string(m) + ": ||S_m - S|| = " + format_number(gap));
  }
  detail::expect_outcome(res, s, Property::st_compact, Outcome::consistent, opt);
  return res;
}

/// rank1(f, y0) with f unbounded on c00 is not st-compact.
inline TheoremCheckResult check_unbounded_functional_not_compact(const SuiteOptions& opt = {}) {
  TheoremCheckResult res{"unbounded_functional_not_compact", 2};
  for (const char* d : {"rank1(ramp_weights,sparse{1:1})", "rank1(ramp_weights,sparse{2:0.5,7:-1})"}) {
    auto r = detail::classify_memo(parse_mapping(d), Property::st_compact, opt.classify);
    res.record(r.outcome == Outcome::refuted && !r.witnesses.empty(), d,
               detail::expectation_failure(r, Outcome::refuted));
  }
  return res;
}

/// Weak and strong st-boundedness agree on dense sequences.
inline TheoremCheckResult check_weak_equiv(const SuiteOptions& opt = {}) {
  TheoremCheckResult res{"weak_equiv", 20};
  const auto a = opt.classify.analysis();
  std::vector<Corpus> corpora{dense_corpus(1), dense_corpus(2), dense_corpus(3), cauchy_corpus()};
  for (const auto& c : corpora)
    for (const auto& seq : c.members) {
      auto strong = detail::hypothesis_cache().get(seq, Hypothesis::st_bounded, opt.classify);
      auto weak = weakly_st_bounded(seq, a);
      res.record(strong.decision == weak.decision, seq.label(),
                 std::string("st_bounded ") + to_string(strong.decision) + " vs weakly_st_bounded " +
                     to_string(weak.decision));
    }
  return res;
}

/// Sequence-level Cauchy invariants: convergence implies st-Cauchy, Cauchy and
/// convergence agree on dense sequences, and the harmonic prefix sequence in
/// c00 separates them.
inline TheoremCheckResult check_cauchy_suite(const SuiteOptions& opt = {}) {
  TheoremCheckResult res{"cauchy_suite", 16};
  const AnalysisOptions a{opt.classify.horizon, opt.fine_tolerance, Schedule::geometric(10)};
  const auto grid = default_epsilon_grid();
  for (const auto& seq : cauchy_corpus().members) {
    auto conv = st_converges_search(seq, grid, a);
    auto cauchy = st_cauchy(seq, grid, a);
    auto bounded = st_bounded(seq, a);
    const bool contradiction = (conv.decision == Decision::confirmed && cauchy.decision == Decision::refuted) ||
                               (conv.decision == Decision::refuted && cauchy.decision == Decision::confirmed);
    const bool bounded_ok = conv.decision != Decision::confirmed || bounded.decision == Decision::confirmed;
    res.record(!contradiction && bounded_ok, seq.label(),
               std::string("converges ") + to_string(conv.decision) + ", cauchy " + to_string(cauchy.decision) +
                   ", bounded " + to_string(bounded.decision));
  }
  const auto h = harmonic_prefix_sequence();
  auto cauchy = st_cauchy(h, grid, a);
  bool all_refuted = true;
  std::vector<SpaceElement::Entry> prefix;
  for (std::uint64_t j = 1; j <= 20; ++j) {
    prefix.emplace_back(j, 1.0 / static_cast<double>(j));
    all_refuted = all_refuted && st_converges(h, SpaceElement::sparse(prefix), grid, a).decision == Decision::refuted;
  }
  res.record(cauchy.decision == Decision::confirmed && all_refuted, "harmonic",
             std::string("st_cauchy ") + to_string(cauchy.decision) +
                 (all_refuted ? "" : ", some prefix candidate not refuted"));
  return res;
}

/// The prime-scaling example read two ways: as the position-dependent
/// transform it is st-bounded with M = 1 and exceedance set inside the
/// primes; as the diagonal operator it is refuted by e_{p_n}.
inline TheoremCheckResult check_prime_scaling_readings(const SuiteOptions& opt = {}) {
  TheoremCheckResult res{"prime_scaling_readings", 3};
  const Mapping transform = SequenceTransform::prime_scale_by_position();
  auto t = detail::classify_memo(transform, Property::st_bounded, opt.classify);
  res.record(t.outcome == Outcome::consistent && t.bound == 1.0, describe(transform),
             "transform reading: " + std::string(to_string(t.outcome)) + ", M = " +
                 (t.bound ? format_number(*t.bound) : std::string("none")));

  const auto img = image_sequence(SequenceTransform::prime_scale_by_position(), unit_coords_sequence());
  auto trace = norm_trace(img, opt.classify.horizon);
  bool subset = true;
  for (std::uint64_t k = 1; k <= opt.classify.horizon && subset; ++k)
    if (trace[k - 1] > 1.0 && !is_prime(k)) subset = false;
  res.record(subset, "exceedance set of " + img.label(), "{n : ||y_n|| > 1} contains a non-prime");

  const Mapping diagonal = parse_mapping("diag(prime_scale)");
  auto d = detail::classify_memo(diagonal, Property::st_bounded, opt.classify);
  bool witnessed = std::any_of(d.witnesses.begin(), d.witnesses.end(),
                               [](const Evaluation& e) { return e.sequence == "prime_coords"; });
  res.record(d.outcome == Outcome::refuted && witnessed, describe(diagonal),
             "diagonal reading: " + std::string(to_string(d.outcome)) + ", expected refuted by prime_coords");
  res.notes.push_back(
      "the two readings disagree: transform(prime_scale_by_position) is st-bounded with M = 1, diag(prime_scale) "
      "maps the st-bounded sequence e_{p_n} to norms p_n (exceedance density 1)");
  return res;
}

// --- suite -------------------------------------------------------------------------

using TheoremCheck = std::function<TheoremCheckResult(const SuiteOptions&)>;

inline const std::vector<std::pair<std::string, TheoremCheck>>& theorem_checks() {
  static const std::vector<std::pair<std::string, TheoremCheck>> checks{
      {"bounded_inclusion", check_bounded_inclusion},
      {"finite_dim_all_bounded", check_finite_dim_all_bounded},
      {"theorem_M", check_theorem_M},
      {"subspace_closure", check_subspace_closure},
      {"finite_rank_bounded", check_finite_rank_bounded},
      {"bounded_iff_continuous", check_bounded_iff_continuous},
      {"continuity_inclusions", check_continuity_inclusions},
      {"compact_implies_bounded_and_continuous", check_compact_implies_bounded_and_continuous},
      {"compact_composition", check_compact_composition},
      {"compact_norm_limit", check_compact_norm_limit},
      {"unbounded_functional_not_compact", check_unbounded_functional_not_compact},
      {"weak_equiv", check_weak_equiv},
      {"cauchy_suite", check_cauchy_suite},
      {"prime_scaling_readings", check_prime_scaling_readings},
  };
  return checks;
}

inline TheoremCheckResult check_theorem(const std::string& id, const SuiteOptions& opt = {}) {
  for (const auto& [name, fn] : theorem_checks())
    if (name == id) return fn(opt);
  throw std::invalid_argument("unknown theorem check '" + id + "'");
}

inline std::vector<TheoremCheckResult> run_suite(const SuiteOptions& opt = {}) {
  std::vector<TheoremCheckResult> out;
  for (const auto& [name, fn] : theorem_checks()) out.push_back(fn(opt));
  return out;
}

}  // namespace stconv
