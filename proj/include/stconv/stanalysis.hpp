#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "stconv/density.hpp"
#include "stconv/format.hpp"
#include "stconv/sequences.hpp"
#include "stconv/spaces.hpp"

namespace stconv {

inline constexpr std::uint64_t kDefaultSequenceHorizon = 100'000;
inline constexpr double kDefaultTolerance = 0.01;

inline std::vector<double> default_epsilon_grid() { return {0.5, 0.1, 0.01}; }

/// Doubling probes 1, 2, 4, ... up to sqrt(horizon). Larger probes would
/// trivially bound any sequence that is merely finite up to the horizon.
inline std::vector<double> default_probes(std::uint64_t horizon) {
  std::vector<double> out;
  const double cap = std::sqrt(static_cast<double>(horizon));
  for (double m = 1; m <= cap; m *= 2) out.push_back(m);
  if (out.empty()) out.push_back(1);
  return out;
}

/// Anchors 10, 100, ... up to horizon/10.
inline std::vector<std::uint64_t> default_anchors(std::uint64_t horizon) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t a = 10; a <= horizon / 10; a *= 10) out.push_back(a);
  if (out.empty()) out.push_back(1);
  return out;
}

enum class VerdictKind { convergence, bounded, cauchy, norm_bounded, norm_null };

inline const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::convergence: return "convergence";
    case VerdictKind::bounded: return "bounded";
    case VerdictKind::cauchy: return "cauchy";
    case VerdictKind::norm_bounded: return "norm_bounded";
    case VerdictKind::norm_null: return "norm_null";
  }
  return "?";
}

/// Finite-horizon verdict on a statistical property of one sequence.
///
/// For convergence and cauchy verdicts `per_epsilon[i]` is the density
/// verdict for `epsilon_grid[i]`; for bounded verdicts the grid holds the
/// deciding probe M. The overall decision is confirmed iff every entry is
/// confirmed and refuted iff some entry is refuted. The norm_* kinds are
/// classical (non-statistical) checks and carry no density verdicts.
struct StVerdict {
  VerdictKind kind = VerdictKind::convergence;
  std::string sequence;
  std::optional<SpaceElement> limit;
  double bound = 0;
  std::vector<double> probes_tried;
  std::vector<std::uint64_t> anchors;
  std::vector<double> epsilon_grid;
  std::vector<DensityVerdict> per_epsilon;
  Decision decision = Decision::inconclusive;
  std::uint64_t horizon = 0;
  double tolerance = kDefaultTolerance;
};

inline Decision aggregate(const std::vector<DensityVerdict>& verdicts) {
  bool all_confirmed = true;
  for (const auto& v : verdicts) {
    if (v.decision == Decision::refuted) return Decision::refuted;
    if (v.decision != Decision::confirmed) all_confirmed = false;
  }
  return all_confirmed ? Decision::confirmed : Decision::inconclusive;
}

// --- traces ------------------------------------------------------------------

using Trace = std::vector<double>;  // trace[k-1] belongs to index k

namespace detail {

/// Running sup-norm of (x_n - center) over c00, fed by increments.
class SupTracker {
 public:
  explicit SupTracker(const SpaceElement& center) {
    for (const auto& [k, v] : center.entries()) set(k, -v);
  }

  void add(const SpaceElement& delta) {
    for (const auto& [k, v] : delta.entries()) {
      auto it = values_.find(k);
      double old = it == values_.end() ? 0.0 : it->second;
      set(k, old + v);
    }
  }

  double sup() const { return mags_.empty() ? 0.0 : *mags_.rbegin(); }

 private:
  void set(std::uint64_t k, double value) {
    auto it = values_.find(k);
    if (it != values_.end()) {
      mags_.erase(mags_.find(std::abs(it->second)));
      values_.erase(it);
    }
    if (value != 0.0) {
      values_.emplace(k, value);
      mags_.insert(std::abs(value));
    }
  }

  std::unordered_map<std::uint64_t, double> values_;
  std::multiset<double> mags_;
};

}  // namespace detail

/// ||x_k - center|| for k = 1..horizon.
inline Trace distance_trace(const SequenceSpec& seq, const SpaceElement& center,
                            std::uint64_t horizon) {
  require_same_space(seq(1), center);
  Trace out(horizon);
  const Norm nrm = seq.norm();
  if (center.is_zero() && seq.scaled_base()) {
    const SequenceSpec& base = *seq.scaled_base();
    Trace inner = distance_trace(base, SpaceElement::zero(base.space()), horizon);
    for (std::uint64_t k = 1; k <= horizon; ++k)
      out[k - 1] = std::abs(seq.scale_factor(k)) * inner[k - 1];
    return out;
  }
  if (!seq.space().is_dense() && seq.has_delta()) {
    detail::SupTracker tracker(center);
    for (std::uint64_t k = 1; k <= horizon; ++k) {
      tracker.add(seq.delta(k));
      out[k - 1] = tracker.sup();
    }
    return out;
  }
  for (std::uint64_t k = 1; k <= horizon; ++k) out[k - 1] = norm(sub(seq(k), center), nrm);
  return out;
}

inline Trace norm_trace(const SequenceSpec& seq, std::uint64_t horizon) {
  return distance_trace(seq, SpaceElement::zero(seq.space()), horizon);
}

/// {k : trace_k >= eps} (or > eps when `strict`), valid for k <= trace size.
inline IndexSet exceedance_set(std::shared_ptr<const Trace> trace, double eps, bool strict,
                               const std::string& what) {
  std::string label = "{k : " + what + (strict ? " > " : " >= ") + format_number(eps) + "}";
  return IndexSet::custom(std::move(label), [trace, eps, strict](std::uint64_t k) {
    if (k == 0 || k > trace->size()) return false;
    double v = (*trace)[k - 1];
    return strict ? v > eps : v >= eps;
  });
}

/// Exact exceedance counts |{k <= n_i : trace_k >= eps}| at each checkpoint.
inline std::vector<std::uint64_t> exceedance_counts(const Trace& trace, double eps,
                                                    const std::vector<std::uint64_t>& checkpoints) {
  std::vector<std::uint64_t> out;
  std::uint64_t c = 0, k = 1;
  for (auto n : checkpoints) {
    for (; k <= n; ++k)
      if (trace[k - 1] >= eps) ++c;
    out.push_back(c);
  }
  return out;
}

// --- verdicts ----------------------------------------------------------------

struct AnalysisOptions {
  std::uint64_t horizon = kDefaultSequenceHorizon;
  double tolerance = kDefaultTolerance;
  Schedule schedule = Schedule::geometric(10);
};

namespace detail {

inline StVerdict convergence_from_trace(std::shared_ptr<const Trace> trace, const std::string& label,
                                        const SpaceElement& candidate, const std::vector<double>& grid,
                                        const AnalysisOptions& opt) {
  StVerdict v;
  v.kind = VerdictKind::convergence;
  v.sequence = label;
  v.limit = candidate;
  v.epsilon_grid = grid;
  v.horizon = opt.horizon;
  v.tolerance = opt.tolerance;
  for (double eps : grid) {
    auto set = exceedance_set(trace, eps, false, "||x_k - x||");
    v.per_epsilon.push_back(
        density_verdict(density_profile(set, opt.horizon, opt.schedule), Rational::zero(), opt.tolerance));
  }
  v.decision = aggregate(v.per_epsilon);
  return v;
}

inline void require_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("epsilon grid must be nonempty");
  for (double e : grid)
    if (!(e > 0)) throw std::invalid_argument("epsilon values must be positive");
}

}  // namespace detail

/// Statistical convergence of seq to candidate: for each eps the set
/// {k : ||x_k - candidate|| >= eps} must have density zero.
inline StVerdict st_converges(const SequenceSpec& seq, const SpaceElement& candidate,
                              const std::vector<double>& grid = default_epsilon_grid(),
                              const AnalysisOptions& opt = {}) {
  detail::require_grid(grid);
  auto trace = std::make_shared<const Trace>(distance_trace(seq, candidate, opt.horizon));
  return detail::convergence_from_trace(trace, seq.label(), candidate, grid, opt);
}

/// st-boundedness of a precomputed norm trace: first probe M whose
/// exceedance set {k : ||x_k|| > M} is confirmed density-zero.
inline StVerdict st_bounded_trace(std::shared_ptr<const Trace> trace, const std::string& label,
                                  std::vector<double> probes, const AnalysisOptions& opt) {
  if (probes.empty()) throw std::invalid_argument("probe list must be nonempty");
  std::sort(probes.begin(), probes.end());
  StVerdict v;
  v.kind = VerdictKind::bounded;
  v.sequence = label;
  v.horizon = opt.horizon;
  v.tolerance = opt.tolerance;
  DensityVerdict last;
  for (double m : probes) {
    v.probes_tried.push_back(m);
    auto set = exceedance_set(trace, m, true, "||x_k||");
    last = density_verdict(density_profile(set, opt.horizon, opt.schedule), Rational::zero(), opt.tolerance);
    if (last.decision == Decision::confirmed) {
      v.bound = m;
      v.epsilon_grid = {m};
      v.per_epsilon = {last};
      v.decision = Decision::confirmed;
      return v;
    }
  }
  v.bound = probes.back();
  v.epsilon_grid = {probes.back()};
  v.per_epsilon = {last};
  v.decision = last.decision == Decision::refuted ? Decision::refuted : Decision::inconclusive;
  return v;
}

inline StVerdict st_bounded(const SequenceSpec& seq, std::vector<double> probes, const AnalysisOptions& opt) {
  auto trace = std::make_shared<const Trace>(norm_trace(seq, opt.horizon));
  return st_bounded_trace(trace, seq.label(), std::move(probes), opt);
}

inline StVerdict st_bounded(const SequenceSpec& seq, const AnalysisOptions& opt = {}) {
  return st_bounded(seq, default_probes(opt.horizon), opt);
}

/// Real-valued form: delta({k : |x_k| > M}) = 0 for some probe M.
inline StVerdict st_bounded_real(const std::string& label, std::function<double(std::uint64_t)> xs,
                                 std::vector<double> probes, const AnalysisOptions& opt) {
  auto trace = std::make_shared<Trace>(opt.horizon);
  for (std::uint64_t k = 1; k <= opt.horizon; ++k) (*trace)[k - 1] = std::abs(xs(k));
  return st_bounded_trace(trace, label, std::move(probes), opt);
}

/// Statistical Cauchy: for each eps some anchor n_eps (searched over
/// `anchors`) leaves {k : ||x_k - x_{n_eps}|| >= eps} density-zero.
inline StVerdict st_cauchy(const SequenceSpec& seq, const std::vector<double>& grid,
                           const std::vector<std::uint64_t>& anchors, const AnalysisOptions& opt) {
  detail::require_grid(grid);
  if (anchors.empty()) throw std::invalid_argument("anchor schedule must be nonempty");
  std::vector<std::vector<DensityVerdict>> by_anchor;  // [anchor][eps]
  for (auto a : anchors) {
    auto trace = std::make_shared<const Trace>(distance_trace(seq, seq(a), opt.horizon));
    std::vector<DensityVerdict> row;
    for (double eps : grid) {
      auto set = exceedance_set(trace, eps, false, "||x_k - x_anchor||");
      row.push_back(density_verdict(density_profile(set, opt.horizon, opt.schedule), Rational::zero(),
                                    opt.tolerance));
    }
    by_anchor.push_back(std::move(row));
  }
  StVerdict v;
  v.kind = VerdictKind::cauchy;
  v.sequence = seq.label();
  v.epsilon_grid = grid;
  v.horizon = opt.horizon;
  v.tolerance = opt.tolerance;
  for (std::size_t e = 0; e < grid.size(); ++e) {
    std::optional<std::size_t> pick;
    for (std::size_t a = 0; a < anchors.size() && !pick; ++a)
      if (by_anchor[a][e].decision == Decision::confirmed) pick = a;
    for (std::size_t a = 0; a < anchors.size() && !pick; ++a)
      if (by_anchor[a][e].decision == Decision::inconclusive) pick = a;
    std::size_t chosen = pick.value_or(anchors.size() - 1);
    v.anchors.push_back(anchors[chosen]);
    v.per_epsilon.push_back(by_anchor[chosen][e]);
  }
  v.decision = aggregate(v.per_epsilon);
  return v;
}

inline StVerdict st_cauchy(const SequenceSpec& seq, const std::vector<double>& grid = default_epsilon_grid(),
                           const AnalysisOptions& opt = {}) {
  return st_cauchy(seq, grid, default_anchors(opt.horizon), opt);
}

/// Seeded random functionals on R^dim (standard normal weights).
inline std::vector<std::vector<double>> default_probe_functionals(std::size_t dim, std::uint64_t seed = 1) {
  std::vector<std::vector<double>> out;
  for (std::size_t j = 0; j < dim; ++j) {
    std::vector<double> w(dim, 0.0);
    w[j] = 1.0;
    out.push_back(std::move(w));
  }
  for (std::uint64_t r = 0; r < 8; ++r) {
    detail::CounterRng rng(seed ^ 0x5eedf00dULL, r + 1);
    std::vector<double> w(dim);
    for (double& x : w) x = rng.normal();
    out.push_back(std::move(w));
  }
  return out;
}

/// Weak form: every probe functional f makes (f(x_n)) st-bounded in R.
inline StVerdict weakly_st_bounded(const SequenceSpec& seq, const std::vector<std::vector<double>>& functionals,
                                   std::vector<double> probes, const AnalysisOptions& opt) {
  if (!seq.space().is_dense()) throw SpaceMismatch("weak st-boundedness is evaluated on dense spaces only");
  StVerdict v;
  v.kind = VerdictKind::bounded;
  v.sequence = "weak(" + seq.label() + ")";
  v.horizon = opt.horizon;
  v.tolerance = opt.tolerance;
  std::vector<Trace> values(functionals.size(), Trace(opt.horizon));
  for (std::uint64_t k = 1; k <= opt.horizon; ++k) {
    auto x = seq(k);
    for (std::size_t f = 0; f < functionals.size(); ++f) {
      if (functionals[f].size() != x.coords().size()) throw SpaceMismatch("functional dimension mismatch");
      double s = 0;
      for (std::size_t i = 0; i < x.coords().size(); ++i) s += functionals[f][i] * x.coords()[i];
      values[f][k - 1] = std::abs(s);
    }
  }
  for (std::size_t f = 0; f < functionals.size(); ++f) {
    auto trace = std::make_shared<const Trace>(std::move(values[f]));
    auto fv = st_bounded_trace(trace, seq.label(), probes, opt);
    v.epsilon_grid.push_back(fv.bound);
    v.per_epsilon.push_back(fv.per_epsilon.front());
    v.bound = std::max(v.bound, fv.bound);
  }
  v.decision = aggregate(v.per_epsilon);
  return v;
}

inline StVerdict weakly_st_bounded(const SequenceSpec& seq, const AnalysisOptions& opt = {}) {
  return weakly_st_bounded(seq, default_probe_functionals(seq.space().dim), default_probes(opt.horizon), opt);
}

/// Classical boundedness at finite horizon: confirmed when the running
/// maximum of ||x_k|| is already attained within the first tenth of the
/// horizon, refuted when the tail maximum exceeds twice the head maximum.
inline StVerdict norm_bounded_trace(const Trace& trace, const std::string& label, const AnalysisOptions& opt) {
  const std::uint64_t head = std::max<std::uint64_t>(1, opt.horizon / 10);
  double head_max = *std::max_element(trace.begin(), trace.begin() + static_cast<std::ptrdiff_t>(head));
  double tail_max = *std::max_element(trace.begin(), trace.begin() + static_cast<std::ptrdiff_t>(opt.horizon));
  StVerdict v;
  v.kind = VerdictKind::norm_bounded;
  v.sequence = label;
  v.horizon = opt.horizon;
  v.tolerance = opt.tolerance;
  v.bound = tail_max;
  if (tail_max <= head_max)
    v.decision = Decision::confirmed;
  else if (tail_max > 2 * head_max)
    v.decision = Decision::refuted;
  return v;
}

/// Classical convergence to the origin: confirmed when every ||x_k|| past
/// the first tenth of the horizon is below the smallest eps, refuted when
/// one of them reaches the largest eps.
inline StVerdict norm_null_trace(const Trace& trace, const std::string& label, const std::vector<double>& grid,
                                 const AnalysisOptions& opt) {
  detail::require_grid(grid);
  const std::uint64_t head = std::max<std::uint64_t>(1, opt.horizon / 10);
  double tail_max = 0;
  for (std::uint64_t k = head + 1; k <= opt.horizon; ++k) tail_max = std::max(tail_max, trace[k - 1]);
  StVerdict v;
  v.kind = VerdictKind::norm_null;
  v.sequence = label;
  v.horizon = opt.horizon;
  v.tolerance = opt.tolerance;
  v.epsilon_grid = grid;
  v.bound = tail_max;
  double lo = *std::min_element(grid.begin(), grid.end());
  double hi = *std::max_element(grid.begin(), grid.end());
  if (tail_max < lo)
    v.decision = Decision::confirmed;
  else if (tail_max >= hi)
    v.decision = Decision::refuted;
  return v;
}

// --- limit candidates ----------------------------------------------------------

inline constexpr std::size_t kMedianSamples = 33;

/// Coordinatewise median of x_k over the last third of the horizon. Dense
/// sequences use every index in the window; c00 sequences use kMedianSamples
/// evenly spaced samples (absent coordinates count as zero), since their
/// supports can grow with the index.
inline SpaceElement median_candidate(const SequenceSpec& seq, std::uint64_t horizon) {
  const std::uint64_t lo = horizon - horizon / 3 + 1;
  auto median = [](std::vector<double>& xs) {
    auto mid = xs.begin() + static_cast<std::ptrdiff_t>(xs.size() / 2);
    std::nth_element(xs.begin(), mid, xs.end());
    return *mid;
  };
  if (seq.space().is_dense()) {
    const std::size_t d = seq.space().dim;
    std::vector<std::vector<double>> cols(d);
    for (std::uint64_t k = lo; k <= horizon; ++k) {
      auto x = seq(k);
      for (std::size_t i = 0; i < d; ++i) cols[i].push_back(x.coords()[i]);
    }
    std::vector<double> c(d);
    for (std::size_t i = 0; i < d; ++i) c[i] = median(cols[i]);
    return SpaceElement::dense(std::move(c));
  }
  const std::uint64_t span = horizon - lo + 1;
  const std::size_t samples = static_cast<std::size_t>(std::min<std::uint64_t>(span, kMedianSamples));
  std::map<std::uint64_t, std::vector<double>> cols;
  for (std::size_t s = 0; s < samples; ++s) {
    std::uint64_t k = samples == 1 ? horizon : lo + (span - 1) * s / (samples - 1);
    const auto x = seq(k);
    for (const auto& [i, v] : x.entries()) cols[i].push_back(v);
  }
  std::vector<SpaceElement::Entry> es;
  for (auto& [i, vs] : cols) {
    vs.resize(samples, 0.0);
    double m = median(vs);
    if (m != 0.0) es.emplace_back(i, m);
  }
  return SpaceElement::sparse(std::move(es));
}

/// st_converges against searched candidates (median first, then origin).
/// Returns the first confirmed verdict, otherwise the median's verdict.
inline StVerdict st_converges_search(const SequenceSpec& seq, const std::vector<double>& grid = default_epsilon_grid(),
                                     const AnalysisOptions& opt = {}) {
  auto median = st_converges(seq, median_candidate(seq, opt.horizon), grid, opt);
  if (median.decision == Decision::confirmed) return median;
  auto origin = st_converges(seq, SpaceElement::zero(seq.space()), grid, opt);
  if (origin.decision == Decision::confirmed) return origin;
  return median;
}

}  // namespace stconv
