#pragma once

#include <cmath>
#include <cstdint>
#include <future>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "stconv/density.hpp"
#include "stconv/operators.hpp"
#include "stconv/parse.hpp"
#include "stconv/sequences.hpp"
#include "stconv/spaces.hpp"
#include "stconv/stanalysis.hpp"

namespace stconv {

inline constexpr const char* kCorpusVersion = "corpus-v1";
inline constexpr double kClassificationTolerance = 0.1;

struct Corpus {
  std::string version = kCorpusVersion;
  Space space;
  std::vector<SequenceSpec> members;
};

/// c00 corpus: st-bounded, st-null, norm-bounded and norm-null members, plus
/// the prime unit coordinates e_{p_n}.
inline Corpus sparse_corpus() {
  Corpus c;
  c.space = Space::sparse();
  const auto sp = Space::sparse();
  for (std::uint64_t seed = 1; seed <= 3; ++seed) c.members.push_back(random_unit_ball(sp, seed));
  c.members.push_back(spike_sequence(zero_sequence(sp), IndexSet::squares(), Magnitude::linear()));
  c.members.push_back(spike_sequence(zero_sequence(sp), IndexSet::primes(), Magnitude::linear()));
  c.members.push_back(null_sequence(SpaceElement::sparse({{1, 1.0}, {2, -0.5}, {5, 0.25}})));
  c.members.push_back(harmonic_prefix_sequence());
  c.members.push_back(unit_coords_sequence());
  c.members.push_back(prime_coords_sequence());
  c.members.push_back(damp(prime_coords_sequence()));
  return c;
}

/// (1, -1/2, 1/4, ...) in R^d.
inline SpaceElement alternating_halves(std::size_t d) {
  std::vector<double> v(d);
  for (std::size_t i = 0; i < d; ++i) v[i] = std::pow(-0.5, static_cast<double>(i));
  return SpaceElement::dense(std::move(v));
}

inline Corpus dense_corpus(std::size_t d) {
  Corpus c;
  c.space = Space::dense(d);
  for (std::uint64_t seed = 1; seed <= 3; ++seed) c.members.push_back(random_unit_ball(c.space, seed));
  c.members.push_back(spike_sequence(zero_sequence(c.space), IndexSet::squares(), Magnitude::linear()));
  c.members.push_back(spike_sequence(zero_sequence(c.space), IndexSet::primes(), Magnitude::linear()));
  c.members.push_back(null_sequence(alternating_halves(d)));
  c.members.push_back(constant_sequence(alternating_halves(d)));
  if (d == 1) c.members.push_back(ramp_sequence());
  return c;
}

/// Dense sequences for the Cauchy/convergence agreement check: convergent
/// ones, density-zero spike corruptions of them, and divergent ones.
inline Corpus cauchy_corpus() {
  static const char* const kMembers[] = {
      "null(dense[1,-0.5])",
      "const(dense[2,1])",
      "spike(squares,n,null(dense[1,-0.5]))",
      "spike(squares,1,const(dense[2,1]))",
      "spike(finite(2,3,5,7,11),n,const(dense[0.5]))",
      "spike(squares,n^2,zero(dim=1))",
      "combine(null(dense[1]),const(dense[3]),1,1)",
      "subseq(null(dense[1,2]),squares)",
      "damp(alternating)",
      "damp(null(dense[1]))",
      "null(dense[1,1,1,1])",
      "image(matrix[[0,1],[1,0]],spike(squares,n,null(dense[1,-0.5])))",
      "combine(spike(squares,n,zero(dim=2)),const(dense[1,1]),1,1)",
      "random(dim=2,seed=1)",
      "random(dim=3,seed=2)",
      "alternating",
      "ramp",
      "combine(alternating,null(dense[1]),1,1)",
  };
  Corpus c;
  c.space = Space::dense(1);  // mixed dimensions; members carry their own space
  for (const char* m : kMembers) c.members.push_back(parse_sequence(m));
  return c;
}

inline Corpus default_corpus(const Mapping& m) {
  if (const auto* op = std::get_if<OperatorSpec>(&m))
    if (auto dom = op->domain(); dom && dom->is_dense()) return dense_corpus(dom->dim);
  return sparse_corpus();
}

// --- classification ------------------------------------------------------------

enum class Property { st_bounded, n_st_bounded, st_continuous, n_st_continuous, st_compact };
enum class Outcome { consistent, refuted, inconclusive };

inline const char* to_string(Property p) {
  switch (p) {
    case Property::st_bounded: return "st_bounded";
    case Property::n_st_bounded: return "n_st_bounded";
    case Property::st_continuous: return "st_continuous";
    case Property::n_st_continuous: return "n_st_continuous";
    case Property::st_compact: return "st_compact";
  }
  return "?";
}

inline std::optional<Property> property_from_string(std::string_view s) {
  for (auto p : {Property::st_bounded, Property::n_st_bounded, Property::st_continuous, Property::n_st_continuous,
                 Property::st_compact})
    if (s == to_string(p)) return p;
  return std::nullopt;
}

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::consistent: return "consistent";
    case Outcome::refuted: return "refuted";
    case Outcome::inconclusive: return "inconclusive";
  }
  return "?";
}

/// One corpus member: the hypothesis verdict on x_n, the conclusion verdict on
/// S(x_n), and the conclusion decision under the property's rule (which for
/// st_compact can differ from `conclusion.decision`).
struct Evaluation {
  std::string sequence;
  StVerdict hypothesis;
  std::optional<StVerdict> conclusion;
  Decision conclusion_decision = Decision::inconclusive;
};

struct ClassificationReport {
  std::string op;
  Property property = Property::st_bounded;
  Outcome outcome = Outcome::inconclusive;
  std::string corpus_version;
  std::size_t corpus_size = 0;
  std::uint64_t horizon = 0;
  double tolerance = 0;
  std::vector<double> epsilon_grid;
  /// Members whose hypothesis verdict is confirmed.
  std::size_t instances = 0;
  /// Largest deciding probe M over confirmed st-bounded conclusions.
  std::optional<double> bound;
  std::vector<Evaluation> evaluations;
  /// Evaluations with confirmed hypothesis and refuted conclusion.
  std::vector<Evaluation> witnesses;
};

struct ClassifyOptions {
  std::uint64_t horizon = kDefaultSequenceHorizon;
  double tolerance = kClassificationTolerance;
  std::vector<double> epsilon_grid = default_epsilon_grid();
  bool parallel = true;

  AnalysisOptions analysis() const { return {horizon, tolerance, Schedule::geometric(10)}; }
};

enum class Hypothesis { st_bounded, norm_bounded, st_null, norm_null };

inline Hypothesis hypothesis_of(Property p) {
  switch (p) {
    case Property::st_bounded:
    case Property::st_compact: return Hypothesis::st_bounded;
    case Property::n_st_bounded: return Hypothesis::norm_bounded;
    case Property::st_continuous: return Hypothesis::st_null;
    case Property::n_st_continuous: return Hypothesis::norm_null;
  }
  return Hypothesis::st_bounded;
}

inline StVerdict evaluate_hypothesis(const SequenceSpec& seq, Hypothesis h, const ClassifyOptions& opt) {
  const auto a = opt.analysis();
  switch (h) {
    case Hypothesis::st_bounded: return st_bounded(seq, a);
    case Hypothesis::norm_bounded: return norm_bounded_trace(norm_trace(seq, opt.horizon), seq.label(), a);
    case Hypothesis::st_null: return st_converges(seq, SpaceElement::zero(seq.space()), opt.epsilon_grid, a);
    case Hypothesis::norm_null:
      return norm_null_trace(norm_trace(seq, opt.horizon), seq.label(), opt.epsilon_grid, a);
  }
  throw std::logic_error("unhandled hypothesis");
}

namespace detail {

/// Hypothesis verdicts depend only on the (deterministic) sequence and the
/// options, so they are shared across classifications.
class HypothesisCache {
 public:
  StVerdict get(const SequenceSpec& seq, Hypothesis h, const ClassifyOptions& opt) {
    Key key{seq.label(), static_cast<int>(h), opt.horizon, opt.tolerance, opt.epsilon_grid};
    {
      std::lock_guard lock(mutex_);
      if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    auto v = evaluate_hypothesis(seq, h, opt);
    std::lock_guard lock(mutex_);
    return cache_.emplace(std::move(key), std::move(v)).first->second;
  }

 private:
  using Key = std::tuple<std::string, int, std::uint64_t, double, std::vector<double>>;
  std::mutex mutex_;
  std::map<Key, StVerdict> cache_;
};

inline HypothesisCache& hypothesis_cache() {
  static HypothesisCache cache;
  return cache;
}

inline SequenceSpec image_of(const Mapping& m, const SequenceSpec& seq) {
  return std::visit([&](const auto& s) { return image_sequence(s, seq); }, m);
}

inline Evaluation evaluate_member(const Mapping& m, Property p, const SequenceSpec& seq, const ClassifyOptions& opt) {
  Evaluation e;
  e.sequence = seq.label();
  e.hypothesis = hypothesis_cache().get(seq, hypothesis_of(p), opt);
  if (e.hypothesis.decision != Decision::confirmed) return e;
  const auto a = opt.analysis();
  const auto img = image_of(m, seq);
  switch (p) {
    case Property::st_bounded:
    case Property::n_st_bounded:
      e.conclusion = st_bounded(img, a);
      e.conclusion_decision = e.conclusion->decision;
      break;
    case Property::st_continuous:
    case Property::n_st_continuous:
      e.conclusion = st_converges(img, SpaceElement::zero(img.space()), opt.epsilon_grid, a);
      e.conclusion_decision = e.conclusion->decision;
      break;
    case Property::st_compact: {
      // Confirmed when the image st-converges to a searched candidate. A failed
      // search refutes nothing (the right limit may not be among the
      // candidates); only an image that is not even st-bounded refutes.
      auto conv = st_converges_search(img, opt.epsilon_grid, a);
      if (conv.decision == Decision::confirmed) {
        e.conclusion = std::move(conv);
        e.conclusion_decision = Decision::confirmed;
        break;
      }
      auto bnd = st_bounded(img, a);
      if (bnd.decision == Decision::refuted) {
        e.conclusion = std::move(bnd);
        e.conclusion_decision = Decision::refuted;
      } else {
        e.conclusion = std::move(conv);
        e.conclusion_decision = Decision::inconclusive;
      }
      break;
    }
  }
  return e;
}

}  // namespace detail

/// Empirical check of an operator property over a corpus.
///
/// A member whose hypothesis verdict is confirmed is an instance; the outcome
/// is refuted when some instance has a refuted conclusion, consistent when
/// there is at least one instance and no refutation, inconclusive otherwise.
inline ClassificationReport classify(const Mapping& m, Property p, const Corpus& corpus,
                                     const ClassifyOptions& opt = {}) {
  if (corpus.members.empty()) throw std::invalid_argument("empty corpus");
  if (std::holds_alternative<SequenceTransform>(m) && p == Property::st_compact)
    throw std::invalid_argument("st_compact is not evaluated for position-dependent transforms");
  if (const auto* op = std::get_if<OperatorSpec>(&m)) {
    if (auto dom = op->domain())
      for (const auto& s : corpus.members)
        if (!(s.space() == *dom))
          throw SpaceMismatch("corpus member " + s.label() + " lives in " + s.space().describe() + ", " +
                              op->descriptor() + " expects " + dom->describe());
  }

  ClassificationReport r;
  r.op = describe(m);
  r.property = p;
  r.corpus_version = corpus.version;
  r.corpus_size = corpus.members.size();
  r.horizon = opt.horizon;
  r.tolerance = opt.tolerance;
  r.epsilon_grid = opt.epsilon_grid;

  if (opt.parallel) {
    std::vector<std::future<Evaluation>> jobs;
    for (const auto& s : corpus.members)
      jobs.push_back(std::async(std::launch::async, [&m, p, s, &opt] { return detail::evaluate_member(m, p, s, opt); }));
    for (auto& j : jobs) r.evaluations.push_back(j.get());
  } else {
    for (const auto& s : corpus.members) r.evaluations.push_back(detail::evaluate_member(m, p, s, opt));
  }

  const bool bounded_property = p == Property::st_bounded || p == Property::n_st_bounded;
  for (const auto& e : r.evaluations) {
    if (e.hypothesis.decision != Decision::confirmed) continue;
    ++r.instances;
    if (e.conclusion_decision == Decision::refuted) r.witnesses.push_back(e);
    if (bounded_property && e.conclusion_decision == Decision::confirmed)
      r.bound = std::max(r.bound.value_or(0.0), e.conclusion->bound);
  }
  if (!r.witnesses.empty())
    r.outcome = Outcome::refuted;
  else if (r.instances > 0)
    r.outcome = Outcome::consistent;
  return r;
}

inline ClassificationReport classify(const Mapping& m, Property p, const ClassifyOptions& opt = {}) {
  return classify(m, p, default_corpus(m), opt);
}

}  // namespace stconv
