#include <gtest/gtest.h>

#include <cmath>

#include "stconv/stanalysis.hpp"

using namespace stconv;

namespace {

AnalysisOptions at(std::uint64_t horizon, double tol = kDefaultTolerance) {
  AnalysisOptions o;
  o.horizon = horizon;
  o.tolerance = tol;
  return o;
}

std::uint64_t floor_sqrt(std::uint64_t n) {
  std::uint64_t r = 0;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

TEST(Defaults, ProbesAndAnchors) {
  EXPECT_EQ(default_probes(100'000).back(), 256.0);
  EXPECT_EQ(default_probes(100'000).front(), 1.0);
  EXPECT_EQ(default_anchors(100'000), (std::vector<std::uint64_t>{10, 100, 1000, 10'000}));
  EXPECT_EQ(default_epsilon_grid(), (std::vector<double>{0.5, 0.1, 0.01}));
}

TEST(Converge, NullSequenceHasFiniteExceedance) {
  auto v = st_converges(null_sequence(SpaceElement::dense({1})), SpaceElement::dense({0}), {0.1});
  EXPECT_EQ(v.decision, Decision::confirmed);
  // {k : 1/k >= 0.1} = {1, ..., 10}.
  for (auto c : v.per_epsilon[0].profile.counts) EXPECT_EQ(c, 10u);
}

TEST(Converge, SquareSpikesConvergeToZero) {
  auto s = spike_sequence(IndexSet::squares(), Magnitude::linear());
  auto v = st_converges(s, SpaceElement::dense({0}));
  EXPECT_EQ(v.decision, Decision::confirmed);
  for (const auto& pe : v.per_epsilon) {
    const auto& p = pe.profile;
    for (std::size_t i = 0; i < p.size(); ++i)
      EXPECT_EQ(p.ratio(i), static_cast<double>(floor_sqrt(p.checkpoints[i])) / static_cast<double>(p.checkpoints[i]));
  }
}

TEST(Converge, HarmonicDoesNotConvergeToZero) {
  auto v = st_converges(harmonic_prefix_sequence(), SpaceElement::zero(Space::sparse()));
  EXPECT_EQ(v.decision, Decision::refuted);
  EXPECT_EQ(v.per_epsilon[0].profile.final_ratio(), 1.0);
}

TEST(Converge, SearchFindsTheLimit) {
  auto v = st_converges_search(spike_sequence(constant_sequence(SpaceElement::dense({2.5})), IndexSet::primes(),
                                              Magnitude::linear()),
                               default_epsilon_grid(), at(100'000, 0.1));
  EXPECT_EQ(v.decision, Decision::confirmed);
  ASSERT_TRUE(v.limit);
  EXPECT_EQ(v.limit->coords()[0], 2.5);
  EXPECT_EQ(st_converges_search(alternating_sequence()).decision, Decision::refuted);
}

TEST(Converge, RejectsBadGrid) {
  EXPECT_THROW(st_converges(ramp_sequence(), SpaceElement::dense({0}), {}), std::invalid_argument);
  EXPECT_THROW(st_converges(ramp_sequence(), SpaceElement::dense({0}), {0.1, -1}), std::invalid_argument);
  EXPECT_THROW(st_converges(ramp_sequence(), SpaceElement::dense({0, 0})), SpaceMismatch);
}

TEST(Bounded, Examples) {
  auto spikes = st_bounded(spike_sequence(IndexSet::squares(), Magnitude::linear()));
  EXPECT_EQ(spikes.decision, Decision::confirmed);
  EXPECT_EQ(spikes.bound, 1.0);

  auto ramp = st_bounded(ramp_sequence());
  EXPECT_EQ(ramp.decision, Decision::refuted);
  EXPECT_EQ(ramp.probes_tried, default_probes(100'000));

  // x_n = n off a finite set is still unbounded.
  auto dense_spikes = st_bounded(spike_sequence(IndexSet::complement(IndexSet::finite({1, 2, 3})), Magnitude::linear()));
  EXPECT_EQ(dense_spikes.decision, Decision::refuted);

  auto real = st_bounded_real("sqrt", [](std::uint64_t k) { return std::sqrt(static_cast<double>(k)); }, {1, 4, 16},
                              at(10'000));
  EXPECT_EQ(real.decision, Decision::refuted);
  EXPECT_THROW(st_bounded(ramp_sequence(), std::vector<double>{}, at(1000)), std::invalid_argument);
}

TEST(Cauchy, Examples) {
  EXPECT_EQ(st_cauchy(alternating_sequence()).decision, Decision::refuted);
  EXPECT_EQ(st_cauchy(constant_sequence(SpaceElement::dense({1, 2}))).decision, Decision::confirmed);
  auto h = st_cauchy(harmonic_prefix_sequence());
  EXPECT_EQ(h.decision, Decision::confirmed);
  EXPECT_EQ(h.anchors.size(), 3u);
}

TEST(Weak, Examples) {
  EXPECT_EQ(weakly_st_bounded(random_unit_ball(Space::dense(3), 1)).decision, Decision::confirmed);
  EXPECT_EQ(weakly_st_bounded(ramp_sequence()).decision, Decision::refuted);
  EXPECT_THROW(weakly_st_bounded(harmonic_prefix_sequence()), SpaceMismatch);
  EXPECT_EQ(default_probe_functionals(3).size(), 11u);
}

TEST(NormChecks, BoundedAndNull) {
  auto ramp = norm_trace(ramp_sequence(), 1000);
  EXPECT_EQ(norm_bounded_trace(ramp, "ramp", at(1000)).decision, Decision::refuted);
  auto nl = norm_trace(null_sequence(SpaceElement::dense({1})), 1000);
  EXPECT_EQ(norm_bounded_trace(nl, "null", at(1000)).decision, Decision::confirmed);
  EXPECT_EQ(norm_null_trace(nl, "null", {0.5, 0.1, 0.01}, at(1000)).decision, Decision::confirmed);
  auto unit = norm_trace(unit_coords_sequence(), 1000);
  EXPECT_EQ(norm_null_trace(unit, "unit", {0.5}, at(1000)).decision, Decision::refuted);
}

TEST(TraceProperty, ExceedanceCountsAreMonotoneInEpsilon) {
  std::vector<SequenceSpec> seqs{random_unit_ball(Space::dense(2), 4), harmonic_prefix_sequence(),
                                 spike_sequence(IndexSet::primes(), Magnitude::square_root()),
                                 damp(prime_coords_sequence())};
  const auto cps = Schedule::geometric(10).checkpoints(10'000);
  for (const auto& s : seqs) {
    auto tr = norm_trace(s, 10'000);
    std::vector<std::uint64_t> prev;
    for (double eps : {0.001, 0.01, 0.1, 0.3, 0.5, 0.9, 1.0, 2.0}) {
      auto cur = exceedance_counts(tr, eps, cps);
      if (!prev.empty()) {
        for (std::size_t i = 0; i < cur.size(); ++i) EXPECT_LE(cur[i], prev[i]) << s.label();
      }
      prev = cur;
    }
  }
}

TEST(TraceProperty, SupTrackerMatchesDirectNorms) {
  std::vector<SequenceSpec> seqs{harmonic_prefix_sequence(), unit_coords_sequence(), prime_coords_sequence(),
                                 combine(harmonic_prefix_sequence(), unit_coords_sequence(), 1.0, -3.0)};
  auto center = SpaceElement::sparse({{1, 0.5}, {4, -1.0}, {11, 2.0}});
  for (const auto& s : seqs) {
    auto tr = distance_trace(s, center, 500);
    for (std::uint64_t k = 1; k <= 500; ++k) EXPECT_EQ(tr[k - 1], norm(sub(s(k), center), Norm::sup())) << s.label();
  }
}

TEST(VerdictProperty, ConvergentImpliesBounded) {
  std::vector<SequenceSpec> seqs{null_sequence(SpaceElement::dense({0.3, -0.1})),
                                 spike_sequence(IndexSet::squares(), Magnitude::linear()),
                                 constant_sequence(SpaceElement::dense({7})),
                                 damp(prime_coords_sequence())};
  for (const auto& s : seqs) {
    auto c = st_converges_search(s);
    ASSERT_EQ(c.decision, Decision::confirmed) << s.label();
    EXPECT_NE(st_bounded(s).decision, Decision::refuted) << s.label();
  }
}
