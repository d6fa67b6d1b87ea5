#include <gtest/gtest.h>

#include <cmath>

#include "stconv/sequences.hpp"

using namespace stconv;

namespace {

double sup_dist(const SpaceElement& a, const SpaceElement& b) { return norm(sub(a, b), Norm::sup()); }

// Rebuild x_n by summing increments from x_0 = 0.
SpaceElement sum_of_deltas(const SequenceSpec& s, std::uint64_t n) {
  SpaceElement acc = SpaceElement::zero(s.space());
  for (std::uint64_t k = 1; k <= n; ++k) acc = add(acc, s.delta(k));
  return acc;
}

}  // namespace

TEST(Sequences, HarmonicPrefix) {
  auto h = harmonic_prefix_sequence();
  auto x = h(4);
  ASSERT_EQ(x.entries().size(), 4u);
  EXPECT_DOUBLE_EQ(x.at(4), 0.25);
  EXPECT_EQ(x.at(5), 0.0);
  // ||x_n - x_m|| = 1/(min(n, m) + 1) in the sup norm.
  for (std::uint64_t n = 1; n <= 40; ++n)
    for (std::uint64_t m = n + 1; m <= 40; ++m) EXPECT_DOUBLE_EQ(sup_dist(h(n), h(m)), 1.0 / static_cast<double>(n + 1));
}

TEST(Sequences, DeltasRebuildTheGenerator) {
  std::vector<SequenceSpec> seqs{harmonic_prefix_sequence(),
                                 unit_coords_sequence(),
                                 prime_coords_sequence(),
                                 constant_sequence(SpaceElement::sparse({{2, 0.5}})),
                                 spike_sequence(zero_sequence(Space::sparse()), IndexSet::squares(), Magnitude::linear()),
                                 combine(harmonic_prefix_sequence(), unit_coords_sequence(), 2.0, -1.0),
                                 subsequence(harmonic_prefix_sequence(), IndexSet::primes()),
                                 subsequence(unit_coords_sequence(), IndexSet::squares())};
  for (const auto& s : seqs) {
    ASSERT_TRUE(s.has_delta()) << s.label();
    for (std::uint64_t n : {1, 2, 7, 30, 90}) EXPECT_LE(sup_dist(sum_of_deltas(s, n), s(n)), 1e-12) << s.label() << " " << n;
  }
}

TEST(Sequences, PrimeCoords) {
  auto p = prime_coords_sequence();
  EXPECT_EQ(p(1).describe(), "sparse{2:1}");
  EXPECT_EQ(p(25).describe(), "sparse{97:1}");
}

TEST(Sequences, RandomDrawsAreSeededAndInTheUnitBall) {
  for (Space sp : {Space::dense(1), Space::dense(3), Space::dense(8), Space::sparse()}) {
    auto a = random_unit_ball(sp, 42);
    auto b = random_unit_ball(sp, 42);
    auto c = random_unit_ball(sp, 43);
    bool differs = false;
    for (std::uint64_t n = 1; n <= 2000; ++n) {
      EXPECT_EQ(a(n).describe(), b(n).describe());
      EXPECT_LE(norm(a(n), a.norm()), 1.0);
      differs = differs || a(n).describe() != c(n).describe();
    }
    EXPECT_TRUE(differs) << sp.describe();
    // Access order does not matter.
    EXPECT_EQ(a(1500).describe(), random_unit_ball(sp, 42)(1500).describe());
  }
  EXPECT_EQ(random_unit_ball(Space::dense(2), 7).seed(), 7u);
  for (Norm n : {Norm::sup(), Norm::lp(1)}) {
    auto r = random_unit_ball(Space::dense(4), 3, n);
    for (std::uint64_t k = 1; k <= 500; ++k) EXPECT_LE(norm(r(k), n), 1.0);
  }
}

TEST(Sequences, SpikeSequences) {
  auto s = spike_sequence(IndexSet::squares(), Magnitude::linear());
  EXPECT_EQ(s.label(), "spike(squares,n)");
  EXPECT_EQ(s(16).coords()[0], 16.0);
  EXPECT_EQ(s(15).coords()[0], 0.0);
  auto c = spike_sequence(zero_sequence(Space::sparse()), IndexSet::primes(), Magnitude::constant(3));
  EXPECT_EQ(c.label(), "spike(primes,3,zero(sparse))");
  EXPECT_EQ(c(7).describe(), "sparse{7:3}");
  EXPECT_TRUE(c(8).is_zero());
  EXPECT_EQ(Magnitude::square_root()(9), 3.0);
  EXPECT_EQ(Magnitude::power(2)(3), 9.0);
}

TEST(Sequences, SubsequenceAndCombine) {
  auto r = ramp_sequence();
  auto sq = subsequence(r, IndexSet::squares());
  EXPECT_EQ(sq.label(), "subseq(ramp,squares)");
  EXPECT_EQ(sq(7).coords()[0], 49.0);
  auto pr = subsequence(r, IndexSet::primes());
  EXPECT_EQ(pr(25).coords()[0], 97.0);
  EXPECT_THROW(subsequence(r, IndexSet::finite({2, 3}))(3), HorizonExhausted);

  auto comb = combine(r, alternating_sequence(), 1.0, 2.0);
  EXPECT_EQ(comb.label(), "combine(ramp,alternating,1,2)");
  EXPECT_EQ(comb(3).coords()[0], 1.0);
  EXPECT_THROW(combine(r, harmonic_prefix_sequence(), 1, 1), SpaceMismatch);
  EXPECT_THROW(combine(r, r.with_norm(Norm::sup()), 1, 1), SpaceMismatch);
}

TEST(Sequences, ScaledSequencesExposeTheirBase) {
  auto d = damp(prime_coords_sequence());
  EXPECT_EQ(d.label(), "damp(prime_coords)");
  ASSERT_NE(d.scaled_base(), nullptr);
  EXPECT_EQ(d.scale_factor(4), 0.25);
  EXPECT_EQ(d(4).describe(), "sparse{7:0.25}");

  auto nl = null_sequence(SpaceElement::dense({1}));
  EXPECT_EQ(nl.label(), "null(dense[1])");
  EXPECT_EQ(nl(8).coords()[0], 0.125);
  EXPECT_THROW(harmonic_prefix_sequence().with_norm(Norm::lp(2)), SpaceMismatch);
}
