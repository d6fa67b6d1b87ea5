#include <gtest/gtest.h>

#include <cstdint>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "stconv/density.hpp"
#include "stconv/primes.hpp"

using namespace stconv;

namespace {

using oracle::is_prime_trial;
using oracle::prime_count_sieve;

std::uint64_t brute_count(const IndexSet& s, std::uint64_t n) {
  std::uint64_t c = 0;
  for (std::uint64_t k = 1; k <= n; ++k) c += s.contains(k) ? 1 : 0;
  return c;
}

std::vector<IndexSet> sample_sets() {
  return {IndexSet::primes(),
          IndexSet::squares(),
          IndexSet::multiples(3),
          IndexSet::multiples(7),
          IndexSet::finite({1, 4, 9, 50, 51, 999}),
          IndexSet::complement(IndexSet::primes()),
          IndexSet::set_union(IndexSet::multiples(2), IndexSet::multiples(3)),
          IndexSet::intersection(IndexSet::primes(), IndexSet::complement(IndexSet::multiples(4))),
          IndexSet::custom("odd", [](std::uint64_t k) { return k % 2 == 1; })};
}

}  // namespace

TEST(Primes, SmallCountsMatchTrialDivision) {
  EXPECT_EQ(prime_count(100), 25u);
  for (std::uint64_t n = 1; n <= 2000; ++n) EXPECT_EQ(is_prime(n), is_prime_trial(n)) << n;
}

TEST(Primes, CountToOneMillion) {
  EXPECT_EQ(prime_count(1'000'000), 78498u);
  EXPECT_EQ(prime_count(1'000'000), prime_count_sieve(1'000'000));
}

TEST(Primes, NthPrime) {
  EXPECT_EQ(nth_prime(1), 2u);
  EXPECT_EQ(nth_prime(25), 97u);
  EXPECT_EQ(nth_prime(78498), 999983u);
}

TEST(Primes, LargeValuesUseTrialDivision) {
  EXPECT_TRUE(is_prime(2147483647ULL));
  EXPECT_FALSE(is_prime(2147483649ULL));
}

TEST(Count, ClosedFormsMatchBruteForce) {
  for (const auto& s : sample_sets())
    for (std::uint64_t n : {1, 2, 10, 97, 100, 1000, 4321}) EXPECT_EQ(count(s, n), brute_count(s, n)) << s.descriptor();
}

TEST(Count, RejectsZeroHorizon) { EXPECT_THROW(count(IndexSet::primes(), 0), std::invalid_argument); }

TEST(Count, SquaresUseIntegerSquareRoot) {
  for (std::uint64_t n : {1ULL, 3ULL, 4ULL, 99ULL, 100ULL, 1'000'000'000'000ULL, 999'999'999'999ULL})
    EXPECT_EQ(count(IndexSet::squares(), n), isqrt(n));
  EXPECT_EQ(isqrt(999'999'999'999ULL), 999'999u);
}

TEST(Count, MultiplesWithinOneStep) {
  for (std::uint64_t m = 1; m <= 50; ++m)
    for (std::uint64_t n = 1; n <= 10'000; ++n) {
      const auto c = count(IndexSet::multiples(m), n);
      const auto diff = static_cast<std::int64_t>(m * c) - static_cast<std::int64_t>(n);
      ASSERT_LT(std::abs(diff), static_cast<std::int64_t>(m)) << m << " " << n;
    }
}

TEST(CountProperty, ComplementIdentityIsExact) {
  std::mt19937_64 rng(11);
  for (const auto& s : sample_sets()) {
    auto c = IndexSet::complement(s);
    for (int t = 0; t < 20; ++t) {
      std::uint64_t n = 1 + rng() % 200'000;
      EXPECT_EQ(count(s, n) + count(c, n), n) << s.descriptor();
    }
  }
}

TEST(CountProperty, UnionIsSubadditiveAndInclusionExclusionHolds) {
  auto sets = sample_sets();
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (std::size_t j = 0; j < sets.size(); ++j) {
      auto u = IndexSet::set_union(sets[i], sets[j]);
      auto x = IndexSet::intersection(sets[i], sets[j]);
      for (std::uint64_t n : {10, 1000, 12345}) {
        EXPECT_LE(count(u, n), count(sets[i], n) + count(sets[j], n));
        EXPECT_EQ(count(u, n) + count(x, n), count(sets[i], n) + count(sets[j], n));
      }
    }
}

TEST(CountProperty, MonotoneInHorizon) {
  for (const auto& s : sample_sets()) {
    auto cps = Schedule::linear(997).checkpoints(50'000);
    auto counts = counts_at(s, cps);
    for (std::size_t i = 1; i < counts.size(); ++i) {
      EXPECT_LE(counts[i - 1], counts[i]);
      EXPECT_LE(counts[i] - counts[i - 1], cps[i] - cps[i - 1]);
    }
  }
}

TEST(CountProperty, CountsAtMatchesCount) {
  for (const auto& s : sample_sets()) {
    auto cps = Schedule::geometric(3).checkpoints(100'000);
    auto counts = counts_at(s, cps);
    for (std::size_t i = 0; i < cps.size(); ++i) EXPECT_EQ(counts[i], count(s, cps[i]));
  }
}

TEST(Analytic, DensitiesOfBuiltInSets) {
  EXPECT_EQ(IndexSet::primes().analytic_density(), Rational::zero());
  EXPECT_EQ(IndexSet::squares().analytic_density(), Rational::zero());
  EXPECT_EQ(IndexSet::multiples(6).analytic_density(), Rational::of(1, 6));
  EXPECT_EQ(IndexSet::finite({3, 5}).analytic_density(), Rational::zero());
  EXPECT_EQ(IndexSet::complement(IndexSet::multiples(4)).analytic_density(), Rational::of(3, 4));
  EXPECT_EQ(IndexSet::complement(IndexSet::primes()).analytic_density(), Rational::one());
}

TEST(Analytic, KnownDensityIsNeverRefuted) {
  std::vector<IndexSet> sets{IndexSet::squares(), IndexSet::finite({1, 2, 3}), IndexSet::primes()};
  for (std::uint64_t m = 1; m <= 12; ++m) {
    sets.push_back(IndexSet::multiples(m));
    sets.push_back(IndexSet::complement(IndexSet::multiples(m)));
  }
  for (const auto& s : sets) {
    ASSERT_TRUE(s.analytic_density());
    auto v = density_verdict(density_profile(s, 1'000'000), *s.analytic_density(), 0.01);
    EXPECT_NE(v.decision, Decision::refuted) << s.descriptor();
  }
}

TEST(Schedule, Checkpoints) {
  EXPECT_EQ(Schedule::geometric(10).checkpoints(1'000'000),
            (std::vector<std::uint64_t>{10, 100, 1000, 10'000, 100'000, 1'000'000}));
  EXPECT_EQ(Schedule::geometric(10).checkpoints(5000), (std::vector<std::uint64_t>{10, 100, 1000, 5000}));
  EXPECT_EQ(Schedule::linear(250).checkpoints(1000), (std::vector<std::uint64_t>{250, 500, 750, 1000}));
  EXPECT_THROW(Schedule::geometric(10).checkpoints(10), std::invalid_argument);
  EXPECT_THROW(Schedule::geometric(1).checkpoints(1000), std::invalid_argument);
  EXPECT_THROW(density_profile(IndexSet::primes(), 1), std::invalid_argument);
}

TEST(Profile, PrimesAtOneMillion) {
  auto p = density_profile(IndexSet::primes(), 1'000'000);
  EXPECT_EQ(p.counts.back(), 78498u);
  EXPECT_EQ(p.final_ratio(), 78498.0 / 1'000'000.0);
  EXPECT_EQ(p.counts, (std::vector<std::uint64_t>{4, 25, 168, 1229, 9592, 78498}));
}

TEST(Verdict, ThreeValuedDecisions) {
  auto evens = density_profile(IndexSet::multiples(2), 100'000);
  EXPECT_EQ(density_verdict(evens, Rational::of(1, 2), 0.01).decision, Decision::confirmed);
  auto wrong = density_verdict(evens, Rational::zero(), 0.01);
  EXPECT_EQ(wrong.decision, Decision::refuted);
  ASSERT_TRUE(wrong.witness);
  EXPECT_EQ(*wrong.witness, 10u);

  auto squares = density_profile(IndexSet::squares(), 1'000'000);
  auto sq = density_verdict(squares, Rational::zero(), 0.01);
  EXPECT_EQ(sq.decision, Decision::confirmed);
  EXPECT_FALSE(sq.witness);

  // Slowly decaying prime density: final deviation 0.078 but still falling.
  auto primes = density_profile(IndexSet::primes(), 1'000'000);
  EXPECT_EQ(density_verdict(primes, Rational::zero(), 0.01).decision, Decision::inconclusive);
  EXPECT_EQ(density_verdict(primes, Rational::zero(), 0.1).decision, Decision::confirmed);
}

TEST(Verdict, RejectsBadTolerance) {
  auto p = density_profile(IndexSet::squares(), 1000);
  EXPECT_THROW(density_verdict(p, Rational::zero(), 0.0), std::invalid_argument);
}

TEST(Rational, LowestTermsAndDescription) {
  EXPECT_EQ(Rational::of(4, 8), Rational::of(1, 2));
  EXPECT_EQ(Rational::of(4, 8).describe(), "1/2");
  EXPECT_EQ(Rational::zero().describe(), "zero");
  EXPECT_EQ(Rational::of(3, 3).describe(), "1");
  EXPECT_THROW(Rational::of(1, 0), std::invalid_argument);
}
