#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "stconv/operators.hpp"
#include "stconv/stanalysis.hpp"

using namespace stconv;

namespace {

using oracle::Matrix;
using oracle::spectral_norm;

std::vector<std::pair<OperatorSpec, Space>> operator_zoo() {
  auto rank1 = OperatorSpec::rank_one(FunctionalSpec::dense_weights({1, -2, 0.5}), SpaceElement::dense({3, 1}));
  return {{OperatorSpec::identity(), Space::sparse()},
          {OperatorSpec::diagonal(Multiplier::prime_scale()), Space::sparse()},
          {OperatorSpec::diagonal(Multiplier::inverse()), Space::dense(5)},
          {OperatorSpec::rank_one(FunctionalSpec::ramp_weights(), SpaceElement::sparse({{1, 1.0}})), Space::sparse()},
          {OperatorSpec::rank_one(FunctionalSpec::coordinate(2), SpaceElement::sparse({{3, 2.0}})), Space::sparse()},
          {rank1, Space::dense(3)},
          {OperatorSpec::finite_rank({rank1, rank1}), Space::dense(3)},
          {OperatorSpec::matrix({{1, 2}, {3, 4}, {0, -1}}), Space::dense(2)},
          {OperatorSpec::compose(OperatorSpec::matrix({{1, 1}}), OperatorSpec::matrix({{2, 0}, {0, 3}})), Space::dense(2)},
          {OperatorSpec::linear_combo(2, OperatorSpec::identity(), -1,
                                      OperatorSpec::diagonal(Multiplier::truncated_inverse(4))),
           Space::sparse()}};
}

}  // namespace

TEST(Apply, Examples) {
  auto ps = OperatorSpec::diagonal(Multiplier::prime_scale());
  EXPECT_EQ(ps.descriptor(), "diag(prime_scale)");
  EXPECT_EQ(ps(SpaceElement::sparse({{4, 1.0}, {7, 1.0}})).describe(), "sparse{4:1,7:7}");
  auto inv = OperatorSpec::diagonal(Multiplier::inverse());
  EXPECT_EQ(inv(SpaceElement::dense({1, 1, 1, 1})).describe(), "dense[1,0.5,0.3333333333333333,0.25]");
  auto r = OperatorSpec::rank_one(FunctionalSpec::ramp_weights(), SpaceElement::sparse({{1, 1.0}}));
  EXPECT_EQ(r.descriptor(), "rank1(ramp_weights,sparse{1:1})");
  EXPECT_EQ(r(SpaceElement::sparse({{10, 1.0}})).describe(), "sparse{1:10}");
  auto m = OperatorSpec::matrix({{1, 2}, {3, 4}});
  EXPECT_EQ(m.descriptor(), "matrix[[1,2],[3,4]]");
  EXPECT_EQ(m(SpaceElement::dense({1, 1})).describe(), "dense[3,7]");
  EXPECT_THROW(m(SpaceElement::dense({1, 1, 1})), SpaceMismatch);
  EXPECT_THROW(r(SpaceElement::dense({1})), SpaceMismatch);
  EXPECT_THROW(OperatorSpec::compose(m, OperatorSpec::matrix({{1, 2, 3}})), SpaceMismatch);
  EXPECT_THROW(OperatorSpec::matrix({{1, 2}, {3}}), std::invalid_argument);
  EXPECT_THROW(OperatorSpec::finite_rank({m}), std::invalid_argument);
}

TEST(Apply, CompositionAndCombinationAreExact) {
  auto a = OperatorSpec::matrix({{1, 2}, {3, 4}});
  auto b = OperatorSpec::matrix({{0, 1}, {-1, 0.5}});
  auto ab = OperatorSpec::compose(a, b);
  auto combo = OperatorSpec::linear_combo(0.3, a, -2, b);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int t = 0; t < 100; ++t) {
    auto x = SpaceElement::dense({u(rng), u(rng)});
    EXPECT_EQ(ab(x).describe(), a(b(x)).describe());
    auto direct = axpby(0.3, a(x), -2, b(x));
    EXPECT_LE(norm(sub(combo(x), direct), Norm::sup()), 1e-12);
  }
}

TEST(OperatorProperty, LinearityDefectIsNegligible) {
  for (const auto& [op, space] : operator_zoo()) EXPECT_LT(linearity_defect(op, space, 200), 1e-10) << op.descriptor();
}

TEST(NormEstimate, Examples) {
  EXPECT_GE(operator_norm_estimate(OperatorSpec::diagonal(Multiplier::prime_scale()), 100, Space::sparse()), 97.0);
  EXPECT_DOUBLE_EQ(operator_norm_estimate(OperatorSpec::identity(), 50, Space::sparse()), 1.0);
  EXPECT_DOUBLE_EQ(operator_norm_estimate(OperatorSpec::identity(), 50, Space::dense(4)), 1.0);
  auto y0 = SpaceElement::dense({3, 4});
  auto r = OperatorSpec::rank_one(FunctionalSpec::coordinate(1), y0);
  EXPECT_DOUBLE_EQ(operator_norm_estimate(r, 50, Space::dense(2)), norm(y0, Norm::lp(2)));
  EXPECT_THROW(operator_norm_estimate(r, 0, Space::dense(2)), std::invalid_argument);
}

TEST(NormEstimate, WithinFactorTwoOfTheSpectralNorm) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g(0, 2);
  for (std::size_t d = 1; d <= 4; ++d)
    for (int t = 0; t < 10; ++t) {
      Matrix m(d, std::vector<double>(d));
      for (auto& row : m)
        for (double& v : row) v = g(rng);
      const double exact = spectral_norm(m);
      const double est = operator_norm_estimate(OperatorSpec::matrix(m), 200, Space::dense(d));
      EXPECT_LE(est, exact * (1 + 1e-9));
      EXPECT_GE(est, exact / 2);
    }
  EXPECT_NEAR(spectral_norm({{3, 0}, {0, -5}}), 5.0, 1e-12);
}

TEST(Functionals, Bounds) {
  EXPECT_EQ(FunctionalSpec::coordinate(3).bound(Norm::sup()), 1.0);
  EXPECT_EQ(FunctionalSpec::dense_weights({1, -2}).bound(Norm::sup()), 3.0);
  EXPECT_DOUBLE_EQ(*FunctionalSpec::dense_weights({3, 4}).bound(Norm::lp(2)), 5.0);
  EXPECT_EQ(FunctionalSpec::dense_weights({3, -4}).bound(Norm::lp(1)), 4.0);
  EXPECT_FALSE(FunctionalSpec::ramp_weights().bound(Norm::sup()));
  EXPECT_NEAR(*FunctionalSpec::inverse_square_weights().bound(Norm::sup()), 1.6449340668, 1e-9);
  EXPECT_THROW(FunctionalSpec::coordinate(0), std::invalid_argument);
}

TEST(Image, Sequences) {
  auto img = image_sequence(OperatorSpec::diagonal(Multiplier::prime_scale()), prime_coords_sequence());
  EXPECT_EQ(img.label(), "image(diag(prime_scale),prime_coords)");
  EXPECT_EQ(img(4).describe(), "sparse{7:7}");
  auto tr = image_sequence(SequenceTransform::prime_scale_by_position(), unit_coords_sequence());
  EXPECT_EQ(tr.label(), "image(transform(prime_scale_by_position),unit_coords)");
  EXPECT_EQ(tr(5).describe(), "sparse{5:5}");
  EXPECT_EQ(tr(4).describe(), "sparse{4:1}");

  // Images of damped sequences keep the scaling shortcut and agree with direct evaluation.
  auto d = image_sequence(OperatorSpec::diagonal(Multiplier::prime_scale()), damp(prime_coords_sequence()));
  ASSERT_NE(d.scaled_base(), nullptr);
  auto tr_fast = norm_trace(d, 2000);
  for (std::uint64_t k = 1; k <= 2000; ++k) EXPECT_DOUBLE_EQ(tr_fast[k - 1], norm(d(k), Norm::sup()));

  auto m = OperatorSpec::matrix({{1, 0, 0}});
  EXPECT_THROW(image_sequence(m, ramp_sequence()), SpaceMismatch);
  EXPECT_EQ(image_sequence(m, random_unit_ball(Space::dense(3), 1)).space(), Space::dense(1));
}

TEST(Image, IncrementsMapToIncrements) {
  auto op = OperatorSpec::linear_combo(1, OperatorSpec::identity(), 3, OperatorSpec::diagonal(Multiplier::inverse()));
  auto img = image_sequence(op, harmonic_prefix_sequence());
  ASSERT_TRUE(img.has_delta());
  SpaceElement acc = SpaceElement::zero(Space::sparse());
  for (std::uint64_t n = 1; n <= 50; ++n) {
    acc = add(acc, img.delta(n));
    EXPECT_LE(norm(sub(acc, img(n)), Norm::sup()), 1e-12);
  }
}
