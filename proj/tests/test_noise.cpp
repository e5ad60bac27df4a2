#include <gtest/gtest.h>

#include "oracle.hpp"
#include "qnoise/noise.hpp"

using namespace qnoise;

TEST(StaticNoise, RejectsOutOfRangeLambda) {
  EXPECT_THROW(StaticNoiseSpec({0.5, 1.2}), DomainError);
  EXPECT_THROW(StaticNoiseSpec({-0.1}), DomainError);
  EXPECT_THROW(static_qubit(std::nan("")), DomainError);
}

TEST(StaticNoise, RegisterMatchesKroneckerProduct) {
  const std::vector<double> ls{0.9, 0.2, 0.65};
  oracle::Mat expected = oracle::Mat::Identity(1, 1);
  for (double l : ls) expected = oracle::kron(expected, oracle::static_qubit(l));
  EXPECT_LT((static_register(StaticNoiseSpec(ls)).matrix() - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(StaticNoise, PureAndMixedLimits) {
  EXPECT_NEAR(static_register(StaticNoiseSpec::uniform(3, 1.0))(0, 0).real(), 1.0, 0);
  EXPECT_NEAR(static_register(StaticNoiseSpec::uniform(3, 0.0))(7, 7).real(), 1.0, 0);
  EXPECT_NEAR(static_register(StaticNoiseSpec::uniform(2, 0.5)).purity(), 0.25, 1e-15);
}

TEST(Purity, RoundTripAndSymmetry) {
  for (double l : {0.0, 0.1, 0.5, 0.75, 1.0}) {
    const double tau = purity_from_lambda(l).tau;
    EXPECT_NEAR(tau, purity_from_lambda(1.0 - l).tau, 1e-15);
    EXPECT_NEAR(purity_from_lambda(lambda_from_purity({tau})).tau, tau, 1e-15);
  }
  EXPECT_DOUBLE_EQ(purity_from_lambda(0.5).tau, 0.0);
  EXPECT_DOUBLE_EQ(lambda_from_purity({0.9}), 0.95);
}

// Single-qubit purity Tr(rho^2) = (1 + tau^2)/2.
TEST(Purity, MatchesTraceOfSquare) {
  for (double l : uniform_grid(0.0, 1.0, 21)) {
    const double tau = purity_from_lambda(l).tau;
    EXPECT_NEAR(static_qubit(l).purity(), 0.5 * (1.0 + tau * tau), 1e-15);
  }
}

TEST(WhiteNoise, LimitsAndNormalization) {
  const DensityMatrix pure = white_noise_ghz(WhiteNoiseSpec(1.0, 3));
  EXPECT_NEAR(pure.purity(), 1.0, 1e-14);
  EXPECT_NEAR(pure(0, 7).real(), 0.5, 1e-15);
  const DensityMatrix mixed = white_noise_ghz(WhiteNoiseSpec(0.0, 3));
  EXPECT_LT(detail::max_abs(mixed.matrix() - DensityMatrix::maximally_mixed(3).matrix()), 1e-15);
  for (double t : {0.2, 0.9}) {
    const DensityMatrix rho = white_noise_ghz(WhiteNoiseSpec(t, 4));
    EXPECT_NEAR(rho.trace(), 1.0, 1e-14);
    EXPECT_TRUE(rho.check().ok());
  }
}

TEST(WhiteNoise, RejectsBadParameters) {
  EXPECT_THROW(WhiteNoiseSpec(1.1, 3), DomainError);
  EXPECT_THROW(WhiteNoiseSpec(0.5, 0), DomainError);
}

TEST(Grid, EndpointsAndCount) {
  const auto g = uniform_grid(0.0, 1.0, 101);
  ASSERT_EQ(g.size(), 101u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g.back(), 1.0);
  EXPECT_NEAR(g[10], 0.1, 1e-15);
  EXPECT_THROW(uniform_grid(1.0, 0.0), DomainError);
}
