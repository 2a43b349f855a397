#include <gtest/gtest.h>

#include <cmath>

#include "bootcopula/error.hpp"
#include "bootcopula/quantile_fit.hpp"
#include "support/stats.hpp"

using namespace bootcopula;

TEST(FitResidual, Examples) {
  const auto n01 = DistributionSpec::normal(0, 1);
  EXPECT_LE(fit_residual(n01, {-1.9599640, 1.9599640}), 1e-8);
  EXPECT_NEAR(fit_residual(n01, {0.0, 1.9599640}), 0.475, 1e-8);
  EXPECT_NEAR(fit_residual(DistributionSpec::beta(1, 1), {0.025, 0.975}), 0.0, 1e-16);
}

TEST(Fit, NormalClosedForm) {
  const auto f = fit_from_quantiles(Family::normal, {-1.9599640, 1.9599640});
  EXPECT_NEAR(f.spec.param(0), 0.0, 1e-12);
  EXPECT_NEAR(f.spec.param(1), 1.0, 1e-7);
  EXPECT_LE(f.residual, 1e-10);
}

TEST(Fit, BetaReproducesBothQuantiles) {
  const QuantileConstraint c{0.027, 0.050};
  const auto f = fit_from_quantiles(Family::beta, c);
  EXPECT_EQ(f.spec.family(), Family::beta);
  EXPECT_LE(f.residual, 1e-6);
  EXPECT_NEAR(cdf(f.spec, 0.027), 0.025, 1e-6);
  EXPECT_NEAR(cdf(f.spec, 0.050), 0.975, 1e-6);
  EXPECT_TRUE(f.warnings.empty());
}

TEST(Fit, RejectsReversedBounds) {
  try {
    fit_from_quantiles(Family::beta, {0.5, 0.4});
    FAIL() << "expected InvalidArgument";
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("qLow must be < qUpp"), std::string::npos);
  }
}

TEST(Fit, RejectsBoundsOutsideSupport) {
  EXPECT_THROW(fit_from_quantiles(Family::beta, {0.0, 0.4}), DomainError);
  EXPECT_THROW(fit_from_quantiles(Family::beta, {0.2, 1.0}), DomainError);
  EXPECT_THROW(fit_from_quantiles(Family::gamma, {-1.0, 2.0}), DomainError);
  EXPECT_THROW(fit_from_quantiles(Family::exponential, {0.0, 2.0}), DomainError);
  EXPECT_THROW(fit_from_quantiles(Family::normal, {0.0, 1.0, 0.6, 0.5}), InvalidArgument);
}

TEST(Fit, ExponentialWarnsWhenOverdetermined) {
  const auto f = fit_from_quantiles(Family::exponential, {1.0, 1.2});
  EXPECT_GT(f.residual, 1e-3);
  ASSERT_EQ(f.warnings.size(), 1u);
  const auto exact = DistributionSpec::exponential(0.7);
  const QuantileConstraint c{quantile(exact, 0.025), quantile(exact, 0.975)};
  const auto g = fit_from_quantiles(Family::exponential, c);
  EXPECT_LE(g.residual, 1e-8);
  EXPECT_NEAR(g.spec.param(0), 0.7, 1e-6);
  EXPECT_TRUE(g.warnings.empty());
}

namespace {

DistributionSpec random_two_param(Family family, check::Gen& gen) {
  switch (family) {
    case Family::beta:
      return DistributionSpec::beta(gen.log_uniform(0.5, 1000.0), gen.log_uniform(0.5, 1000.0));
    case Family::gamma:
      return DistributionSpec::gamma(gen.log_uniform(0.5, 500.0), gen.log_uniform(0.01, 100.0));
    default:
      return DistributionSpec::normal(gen.uniform(-100.0, 100.0), gen.log_uniform(1e-3, 100.0));
  }
}

}  // namespace

class SelfConsistency : public ::testing::TestWithParam<Family> {};

TEST_P(SelfConsistency, RefitRecoversParameters) {
  check::Gen gen(static_cast<std::uint64_t>(GetParam()) + 100);
  for (int i = 0; i < 200; ++i) {
    const auto truth = random_two_param(GetParam(), gen);
    const QuantileConstraint c{quantile(truth, 0.025), quantile(truth, 0.975)};
    const auto fit = fit_from_quantiles(GetParam(), c);
    EXPECT_NEAR(cdf(fit.spec, c.q_low), 0.025, 1e-6) << truth.describe();
    EXPECT_NEAR(cdf(fit.spec, c.q_upp), 0.975, 1e-6) << truth.describe();
    for (std::size_t k = 0; k < 2; ++k) {
      const double scale = std::max(std::fabs(truth.param(k)),
                                    GetParam() == Family::normal && k == 0 ? truth.param(1) : 0.0);
      EXPECT_NEAR(fit.spec.param(k), truth.param(k), 1e-4 * scale)
          << truth.describe() << " got " << fit.spec.describe();
    }
    EXPECT_NEAR(fit.residual, fit_residual(fit.spec, c), 1e-12);
  }
}

INSTANTIATE_TEST_SUITE_P(TwoParameterFamilies, SelfConsistency,
                         ::testing::Values(Family::beta, Family::gamma, Family::normal),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(Property, ExponentialSelfConsistency) {
  check::Gen gen(77);
  for (int i = 0; i < 200; ++i) {
    const auto truth = DistributionSpec::exponential(gen.log_uniform(1e-3, 1e3));
    const QuantileConstraint c{quantile(truth, 0.025), quantile(truth, 0.975)};
    const auto fit = fit_from_quantiles(Family::exponential, c);
    EXPECT_NEAR(cdf(fit.spec, c.q_low), 0.025, 1e-6);
    EXPECT_NEAR(cdf(fit.spec, c.q_upp), 0.975, 1e-6);
  }
}
