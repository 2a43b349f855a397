#include <gtest/gtest.h>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>

#include "bootcopula/distributions.hpp"
#include "bootcopula/error.hpp"
#include "support/stats.hpp"

using namespace bootcopula;

namespace {

// Frozen from tests/oracles/oracles.py (mpmath, 40 digits).
constexpr double kNormalQ975 = 1.9599639845400542355;
constexpr double kNormalCdfAt1959964 = 0.9750000009035575957;
constexpr double kNormalPdf0 = 0.39894228040143267794;

DistributionSpec random_spec(Family family, check::Gen& gen) {
  switch (family) {
    case Family::beta:
      return DistributionSpec::beta(gen.log_uniform(0.2, 2000.0), gen.log_uniform(0.2, 2000.0));
    case Family::gamma:
      return DistributionSpec::gamma(gen.log_uniform(0.2, 500.0), gen.log_uniform(0.01, 100.0));
    case Family::normal:
      return DistributionSpec::normal(gen.uniform(-50.0, 50.0), gen.log_uniform(1e-3, 100.0));
    case Family::exponential:
      return DistributionSpec::exponential(gen.log_uniform(1e-3, 1e3));
  }
  return DistributionSpec::exponential(1.0);
}

}  // namespace

TEST(StdNormal, OracleValues) {
  EXPECT_NEAR(std_normal_quantile(0.975), kNormalQ975, 1e-12);
  EXPECT_NEAR(std_normal_cdf(1.9599640), kNormalCdfAt1959964, 1e-14);
  EXPECT_NEAR(std_normal_pdf(0.0), kNormalPdf0, 1e-16);
  EXPECT_EQ(std_normal_quantile(0.5), 0.0);
}

TEST(StdNormal, QuantileAntisymmetric) {
  // 1 - p is exact for these p, so the symmetry is up to quantile error only.
  for (double p : {0x1p-40, 0x1p-20, 0.0078125, 0.125, 0.3125, 0.4375}) {
    EXPECT_NEAR(std_normal_quantile(p), -std_normal_quantile(1.0 - p), 1e-13) << p;
  }
  // Deep lower tail: round trip relative in p.
  for (double p : {1e-300, 1e-200, 1e-50, 1e-20}) {
    EXPECT_NEAR(std_normal_cdf(std_normal_quantile(p)) / p, 1.0, 1e-12) << p;
  }
}

TEST(StdNormal, RejectsOutsideOpenInterval) {
  EXPECT_THROW(std_normal_quantile(0.0), DomainError);
  EXPECT_THROW(std_normal_quantile(1.0), DomainError);
  EXPECT_THROW(std_normal_quantile(std::nan("")), DomainError);
}

TEST(Cdf, FrozenOracleValues) {
  EXPECT_NEAR(cdf(DistributionSpec::beta(2, 3), 0.4), 0.5248, 1e-14);
  EXPECT_NEAR(cdf(DistributionSpec::beta(0.5, 0.5), 0.1), 0.20483276469913345165, 1e-14);
  EXPECT_NEAR(cdf(DistributionSpec::beta(39.5, 1008), 0.05), 0.97459146994284423803, 1e-13);
  EXPECT_NEAR(cdf(DistributionSpec::gamma(2.5, 1.0), 1.7), 0.36143007689620492341, 1e-14);
  EXPECT_NEAR(cdf(DistributionSpec::gamma(0.3, 2.0), 0.01), 0.34299751585698791281, 1e-14);
}

TEST(Quantile, FrozenOracleValues) {
  EXPECT_NEAR(quantile(DistributionSpec::beta(2, 5), 0.5), 0.26444998329565996232, 1e-12);
  EXPECT_NEAR(quantile(DistributionSpec::gamma(3, 2), 0.9), 2.6611601689171049522, 1e-11);
  EXPECT_NEAR(quantile(DistributionSpec::exponential(2), 0.975), 1.8444397270569681514, 1e-14);
  EXPECT_NEAR(quantile(DistributionSpec::normal(0, 1), 0.975), kNormalQ975, 1e-12);
}

TEST(Cdf, AgreesWithBoostIncompleteFunctions) {
  check::Gen gen(11);
  for (int i = 0; i < 2000; ++i) {
    const double a = gen.log_uniform(0.05, 5000.0);
    const double b = gen.log_uniform(0.05, 5000.0);
    const double x = gen.uniform();
    EXPECT_NEAR(cdf(DistributionSpec::beta(a, b), x), boost::math::ibeta(a, b, x), 1e-12)
        << a << " " << b << " " << x;
    const double shape = gen.log_uniform(0.05, 5000.0);
    const double y = gen.log_uniform(1e-3, 2.0) * shape;
    EXPECT_NEAR(cdf(DistributionSpec::gamma(shape, 1.0), y), boost::math::gamma_p(shape, y), 1e-12)
        << shape << " " << y;
  }
}

TEST(Cdf, OutsideSupportAndClamps) {
  const auto b = DistributionSpec::beta(2, 3);
  EXPECT_EQ(cdf(b, -1.0), 0.0);
  EXPECT_EQ(cdf(b, 2.0), 1.0);
  EXPECT_EQ(pdf(b, -1.0), 0.0);
  const auto g = DistributionSpec::gamma(2, 3);
  EXPECT_EQ(cdf(g, -0.5), 0.0);
  EXPECT_EQ(cdf(DistributionSpec::normal(0, 1), 50.0), 1.0);
  EXPECT_THROW(cdf(b, std::nan("")), DomainError);
  EXPECT_THROW(cdf(g, std::numeric_limits<double>::infinity()), DomainError);
}

TEST(Quantile, ExtremeProbabilitiesStayInsideSupport) {
  for (double p : {1e-300, 1e-16, 1.0 - 1e-16}) {
    const double xb = quantile(DistributionSpec::beta(0.3, 40.0), p);
    EXPECT_GE(xb, 0.0);
    EXPECT_LE(xb, 1.0);
    EXPECT_TRUE(std::isfinite(quantile(DistributionSpec::gamma(0.3, 2.0), p)));
    EXPECT_TRUE(std::isfinite(quantile(DistributionSpec::normal(1.0, 2.0), p)));
  }
  EXPECT_THROW(quantile(DistributionSpec::beta(2, 2), 0.0), DomainError);
  EXPECT_THROW(quantile(DistributionSpec::beta(2, 2), 1.0), DomainError);
}

TEST(Spec, RejectsInvalidParameters) {
  EXPECT_THROW(DistributionSpec::beta(0.0, 1.0), InvalidArgument);
  EXPECT_THROW(DistributionSpec::beta(1.0, -2.0), InvalidArgument);
  EXPECT_THROW(DistributionSpec::normal(0.0, 0.0), InvalidArgument);
  EXPECT_THROW(DistributionSpec::gamma(std::nan(""), 1.0), InvalidArgument);
  EXPECT_THROW(DistributionSpec::exponential(-1.0), InvalidArgument);
  EXPECT_THROW(parse_family("lognormal"), InvalidArgument);
  EXPECT_EQ(parse_family("gamma"), Family::gamma);
}

// 1000 random (family, params, p) cases; quantile then cdf returns p.
TEST(Property, QuantileCdfRoundTrip) {
  check::Gen gen(2024);
  const Family families[] = {Family::beta, Family::normal, Family::gamma, Family::exponential};
  for (int i = 0; i < 1000; ++i) {
    const auto spec = random_spec(families[i % 4], gen);
    const double p = gen.uniform(1e-6, 1.0 - 1e-6);
    const double x = quantile(spec, p);
    EXPECT_NEAR(cdf(spec, x), p, 1e-10) << spec.describe() << " p=" << p;
  }
}

TEST(Property, CdfMonotoneOnGrid) {
  check::Gen gen(5);
  const Family families[] = {Family::beta, Family::normal, Family::gamma, Family::exponential};
  for (Family family : families) {
    for (int rep = 0; rep < 4; ++rep) {
      const auto spec = random_spec(family, gen);
      const double lo = quantile(spec, 1e-9);
      const double hi = quantile(spec, 1.0 - 1e-9);
      double prev = -1.0;
      for (int k = 0; k <= 10000; ++k) {
        const double x = lo + (hi - lo) * k / 10000.0;
        const double f = cdf(spec, x);
        ASSERT_GE(f, prev) << spec.describe() << " x=" << x;
        prev = f;
      }
    }
  }
}

TEST(Property, DensityIntegratesToOne) {
  check::Gen gen(17);
  const Family families[] = {Family::beta, Family::normal, Family::gamma, Family::exponential};
  for (Family family : families) {
    for (int rep = 0; rep < 5; ++rep) {
      auto spec = random_spec(family, gen);
      if (family == Family::beta) spec = DistributionSpec::beta(2.0 + spec.param(0), 2.0 + spec.param(1));
      if (family == Family::gamma) spec = DistributionSpec::gamma(1.0 + spec.param(0), spec.param(1));
      // Composite Simpson between the 1e-12 and 1 - 1e-12 quantiles.
      const double lo = quantile(spec, 1e-12);
      const double hi = quantile(spec, 1.0 - 1e-12);
      const int m = 200000;
      const double h = (hi - lo) / m;
      double s = pdf(spec, lo) + pdf(spec, hi);
      for (int k = 1; k < m; ++k) s += (k % 2 ? 4.0 : 2.0) * pdf(spec, lo + k * h);
      EXPECT_NEAR(s * h / 3.0, 1.0, 1e-6) << spec.describe();
    }
  }
}

TEST(Property, NormalCdfAntisymmetry) {
  check::Gen gen(3);
  for (int i = 0; i < 1000; ++i) {
    const double mu = gen.uniform(-10, 10);
    const double sd = gen.log_uniform(0.01, 10);
    const double t = gen.uniform(0, 8) * sd;
    const auto spec = DistributionSpec::normal(mu, sd);
    EXPECT_NEAR(cdf(spec, mu + t) + cdf(spec, mu - t), 1.0, 4e-15);
  }
}
