#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "errdist/errors.hpp"
#include "errdist/models.hpp"
#include "errdist/rng.hpp"
#include "oracles.hpp"

using namespace errdist;

namespace {

// Student-t density written out independently of boost
double t_density(double u, double nu) {
  return std::exp(std::lgamma((nu + 1) / 2) - std::lgamma(nu / 2)) / std::sqrt(nu * M_PI) *
         std::pow(1 + u * u / nu, -(nu + 1) / 2);
}

// integral over [lo, hi] with the tails beyond +-limit truncated
double integrate_line(const std::function<double(double)>& f, double lo, double hi) {
  return oracle::simpson(f, lo, hi, 1e-13, 512);
}

std::vector<ErrorModel> all_models() {
  return {ErrorModel::normal(1.0), ErrorModel::normal(0.7), ErrorModel::student_t(5.0),
          ErrorModel::student_t(8.0, 0.5), ErrorModel::uniform(1.0), ErrorModel::uniform(2.0)};
}

double support_hi(const ErrorModel& m) {
  switch (m.family()) {
    case ErrorFamily::normal: return 14.0 * m.scale();
    case ErrorFamily::student_t: return 4000.0 * m.scale();
    case ErrorFamily::uniform: return m.scale();
  }
  return 0.0;
}

}  // namespace

TEST(ErrorModel, Validation) {
  EXPECT_THROW(ErrorModel::normal(0.0), InvalidArgument);
  EXPECT_THROW(ErrorModel::student_t(4.0), InvalidArgument);
  EXPECT_THROW(ErrorModel::student_t(4.49), InvalidArgument);
  EXPECT_NO_THROW(ErrorModel::student_t(4.5));
  EXPECT_THROW(ErrorModel::uniform(0.0), InvalidArgument);
  EXPECT_TRUE(ErrorModel::uniform(1.0).test_only());
  EXPECT_FALSE(ErrorModel::normal(1.0).test_only());
}

TEST(ErrorModel, DensityCdfConsistency) {
  for (const auto& m : all_models()) {
    const double h = 1e-6;
    for (int i = 0; i <= 60; ++i) {
      const double x = -3.0 + 0.1 * i;
      if (m.family() == ErrorFamily::uniform && std::abs(std::abs(x) - m.scale()) < 1e-3) continue;
      EXPECT_NEAR((m.cdf(x + h) - m.cdf(x - h)) / (2 * h), m.density(x), 1e-6) << m.name() << " " << x;
      EXPECT_NEAR(m.cdf(x) + m.cdf(-x), 1.0, 1e-12);
    }
    EXPECT_DOUBLE_EQ(m.cdf(0.0), 0.5);
  }
  EXPECT_NEAR(ErrorModel::student_t(5.0).density(1.3), t_density(1.3, 5.0), 1e-14);
}

TEST(ErrorModel, MeanZeroAndVariance) {
  for (const auto& m : all_models()) {
    const double hi = support_hi(m);
    if (m.family() == ErrorFamily::student_t) continue;  // heavy tails: checked below
    const double mean = integrate_line([&](double x) { return x * m.density(x); }, -hi, hi);
    const double var = integrate_line([&](double x) { return x * x * m.density(x); }, -hi, hi);
    EXPECT_NEAR(mean, 0.0, 1e-8) << m.name();
    EXPECT_NEAR(var, m.variance(), 1e-8) << m.name();
  }
  // t(8, 0.5): variance 0.25 * 8/6
  const ErrorModel t8 = ErrorModel::student_t(8.0, 0.5);
  EXPECT_DOUBLE_EQ(t8.variance(), 0.25 * 8.0 / 6.0);
}

TEST(ErrorModel, TailFirstMoment) {
  const ErrorModel n1 = ErrorModel::normal(1.0);
  EXPECT_NEAR(n1.tail_first_moment(0.0), 0.3989422804014327, 1e-15);
  EXPECT_EQ(n1.tail_first_moment(std::numeric_limits<double>::infinity()), 0.0);
  EXPECT_LT(n1.tail_first_moment(40.0), 1e-300);

  // Student t(5), t = 1: quadrature oracle vs closed form ((nu + t^2)/(nu - 1)) f(t)
  const double oracle_tail =
      oracle::simpson([](double x) { return x * t_density(x, 5.0); }, 1.0, 60.0, 1e-14, 1024) +
      oracle::simpson([](double x) { return x * t_density(x, 5.0); }, 60.0, 1e5, 1e-14, 4096);
  // analytic tail beyond 1e5 is ~ 6.2e-16; negligible at this tolerance
  EXPECT_NEAR(oracle_tail, 0.32951969602647, 1e-10);
  EXPECT_NEAR(ErrorModel::student_t(5.0).tail_first_moment(1.0), 0.32951969602647, 1e-12);

  const ErrorModel u1 = ErrorModel::uniform(1.0);
  EXPECT_DOUBLE_EQ(u1.tail_first_moment(0.0), 0.25);
  EXPECT_EQ(u1.tail_first_moment(1.5), 0.0);
  EXPECT_EQ(u1.tail_first_moment(-1.5), 0.0);

  for (const auto& m : all_models()) {
    for (double t : {-2.5, -0.3, 0.0, 0.8, 2.0}) {
      EXPECT_NEAR(tail_first_moment_quadrature(m, t), m.tail_first_moment(t), 1e-8) << m.name() << " " << t;
    }
    // decreasing to zero above the center
    double prev = m.tail_first_moment(0.0);
    for (int i = 1; i <= 50; ++i) {
      const double v = m.tail_first_moment(0.1 * i);
      EXPECT_LE(v, prev + 1e-15);
      prev = v;
    }
    EXPECT_NEAR(m.tail_first_moment(-1e6), 0.0, 1e-8);
  }
}

TEST(Variances, NormalValues) {
  const ErrorModel n1 = ErrorModel::normal(1.0);
  EXPECT_DOUBLE_EQ(var_empirical(n1, 0.0), 0.25);
  const double Phi1 = oracle::normal_cdf(1.0);
  EXPECT_NEAR(var_empirical(n1, 1.0), Phi1 * (1 - Phi1), 1e-12);
  EXPECT_NEAR(var_empirical(n1, 1.0), 0.1334837643314, 1e-12);
  EXPECT_NEAR(var_smoothed(n1, 0.0), 0.25 - 1.0 / (2.0 * M_PI), 1e-15);
  EXPECT_NEAR(var_smoothed(n1, 0.0), 0.0908450569081, 1e-12);
  for (double t : {-40.0, 40.0}) {
    EXPECT_NEAR(var_empirical(n1, t), 0.0, 1e-15);
    EXPECT_NEAR(var_smoothed(n1, t), 0.0, 1e-15);
    EXPECT_NEAR(var_efficient_meanzero(n1, t), 0.0, 1e-15);
    EXPECT_NEAR(variance_gap(n1, t), 0.0, 1e-15);
  }
}

TEST(Variances, UniformClosedForm) {
  const ErrorModel u = ErrorModel::uniform(1.0);
  EXPECT_NEAR(var_efficient_meanzero(u, 0.0), 0.0625, 1e-15);
  EXPECT_NEAR(variance_gap(u, 0.0), 1.0 / 48.0, 1e-15);
}

TEST(Variances, IdentitiesOnGrid) {
  for (const auto& m : all_models()) {
    for (int i = 0; i <= 100; ++i) {
      const double t = -4.0 + 0.08 * i;
      const double gap = variance_gap(m, t);
      EXPECT_NEAR(var_smoothed(m, t) - var_efficient_meanzero(m, t), gap, 1e-10);
      EXPECT_GE(gap, 0.0);
      EXPECT_LE(var_efficient_meanzero(m, t), var_empirical(m, t) + 1e-15);
      EXPECT_GE(var_smoothed(m, t), -1e-15);
      if (m.family() == ErrorFamily::normal) {
        const double f = m.density(t), F = m.cdf(t);
        EXPECT_NEAR(var_smoothed(m, t), F * (1 - F) - m.variance() * f * f, 1e-10);
        EXPECT_NEAR(gap, 0.0, 1e-15);
        EXPECT_NEAR(var_efficient_meanzero(m, t), var_smoothed(m, t), 1e-10);
      }
    }
  }
}

TEST(Variances, InfluenceFunctionSquareIntegratesToVariance) {
  const ErrorModel n1 = ErrorModel::normal(1.0);
  for (double t : {-1.0, 0.0, 1.0}) {
    auto sq = [&](double x) {
      const double psi = (x <= t ? 1.0 : 0.0) - n1.cdf(t) + n1.density(t) * x;
      return psi * psi * oracle::normal_pdf(x);
    };
    const double v = oracle::simpson(sq, -12.0, t, 1e-13) + oracle::simpson(sq, t, 12.0, 1e-13);
    EXPECT_NEAR(v, var_smoothed(n1, t), 1e-6);
  }
}

TEST(Regression, Evaluation) {
  const RegressionModel q = RegressionModel::polynomial({1.0, 1.0, -2.0});
  EXPECT_DOUBLE_EQ(q(0.5), 1.0);
  EXPECT_DOUBLE_EQ(q.second_derivative(0.3), -4.0);
  const RegressionModel s = RegressionModel::sinusoid(2.0, 1.0);
  EXPECT_NEAR(s(0.25), 2.0, 1e-15);
  const double h = 1e-4;
  EXPECT_NEAR((s(0.3 + h) - 2 * s(0.3) + s(0.3 - h)) / (h * h), s.second_derivative(0.3), 1e-4);
  const RegressionModel cubic = RegressionModel::polynomial({0, 0, 0, 1});
  EXPECT_DOUBLE_EQ(cubic.second_derivative(2.0), 12.0);
}

TEST(Covariates, DensityAndSampling) {
  EXPECT_THROW(CovariateModel::linear(0.0), InvalidArgument);
  EXPECT_THROW(CovariateModel::linear(1.5), InvalidArgument);
  for (const auto& c : {CovariateModel::uniform(), CovariateModel::linear(0.4)}) {
    EXPECT_NEAR(oracle::simpson([&](double z) { return c.density(z); }, 0.0, 1.0), 1.0, 1e-12);
  }
  // inverse-CDF sampler: mean of linear(0.4) is 0.4/2 + 2*0.6/3 = 0.6
  Philox4x32 rng(3, 0);
  const CovariateModel lin = CovariateModel::linear(0.4);
  double s = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = lin.sample(rng);
    ASSERT_GE(z, 0.0);
    ASSERT_LE(z, 1.0);
    s += z;
  }
  const double var = 0.4 / 3 + 2 * 0.6 / 4 - 0.36;
  EXPECT_NEAR(s / n, 0.6, 4 * std::sqrt(var / n));
}

TEST(Scenario, SamplingDeterminismAndSanity) {
  const auto cov = CovariateModel::uniform();
  const auto reg = RegressionModel::polynomial({1.0, 1.0, -2.0});
  const auto err = ErrorModel::normal(1.0);
  const Dataset a = sample_scenario(cov, reg, err, 500, 42);
  const Dataset b = sample_scenario(cov, reg, err, 500, 42);
  EXPECT_EQ(a.z, b.z);
  EXPECT_EQ(a.y, b.y);
  EXPECT_EQ(*a.true_errors, *b.true_errors);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_DOUBLE_EQ(a.y[i], reg(a.z[i]) + (*a.true_errors)[i]);
  EXPECT_NE(sample_scenario(cov, reg, err, 500, 43).z, a.z);
  EXPECT_THROW(sample_scenario(cov, reg, err, 1, 42), InvalidSize);

  const Dataset big = sample_scenario(cov, reg, err, 10000, 7);
  double mean = 0.0;
  for (double z : big.z) mean += z;
  mean /= 10000.0;
  EXPECT_NEAR(mean, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / 10000.0));
}

TEST(Scenario, ErrorSamplersMatchMoments) {
  const int n = 200000;
  for (const auto& m : {ErrorModel::normal(1.5), ErrorModel::student_t(9.0, 1.0), ErrorModel::uniform(2.0)}) {
    Philox4x32 rng(99, 1);
    double s = 0.0, ss = 0.0, below = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = m.sample(rng);
      s += x;
      ss += x * x;
      if (x <= 0.5) below += 1.0;
    }
    const double var = m.variance();
    EXPECT_NEAR(s / n, 0.0, 4.0 * std::sqrt(var / n)) << m.name();
    EXPECT_NEAR(ss / n, var, 0.03 * var) << m.name();
    const double F = m.cdf(0.5);
    EXPECT_NEAR(below / n, F, 4.0 * std::sqrt(F * (1 - F) / n)) << m.name();
  }
}
