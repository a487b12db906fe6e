#include <gtest/gtest.h>

#include <cmath>

#include "errdist/errors.hpp"
#include "errdist/kernels.hpp"
#include "oracles.hpp"

using namespace errdist;

TEST(Kernels, ClosedFormValues) {
  EXPECT_DOUBLE_EQ(Kernel::triweight().value(0.0), 35.0 / 32.0);
  EXPECT_EQ(Kernel::triweight().value(1.0), 0.0);
  EXPECT_DOUBLE_EQ(Kernel::epanechnikov().value(0.0), 0.75);
  EXPECT_EQ(Kernel::uniform().value(0.3), 0.5);
  for (auto k : {Kernel::triweight(), Kernel::epanechnikov(), Kernel::uniform()}) {
    EXPECT_EQ(k.value(1.0001), 0.0);
    EXPECT_EQ(k.value(-3.0), 0.0);
  }
}

TEST(Kernels, Derivatives) {
  const Kernel k = Kernel::triweight();
  EXPECT_EQ(k.derivative(0.0), 0.0);
  EXPECT_EQ(k.derivative(1.0), 0.0);
  EXPECT_EQ(k.derivative(-1.0), 0.0);
  EXPECT_DOUBLE_EQ(k.derivative(0.5), -1.845703125);
  EXPECT_EQ(k.second_derivative(1.0), 0.0);
  EXPECT_EQ(k.second_derivative(-1.0), 0.0);
  EXPECT_DOUBLE_EQ(k.second_derivative(0.0), -6.5625);
  EXPECT_NEAR(k.second_derivative(1.0 / std::sqrt(5.0)), 0.0, 1e-14);
  EXPECT_EQ(k.value(1.0), 0.0);
}

TEST(Kernels, UnsupportedDerivatives) {
  EXPECT_THROW(Kernel::uniform().derivative(0.2), UnsupportedOperation);
  EXPECT_THROW(Kernel::epanechnikov().second_derivative(0.2), UnsupportedOperation);
  EXPECT_THROW(Kernel::uniform().second_derivative(0.2), UnsupportedOperation);
  EXPECT_NO_THROW(Kernel::epanechnikov().derivative(0.2));
}

TEST(Kernels, CdfValues) {
  for (auto k : {Kernel::triweight(), Kernel::epanechnikov(), Kernel::uniform()}) {
    EXPECT_EQ(k.cdf(-1.0), 0.0);
    EXPECT_EQ(k.cdf(1.0), 1.0);
    EXPECT_EQ(k.cdf(-5.0), 0.0);
    EXPECT_EQ(k.cdf(5.0), 1.0);
    EXPECT_DOUBLE_EQ(k.cdf(0.0), 0.5);
  }
  // Frozen from oracle::simpson of (35/32)(1-t^2)^3 over [-1, 0.5] (0.929443359375,
  // the exact rational 0.5 + (35/32)(0.5 - 0.125 + 0.01875 - 0.0078125/7)).
  const double frozen = 0.929443359375;
  const double quad = oracle::simpson(oracle::triweight, -1.0, 0.5, 1e-14);
  EXPECT_NEAR(quad, frozen, 1e-13);
  EXPECT_NEAR(Kernel::triweight().cdf(0.5), frozen, 1e-15);
}

TEST(Kernels, DensityAndMomentInvariants) {
  for (auto k : {Kernel::triweight(), Kernel::epanechnikov(), Kernel::uniform()}) {
    const double mass = oracle::simpson([&](double x) { return k.value(x); }, -1.0, 1.0);
    const double mean = oracle::simpson([&](double x) { return x * k.value(x); }, -1.0, 1.0);
    EXPECT_NEAR(mass, 1.0, 1e-10) << k.name();
    EXPECT_NEAR(mean, 0.0, 1e-10) << k.name();
    for (int i = 0; i <= 200; ++i) {
      const double x = -2.0 + 0.02 * i;
      EXPECT_EQ(k.value(-x), k.value(x));
      EXPECT_NEAR(k.cdf(x) + k.cdf(-x), 1.0, 1e-12);
    }
  }
}

TEST(Kernels, FiniteDifferenceConsistency) {
  const double h = 1e-5;
  for (auto k : {Kernel::triweight(), Kernel::epanechnikov()}) {
    // Epanechnikov has a kink at +-1, so its derivative check stays strictly inside.
    const bool closed = k.family() == KernelFamily::triweight;
    for (int i = 0; i <= 100; ++i) {
      const double x = -1.0 + 0.02 * i;
      if (!closed && (i == 0 || i == 100)) continue;
      const double fd = (k.value(x + h) - k.value(x - h)) / (2 * h);
      EXPECT_NEAR(fd, k.derivative(x), 1e-6) << k.name() << " x=" << x;
    }
  }
  for (auto k : {Kernel::triweight(), Kernel::epanechnikov(), Kernel::uniform()}) {
    for (int i = 1; i < 100; ++i) {
      const double x = -1.0 + 0.02 * i;
      const double fd = (k.cdf(x + h) - k.cdf(x - h)) / (2 * h);
      EXPECT_NEAR(fd, k.value(x), 1e-6) << k.name() << " x=" << x;
    }
  }
  const Kernel tw = Kernel::triweight();
  for (int i = 1; i < 100; ++i) {
    const double x = -1.0 + 0.02 * i;
    const double fd = (tw.derivative(x + h) - tw.derivative(x - h)) / (2 * h);
    EXPECT_NEAR(fd, tw.second_derivative(x), 1e-5) << x;
  }
}

TEST(Kernels, FromName) {
  EXPECT_EQ(Kernel::from_name("triweight"), Kernel::triweight());
  EXPECT_EQ(Kernel::from_name("epanechnikov").name(), "epanechnikov");
  EXPECT_THROW(Kernel::from_name("gaussian"), InvalidArgument);
}
