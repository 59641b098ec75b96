#include <cmath>

#include <gtest/gtest.h>

#include "muntz/ek_oracle.hpp"

using namespace muntz;

// Left EK integral of x^{sigma p}: Gamma(p+eta+1)/Gamma(p+eta+mu+1) x^{sigma p}.
TEST(EkIntegral, LeftPowerFunction) {
  for (double mu : {0.3, 1.0, 1.7}) {
    for (double sigma : {0.5, 1.0, 2.0}) {
      const EkOperatorSpec op{Side::Left, mu, sigma, 0.4, 0.0, 5.0};
      const double pw = 1.5;
      for (double x : {0.5, 2.0, 4.9}) {
        const double got = ek_integral(op, [&](double t) { return std::pow(t, sigma * pw); }, x);
        const double want = gamma_ratio(pw + 0.4 + 1.0, pw + 0.4 + mu + 1.0) * std::pow(x, sigma * pw);
        EXPECT_NEAR(got, want, 1e-10 * std::abs(want)) << mu << " " << sigma << " " << x;
      }
    }
  }
}

// mu = 1, f = 1: X^eta int_X^B tau^{-(eta+1)} dtau = (1 - (X/B)^eta) / eta.
TEST(EkIntegral, RightUnitOrderConstant) {
  const double eta = 0.5;
  const double sigma = 0.5;
  const EkOperatorSpec op{Side::Right, 1.0, sigma, eta, 0.0, 4.0};
  for (double x : {0.1, 1.0, 3.0}) {
    const double ratio = std::pow(x, sigma) / std::pow(4.0, sigma);
    EXPECT_NEAR(ek_integral(op, [](double) { return 1.0; }, x), (1.0 - std::pow(ratio, eta)) / eta, 1e-11);
  }
}

// Right integral of order mu of a constant in tau: X^eta/Gamma(mu) int_X^B (tau-X)^{mu-1} tau^{-(eta+mu)}
// with eta = -mu reduces to (B-X)^mu / Gamma(mu+1) X^{-mu}.
TEST(EkIntegral, RightReducesToRiemannLiouville) {
  const double mu = 0.6;
  const EkOperatorSpec op{Side::Right, mu, 1.0, -mu, 0.0, 3.0};
  for (double x : {0.5, 1.5, 2.5}) {
    const double want = std::pow(3.0 - x, mu) / std::tgamma(mu + 1.0) * std::pow(x, -mu);
    EXPECT_NEAR(ek_integral(op, [](double) { return 1.0; }, x), want, 1e-11 * want);
  }
}

// Left EK derivative of x^{sigma p}: Gamma(p+eta+mu+1)/Gamma(p+eta+1) x^{sigma p}.
TEST(EkDerivative, LeftPowerFunction) {
  for (double mu : {0.25, 0.5, 1.0, 1.5, 2.0}) {
    const double sigma = 0.5;
    const double eta = -0.3;
    const double pw = 2.5;
    const EkOperatorSpec op{Side::Left, mu, sigma, eta, 0.0, 10.0};
    for (double x : {1.0, 4.0, 9.0}) {
      const double got = ek_derivative(op, [&](double t) { return std::pow(t, sigma * pw); }, x);
      const double want = gamma_ratio(pw + eta + mu + 1.0, pw + eta + 1.0) * std::pow(x, sigma * pw);
      EXPECT_NEAR(got, want, 1e-6 * std::abs(want)) << mu << " " << x;
    }
  }
}

// At mu = 1 the left operator is X^{-eta} d/dX X^{eta+1} f, i.e. (eta+1) f + x f'/sigma.
TEST(EkDerivative, UnitOrderIsEulerOperator) {
  const double sigma = 0.5;
  const double eta = -1.0;
  const EkOperatorSpec op{Side::Left, 1.0, sigma, eta, 0.0, 10.0};
  auto f = [](double x) { return std::sqrt(x) * std::sin(std::sqrt(x)); };
  auto df = [](double x) { const double r = std::sqrt(x); return (std::sin(r) + r * std::cos(r)) / (2 * r); };
  for (double x : {0.5, 3.0, 7.0}) {
    EXPECT_NEAR(ek_derivative(op, f, x), (eta + 1) * f(x) + x * df(x) / sigma, 1e-7);
  }
}

TEST(EkOracle, Preconditions) {
  auto one = [](double) { return 1.0; };
  EXPECT_THROW(ek_integral({Side::Left, 0.0, 1.0, 0.0, 0.0, 1.0}, one, 0.5), PreconditionError);
  EXPECT_THROW(ek_integral({Side::Left, 0.5, -1.0, 0.0, 0.0, 1.0}, one, 0.5), PreconditionError);
  EXPECT_THROW(ek_integral({Side::Left, 0.5, 1.0, 0.0, 0.0, 1.0}, one, 1.5), PreconditionError);
  EXPECT_THROW(ek_derivative({Side::Left, 2.5, 1.0, 0.0, 0.0, 1.0}, one, 0.5), PreconditionError);
  EXPECT_THROW(ek_derivative({Side::Left, 0.5, 1.0, 0.0, 0.0, 1.0}, one, 1.0), PreconditionError);
  EXPECT_THROW(ek_derivative({Side::Right, 0.5, 1.0, 0.0, 0.0, 1.0}, one, 1.0 - 1e-13), NumericError);
}
