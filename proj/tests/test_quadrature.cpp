#include <cmath>
#include <limits>
#include <random>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <gtest/gtest.h>

#include "muntz/quadrature.hpp"
#include "oracles.hpp"

using namespace muntz;

namespace {

MuntzBasisParams reference_params() { return {{-0.5, 2.0}, 0.5, 0.0, 0.5, 10.0}; }

// The three rules integrate the same Beta-type moment once the matching
// exactness-class function is plugged in.
double class_function(RuleKind kind, const MuntzBasisParams& p, int k, double x) {
  const double s = p.sigma;
  switch (kind) {
    case RuleKind::Base:
      return std::pow(x, k * s);
    case RuleKind::Gjmqr1:
      return std::pow(x, 2 * s * (p.beta() - p.mu - p.eta) + k * s);
    case RuleKind::Gjmqr2:
      return std::pow(std::pow(p.b, s) - std::pow(x, s), 2 * p.alpha()) * std::pow(x, 2 * s * p.eta + k * s);
  }
  return 0.0;
}

}  // namespace

TEST(MappedRule, AffineLegendre) {
  const QuadRule r = mapped_rule(1, {{0.0, 0.0}, 1.0, 0.0, 0.0, 2.0});
  EXPECT_NEAR(r.nodes[0], 1.0 - 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(r.nodes[1], 1.0 + 1.0 / std::sqrt(3.0), 1e-15);
}

TEST(MappedRule, TotalMass) {
  const MuntzBasisParams p = reference_params();
  const QuadRule r = mapped_rule(5, p);
  double mass = 0.0;
  for (double w : r.weights) mass += w;
  const double want = oracle::muntz_moment(0, p.alpha(), p.beta(), p.sigma, p.b);
  EXPECT_NEAR(mass, want, 1e-13 * want);
}

TEST(MappedRule, WeightsAreScaledGaussJacobiWeights) {
  const MuntzBasisParams p = reference_params();
  const QuadRule r = mapped_rule(7, p);
  const GaussRule g = gauss_jacobi(7, p.jac);
  const double scale = 1.0 / p.sigma * std::pow(std::pow(p.b, p.sigma) / 2.0, p.alpha() + p.beta() + 1.0);
  for (std::size_t j = 0; j < r.size(); ++j) {
    EXPECT_NEAR(r.weights[j], scale * g.weights[j], 1e-14 * r.weights[j]);
    EXPECT_GT(r.nodes[j], 0.0);
    EXPECT_LT(r.nodes[j], p.b);
  }
}

TEST(MappedRule, DegenerateSinglePoint) {
  const MuntzBasisParams p = reference_params();
  const QuadRule r = mapped_rule(0, p);
  ASSERT_EQ(r.size(), 1u);
  const double want = oracle::muntz_moment(0, p.alpha(), p.beta(), p.sigma, p.b);
  EXPECT_NEAR(r.weights[0], want, 1e-13 * want);
}

TEST(GjmqrWeights, IdentityCases) {
  MuntzBasisParams p = reference_params();
  p.eta = 1.5;
  p.mu = 0.5;  // eta + mu = beta
  const QuadRule base = mapped_rule(6, p);
  const QuadRule r1 = gjmqr_weights(base, 1);
  for (std::size_t j = 0; j < base.size(); ++j) EXPECT_NEAR(r1.weights[j], base.weights[j], 1e-15 * base.weights[j]);

  MuntzBasisParams q{{0.0, 1.0}, 0.7, 0.0, 0.3, 3.0};
  const QuadRule qb = mapped_rule(6, q);
  const QuadRule r2 = gjmqr_weights(qb, 2);
  for (std::size_t j = 0; j < qb.size(); ++j) EXPECT_EQ(r2.weights[j], qb.weights[j]);
}

TEST(GjmqrWeights, FirstVariantIntegratesLeadingPower) {
  MuntzBasisParams p = reference_params();
  const QuadRule r = gjmqr_weights(mapped_rule(8, p), 1);
  const double got = integrate([&](double x) { return std::pow(x, 2 * p.sigma * (p.beta() - p.mu - p.eta)); }, r);
  const double want = oracle::muntz_moment(0, p.alpha(), p.beta(), p.sigma, p.b);
  EXPECT_NEAR(got, want, 1e-12 * want);
}

TEST(GjmqrWeights, RejectsNonBaseRuleAndBadVariant) {
  const QuadRule base = mapped_rule(3, reference_params());
  EXPECT_THROW(gjmqr_weights(gjmqr_weights(base, 1), 2), PreconditionError);
  EXPECT_THROW(gjmqr_weights(base, 3), PreconditionError);
}

TEST(Integrate, ZeroAndMoment) {
  const QuadRule r = mapped_rule(1, {{0.0, 0.0}, 1.0, 0.0, 0.0, 1.0});
  EXPECT_EQ(integrate([](double) { return 0.0; }, r), 0.0);
  EXPECT_NEAR(integrate([](double x) { return x; }, r), 0.5, 1e-15);
  EXPECT_NEAR(integrate([](double x) { return x * x * x; }, r), 0.25, 1e-15);
}

TEST(Integrate, NonFiniteNamesNode) {
  const QuadRule r = mapped_rule(3, reference_params());
  try {
    integrate([&](double x) { return x == r.nodes[2] ? std::numeric_limits<double>::infinity() : 1.0; }, r);
    FAIL() << "expected an error";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("node 2"), std::string::npos);
  }
}

TEST(Exactness, AllRulesAllClassesUpToEight) {
  const std::vector<MuntzBasisParams> cases{
      reference_params(), {{0.5, -0.5}, 0.5, 0.5, 0.25, 10.0}, {{0.3, 1.0}, 1.0, -0.2, 0.7, 2.0}};
  for (const auto& p : cases) {
    for (int n = 0; n <= 8; ++n) {
      const QuadRule base = mapped_rule(n, p);
      for (const QuadRule& r : {base, gjmqr_weights(base, 1), gjmqr_weights(base, 2)}) {
        for (int k = 0; k <= 2 * n + 1; ++k) {
          const double got = integrate([&](double x) { return class_function(r.kind, p, k, x); }, r);
          const double want = oracle::muntz_moment(k, p.alpha(), p.beta(), p.sigma, p.b);
          EXPECT_NEAR(got, want, 1e-10 * std::abs(want))
              << "n=" << n << " k=" << k << " kind=" << static_cast<int>(r.kind);
        }
      }
    }
  }
}

TEST(Exactness, DiscreteInnerProductMatchesAdaptiveIntegral) {
  const MuntzBasisParams p = reference_params();
  const int n = 6;
  const QuadRule r = mapped_rule(n, p);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  boost::math::quadrature::tanh_sinh<double> ts;
  const double bs = std::pow(p.b, p.sigma);
  for (int trial = 0; trial < 10; ++trial) {
    const int dp = trial % (n + 1);
    const int dq = 2 * n + 1 - dp;
    std::vector<double> a(dp + 1), c(dq + 1);
    for (double& v : a) v = coef(rng);
    for (double& v : c) v = coef(rng);
    auto poly = [&](const std::vector<double>& cf, double x) {
      const double u = std::pow(x, p.sigma) / bs;
      double s = 0.0;
      for (std::size_t i = cf.size(); i-- > 0;) s = s * u + cf[i];
      return s;
    };
    auto pq = [&](double x) { return poly(a, x) * poly(c, x); };
    const double discrete = integrate(pq, r);
    // u = (x/b)^sigma turns the weight into b^{sigma(alpha+beta+1)}/sigma u^beta (1-u)^alpha.
    const double cont = std::pow(bs, p.alpha() + p.beta() + 1.0) / p.sigma *
                        ts.integrate([&](double u, double uc) {
                          // uc is the signed distance to the nearer endpoint.
                          const double w = u > 0.5 ? uc : 1.0 - u;
                          return std::pow(u, p.beta()) * std::pow(w, p.alpha()) *
                                 pq(p.b * std::pow(u, 1.0 / p.sigma));
                        }, 0.0, 1.0);
    EXPECT_NEAR(discrete, cont, 1e-9 * std::max(1.0, std::abs(cont))) << "trial " << trial;
  }
}
