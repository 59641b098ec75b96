#include <cmath>

#include <gtest/gtest.h>

#include "muntz/diff_matrices.hpp"
#include "muntz/jacobi_muntz.hpp"

using namespace muntz;

namespace {

MuntzBasisParams left_params(double mu) { return {{-0.5, 2.0}, 0.5, 0.0, mu, 10.0}; }
MuntzBasisParams right_params(double mu) { return {{0.5, -0.5}, 0.5, 0.5, mu, 10.0}; }

Vector sample(const MuntzNodeSet& ns, const std::function<double(double)>& f) {
  Vector v(ns.size());
  for (std::size_t k = 0; k < ns.size(); ++k) v(k) = f(ns.node(k));
  return v;
}

double max_abs(const Vector& v) { return v.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(VInverse, ClosedFormInvertsVandermonde) {
  for (Side side : {Side::Left, Side::Right}) {
    for (int n : {0, 5, 40, 100}) {
      const MuntzNodeSet ns(side == Side::Left ? left_params(0.5) : right_params(0.5), n);
      const DenseMatrix prod = v_inverse_closed(side, ns) * jmf_vandermonde(side, ns);
      EXPECT_LT((prod - DenseMatrix::Identity(n + 1, n + 1)).cwiseAbs().maxCoeff(), 1e-10) << "n=" << n;
    }
  }
}

TEST(VInverse, VandermondeEntriesAreJmfValues) {
  const MuntzBasisParams p = left_params(0.25);
  const MuntzNodeSet ns(p, 7);
  const DenseMatrix v = jmf_vandermonde(Side::Left, ns);
  for (std::size_t k = 0; k < ns.size(); ++k) {
    for (int i = 0; i <= 7; ++i) {
      const double want = eval_jmf({JmfKind::First, i, p}, ns.node(k));
      EXPECT_NEAR(v(k, i), want, 1e-12 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST(StableMatrix, ReproducesClosedFormOnJmf) {
  for (double mu : {0.25, 0.5, 0.75}) {
    const MuntzBasisParams pl = left_params(mu);
    const MuntzNodeSet nl(pl, 45);
    const JmfSpec sl{JmfKind::First, 10, pl};
    const Vector el = ek_dm_stable(Side::Left, nl) * sample(nl, [&](double x) { return eval_jmf(sl, x); }) -
                      sample(nl, [&](double x) { return ek_deriv_jmf_closed(sl, x); });
    EXPECT_LT(max_abs(el), 1e-9) << "left mu=" << mu;

    const MuntzBasisParams pr = right_params(mu);
    const MuntzNodeSet nr(pr, 45);
    const JmfSpec sr{JmfKind::Second, 5, pr};
    const Vector er = ek_dm_stable(Side::Right, nr) * sample(nr, [&](double x) { return eval_jmf(sr, x); }) -
                      sample(nr, [&](double x) { return ek_deriv_jmf_closed(sr, x); });
    EXPECT_LT(max_abs(er), 1e-9) << "right mu=" << mu;
  }
}

TEST(StableMatrix, OtherLeftOrderOnTrialSpaceMonomials) {
  // x^{sigma q} with q = beta - eta - mu + k lies in the trial space; its
  // order-nu derivative is Gamma(q+eta+nu+1)/Gamma(q+eta+1) x^{sigma q}.
  const MuntzBasisParams p{{-0.5, 3.0}, 0.5, -2.0, 1.5, 10.0};
  const int n = 20;
  const MuntzNodeSet ns(p, n);
  for (double nu : {0.3, 1.0, 1.5, 1.9}) {
    const DenseMatrix d = ek_dm_stable(Side::Left, ns, nu);
    for (int k : {0, 3, 12}) {
      const double q = p.beta() - p.eta - p.mu + k;
      auto f = [&](double x) { return std::pow(x / p.b, p.sigma * q); };
      const double g = gamma_ratio(q + p.eta + nu + 1.0, q + p.eta + 1.0);
      const Vector err = d * sample(ns, f) - g * sample(ns, f);
      EXPECT_LT(max_abs(err), 1e-9 * std::max(1.0, g)) << "nu=" << nu << " k=" << k;
    }
  }
}

TEST(StableMatrix, DualPathMatchesNumericalInverse) {
  for (Side side : {Side::Left, Side::Right}) {
    const MuntzNodeSet ns(side == Side::Left ? left_params(0.75) : right_params(0.75), 30);
    const DenseMatrix u = ek_derivative_values(side, ns, 0.75);
    const DenseMatrix lu_path = u * jmf_vandermonde(side, ns).fullPivLu().inverse();
    const DenseMatrix closed = ek_dm_stable(side, ns);
    EXPECT_LT((lu_path - closed).cwiseAbs().maxCoeff(), 1e-9 * closed.cwiseAbs().maxCoeff());
  }
}

TEST(StableMatrix, ShiftConditions) {
  const MuntzNodeSet nl(left_params(0.5), 5);
  EXPECT_THROW(ek_dm_stable(Side::Right, MuntzNodeSet({{-0.5, 1.0}, 1.0, 0.0, 0.0, 1.0}, 4), 0.6), PreconditionError);
  EXPECT_THROW(ek_dm_stable(Side::Left, MuntzNodeSet({{0.0, -0.5}, 1.0, 0.0, 0.6, 1.0}, 4)), PreconditionError);
  EXPECT_THROW(ek_dm_stable(Side::Left, nl, 0.0), PreconditionError);
}

TEST(DirectMatrix, AgreesWithStableAtModerateN) {
  for (double mu : {0.25, 0.5, 0.75}) {
    const MuntzNodeSet nl(left_params(mu), 20);
    const DenseMatrix sl = ek_dm_stable(Side::Left, nl);
    EXPECT_LT((ek_dm_direct(Side::Left, nl, mu) - sl).cwiseAbs().maxCoeff(), 1e-9 * sl.cwiseAbs().maxCoeff());
    const MuntzNodeSet nr(right_params(mu), 20);
    const DenseMatrix sr = ek_dm_stable(Side::Right, nr);
    EXPECT_LT((ek_dm_direct(Side::Right, nr, mu) - sr).cwiseAbs().maxCoeff(), 1e-9 * sr.cwiseAbs().maxCoeff());
  }
}

TEST(DirectMatrix, OverflowGuardNamesIndex) {
  EXPECT_NO_THROW(ek_dm_direct(Side::Left, MuntzNodeSet(left_params(0.5), 96), 0.5));
  try {
    ek_dm_direct(Side::Left, MuntzNodeSet(left_params(0.5), 97), 0.5);
    FAIL() << "expected overflow";
  } catch (const OverflowError& e) {
    EXPECT_GE(e.index(), 90);
    EXPECT_LE(e.index(), 97);
  }
}

TEST(DirectMatrix, LeftOrderMustMatchBasis) {
  EXPECT_THROW(ek_dm_direct(Side::Left, MuntzNodeSet(left_params(0.5), 5), 0.25), PreconditionError);
}

TEST(FirstOrder, PowerBasisDerivatives) {
  const MuntzBasisParams p{{0.5, 1.0}, 0.5, 1.0, 0.0, 1.0};
  const MuntzNodeSet ns(p, 16);
  const DenseMatrix d = first_order_dm(BasisFamily::PowerBasis, ns);
  for (int i : {0, 4, 16}) {
    auto f = [&](double x) {
      return std::pow(x, p.sigma * p.beta()) * jacobi_value(i, p.alpha(), p.beta(), 2 * std::pow(x, p.sigma) - 1);
    };
    const Vector err = d * sample(ns, f) - sample(ns, [&](double x) { return d_dx_special(SpecialKind::PowerJacobi, i, p, x); });
    EXPECT_LT(max_abs(err), 1e-9 * std::max(1.0, max_abs(d * sample(ns, f)))) << "i=" << i;
  }
}

TEST(FirstOrder, CutoffBasisDerivatives) {
  for (double sigma : {0.5, 1.0}) {
    const MuntzBasisParams p{{0.5, 1.0}, sigma, 1.0, 0.0, 1.0};
    const MuntzNodeSet ns(p, 16);
    const DenseMatrix d = first_order_dm(BasisFamily::CutoffBasis, ns);
    for (int i : {0, 5, 16}) {
      auto g = [&](double x) {
        return std::pow(1.0 - std::pow(x, sigma), p.alpha()) * jacobi_value(i, p.alpha(), p.beta(), 2 * std::pow(x, sigma) - 1);
      };
      auto f = [&](double x) { return std::pow(x, sigma * p.eta) * g(x); };
      auto df = [&](double x) {
        return sigma * p.eta * std::pow(x, sigma * p.eta - 1) * g(x) +
               std::pow(x, sigma * p.eta) * d_dx_special(SpecialKind::CutoffJacobi, i, p, x);
      };
      const Vector want = sample(ns, df);
      EXPECT_LT(max_abs(d * sample(ns, f) - want), 1e-9 * std::max(1.0, max_abs(want))) << "sigma=" << sigma << " i=" << i;
    }
  }
}

TEST(DmPower, FoldsProducts) {
  const MuntzNodeSet ns({{0.5, 1.0}, 0.5, 1.0, 0.0, 1.0}, 8);
  const DenseMatrix d = first_order_dm(BasisFamily::CutoffBasis, ns);
  EXPECT_EQ((dm_power(d, 1) - d).cwiseAbs().maxCoeff(), 0.0);
  const DenseMatrix d3 = d * d * d;
  EXPECT_LT((dm_power(d, 3) - d3).cwiseAbs().maxCoeff(), 1e-12 * d3.cwiseAbs().maxCoeff());
  EXPECT_THROW(dm_power(d, 0), PreconditionError);
}

TEST(ConditionNumber, KnownValues) {
  DenseMatrix a = DenseMatrix::Identity(3, 3);
  EXPECT_NEAR(condition_number(a).value, 1.0, 1e-14);
  a(1, 1) = 10.0;
  EXPECT_NEAR(condition_number(a).value, 10.0, 1e-13);
  EXPECT_NEAR(condition_number(a, CondNorm::One).value, 10.0, 1e-13);
  DenseMatrix s = DenseMatrix::Ones(3, 3);
  EXPECT_TRUE(condition_number(s).singular);
  EXPECT_TRUE(condition_number(s, CondNorm::One).singular);
}

TEST(ConditionNumber, LargeMatrixEstimateIsSameOrder) {
  const MuntzNodeSet ns(left_params(0.5), 210);
  const DenseMatrix d = ek_dm_stable(Side::Left, ns);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(d);
  const double exact = svd.singularValues()(0) / svd.singularValues()(svd.singularValues().size() - 1);
  const double est = condition_number(d).value;
  EXPECT_GT(est, exact / 20);
  EXPECT_LT(est, exact * 20);
}

TEST(ConditionNumber, TableOneRatiosAtNFortyFive) {
  const double table[3] = {0.9453, 1.1183, 1.1487};
  for (int k = 0; k < 3; ++k) {
    const double mu = 0.25 * (k + 1);
    const MuntzNodeSet ns(left_params(mu), 45);
    const double r = condition_number(ek_dm_stable(Side::Left, ns), CondNorm::One).value / (2 * std::pow(45.0, 2 * mu));
    EXPECT_NEAR(r, table[k], 0.05 * table[k]) << "mu=" << mu;
  }
}
