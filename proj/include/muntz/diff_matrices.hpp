#pragma once

/// \file
/// Differentiation matrices on the mapped Gauss-Jacobi nodes: left/right EK
/// fractional matrices (stable U V^{-1} and direct constructions), classical
/// first-order matrices, powers, and condition numbers.

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "muntz/error.hpp"
#include "muntz/jacobi.hpp"
#include "muntz/lagrange_muntz.hpp"
#include "muntz/quadrature.hpp"
#include "muntz/side.hpp"

namespace muntz {

using DenseMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

enum class BasisFamily { PowerBasis, CutoffBasis };

namespace detail {

/// P(k, i) = P_i^{(a,c)}(t_k) for every node k and degree i <= n.
inline DenseMatrix jacobi_table(const std::vector<double>& t, double a, double c, int n) {
  DenseMatrix p(t.size(), n + 1);
  std::vector<double> row(n + 1);
  for (std::size_t k = 0; k < t.size(); ++k) {
    jacobi_values(a, c, t[k], row);
    for (int i = 0; i <= n; ++i) p(k, i) = row[i];
  }
  return p;
}

/// log of the prefactor omega(x_k) that turns P_i into the basis function.
inline Vector log_left_prefactor(const MuntzNodeSet& ns) {
  const MuntzBasisParams& p = ns.params();
  Vector v(ns.size());
  for (std::size_t k = 0; k < ns.size(); ++k) {
    v(k) = p.sigma * (p.beta() - p.eta - p.mu) * std::log(ns.node(k));
  }
  return v;
}

inline Vector log_right_prefactor(const MuntzNodeSet& ns, double eta, double alpha) {
  const MuntzBasisParams& p = ns.params();
  Vector v(ns.size());
  for (std::size_t k = 0; k < ns.size(); ++k) {
    v(k) = p.sigma * eta * std::log(ns.node(k)) + alpha * std::log(ns.node_cut(k));
  }
  return v;
}

/// Closed-form inverse of diag(exp(log_omega)) P with P(k,i) = P_i^{(alpha,beta)}(t_k).
inline DenseMatrix weighted_inverse(const MuntzNodeSet& ns, const Vector& log_omega) {
  const MuntzBasisParams& p = ns.params();
  const int n = ns.degree();
  const std::size_t m = ns.size();
  const DenseMatrix pt = jacobi_table(ns.rule().ref_nodes, p.alpha(), p.beta(), n);
  DenseMatrix inv(m, m);
  for (int k = 0; k <= n; ++k) {
    const double gs = gamma_star(k, p);
    for (std::size_t i = 0; i < m; ++i) {
      inv(k, i) = std::exp(-log_omega(i)) * ns.rule().weights[i] / gs * pt(i, k);
    }
  }
  return inv;
}

inline void require_left_shift(const MuntzBasisParams& p, double mu) {
  if (!(p.beta() - mu > -1.0)) {
    std::ostringstream os;
    os << "left EK matrix needs beta - mu > -1 (beta=" << p.beta() << ", mu=" << mu << ")";
    throw PreconditionError(os.str());
  }
}

inline void require_right_shift(const MuntzBasisParams& p, double mu) {
  if (!(p.alpha() - mu > -1.0)) {
    std::ostringstream os;
    os << "right EK matrix needs alpha - mu > -1 (alpha=" << p.alpha() << ", mu=" << mu << ")";
    throw PreconditionError(os.str());
  }
}

/// C(j, i): coefficients of P_i^{(a,b)} in the basis P_j^{(a,c)}, j, i <= n.
inline DenseMatrix jacobi_connection(double a, double b, double c, int n) {
  const GaussRule g = gauss_jacobi(n, JacobiParams{a, c});
  const DenseMatrix from = jacobi_table(g.nodes, a, b, n);
  const DenseMatrix to = jacobi_table(g.nodes, a, c, n);
  DenseMatrix conn(n + 1, n + 1);
  for (int j = 0; j <= n; ++j) {
    const double gj = gamma_n(j, JacobiParams{a, c});
    for (int i = 0; i <= n; ++i) {
      double s = 0.0;
      for (std::size_t m = 0; m < g.size(); ++m) s += g.weights[m] * from(m, i) * to(m, j);
      conn(j, i) = s / gj;
    }
  }
  return conn;
}

}  // namespace detail

/// Generalized Vandermonde matrix V(k, i) = J_i(x_k): first-kind JMFs for the
/// left side, second-kind for the right side.
inline DenseMatrix jmf_vandermonde(Side side, const MuntzNodeSet& ns) {
  const MuntzBasisParams& p = ns.params();
  const Vector lw = side == Side::Left ? detail::log_left_prefactor(ns)
                                       : detail::log_right_prefactor(ns, p.eta, p.alpha());
  DenseMatrix v = detail::jacobi_table(ns.rule().ref_nodes, p.alpha(), p.beta(), ns.degree());
  for (std::size_t k = 0; k < ns.size(); ++k) v.row(k) *= std::exp(lw(k));
  return v;
}

/// Inverse of jmf_vandermonde from discrete orthogonality (no factorization).
inline DenseMatrix v_inverse_closed(Side side, const MuntzNodeSet& ns) {
  const MuntzBasisParams& p = ns.params();
  const Vector lw = side == Side::Left ? detail::log_left_prefactor(ns)
                                       : detail::log_right_prefactor(ns, p.eta, p.alpha());
  return detail::weighted_inverse(ns, lw);
}

/// Matrix U(k, i) of exact EK derivatives of order `order` of the basis
/// functions at the nodes. On the left, an order different from the basis mu
/// goes through the connection P^{(alpha,beta)} -> P^{(alpha,beta-mu+order)}.
inline DenseMatrix ek_derivative_values(Side side, const MuntzNodeSet& ns, double order) {
  const MuntzBasisParams& p = ns.params();
  const int n = ns.degree();
  const auto& t = ns.rule().ref_nodes;
  detail::require(order > 0.0, "EK order must be positive");
  if (side == Side::Left) {
    detail::require_left_shift(p, p.mu);
    const double beta2 = p.beta() - p.mu + order;
    const Vector lw = detail::log_left_prefactor(ns);
    DenseMatrix u = detail::jacobi_table(t, p.alpha() + order, p.beta() - p.mu, n);
    for (int j = 0; j <= n; ++j) u.col(j) *= gamma_ratio(j + beta2 + 1.0, j + beta2 - order + 1.0);
    for (std::size_t k = 0; k < ns.size(); ++k) u.row(k) *= std::exp(lw(k));
    if (order != p.mu) u = u * detail::jacobi_connection(p.alpha(), p.beta(), beta2, n);
    return u;
  }
  detail::require_right_shift(p, order);
  const Vector lw = detail::log_right_prefactor(ns, p.eta + order, p.alpha() - order);
  DenseMatrix u = detail::jacobi_table(t, p.alpha() - order, p.beta() + order, n);
  for (int j = 0; j <= n; ++j) {
    u.col(j) *= gamma_ratio(j + p.alpha() + 1.0, j + p.alpha() - order + 1.0);
  }
  for (std::size_t k = 0; k < ns.size(); ++k) u.row(k) *= std::exp(lw(k));
  return u;
}

/// Stable EK differentiation matrix U V^{-1} with the closed-form V^{-1}.
inline DenseMatrix ek_dm_stable(Side side, const MuntzNodeSet& ns, double order) {
  return ek_derivative_values(side, ns, order) * v_inverse_closed(side, ns);
}

inline DenseMatrix ek_dm_stable(Side side, const MuntzNodeSet& ns) {
  return ek_dm_stable(side, ns, ns.params().mu);
}

/// Entry-by-entry construction d(s,i) = omega(x_i)^{-1} sum_j a_j^i g_j J'_j(x_s),
/// with the orthogonality constants and Gamma ratios evaluated from raw Gamma
/// values. Throws OverflowError once a Gamma factor leaves double range, which
/// happens from N = 97 on for alpha = -1/2, beta = 2, sigma = 1/2, b = 10.
inline DenseMatrix ek_dm_direct(Side side, const MuntzNodeSet& ns, double mu) {
  const MuntzBasisParams& p = ns.params();
  const int n = ns.degree();
  const double a = p.alpha();
  const double c = p.beta();
  const auto& t = ns.rule().ref_nodes;
  const std::size_t m = ns.size();
  if (side == Side::Left) {
    detail::require(mu == p.mu, "direct left matrix needs order equal to the basis mu");
    detail::require_left_shift(p, mu);
  } else {
    detail::require_right_shift(p, mu);
  }
  const double scale = std::pow(std::pow(p.b, p.sigma) / 2.0, a + c + 1.0) / p.sigma;
  auto guarded = [](double v, int j, double limit = std::numeric_limits<double>::max()) {
    if (!std::isfinite(v) || std::abs(v) > limit) {
      std::ostringstream os;
      os << "Gamma factor overflow at j=" << j;
      throw OverflowError(os.str(), j);
    }
    return v;
  };
  std::vector<double> gstar(n + 1);
  std::vector<double> ratio(n + 1);
  for (int j = 0; j <= n; ++j) {
    const double num = guarded(std::pow(2.0, a + c + 1.0) *
                                   guarded(std::tgamma(j + a + 1.0), j) *
                                   guarded(std::tgamma(j + c + 1.0), j),
                               j);
    const double den = guarded((2.0 * j + a + c + 1.0) * guarded(std::tgamma(j + 1.0), j) *
                                   guarded(std::tgamma(j + a + c + 1.0), j),
                               j);
    gstar[j] = scale * (j == 0 ? std::pow(2.0, a + c + 1.0) * std::tgamma(a + 1.0) *
                                     std::tgamma(c + 1.0) / std::tgamma(a + c + 2.0)
                               : num / den);
    if (side == Side::Left) {
      ratio[j] = guarded(
          guarded(std::tgamma(j + c + 1.0), j) / guarded(std::tgamma(j + c - mu + 1.0), j), j, 1e300);
    } else {
      ratio[j] = guarded(
          guarded(std::tgamma(j + a + 1.0), j) / guarded(std::tgamma(j + a - mu + 1.0), j), j, 1e300);
    }
  }
  const DenseMatrix pt = detail::jacobi_table(t, a, c, n);
  DenseMatrix shifted;
  Vector lw_out(m);
  Vector lw_in(m);
  if (side == Side::Left) {
    shifted = detail::jacobi_table(t, a + mu, c - mu, n);
    lw_out = detail::log_left_prefactor(ns);
    lw_in = lw_out;
  } else {
    shifted = detail::jacobi_table(t, a - mu, c + mu, n);
    lw_out = detail::log_right_prefactor(ns, p.eta + mu, a - mu);
    lw_in = detail::log_right_prefactor(ns, p.eta, a);
  }
  DenseMatrix d(m, m);
  for (std::size_t s = 0; s < m; ++s) {
    const double out = std::exp(lw_out(s));
    for (std::size_t i = 0; i < m; ++i) {
      double acc = 0.0;
      for (int j = 0; j <= n; ++j) {
        const double aji = ns.rule().weights[i] / gstar[j] * pt(i, j);
        acc += aji * ratio[j] * out * shifted(s, j);
      }
      d(s, i) = std::exp(-lw_in(i)) * acc;
    }
  }
  return d;
}

/// Classical first-derivative matrix for the basis x^{sigma beta} P_i (PowerBasis)
/// or x^{sigma eta} (b^sigma - x^sigma)^alpha P_i (CutoffBasis).
inline DenseMatrix first_order_dm(BasisFamily family, const MuntzNodeSet& ns) {
  const MuntzBasisParams& p = ns.params();
  const int n = ns.degree();
  const double a = p.alpha();
  const double c = p.beta();
  const double s = p.sigma;
  const auto& t = ns.rule().ref_nodes;
  const std::size_t m = ns.size();
  DenseMatrix u(m, m);
  Vector lw(m);
  if (family == BasisFamily::PowerBasis) {
    const DenseMatrix q = detail::jacobi_table(t, a + 1.0, c - 1.0, n);
    for (std::size_t k = 0; k < m; ++k) {
      const double lx = std::log(ns.node(k));
      lw(k) = s * c * lx;
      const double pre = std::exp((s * c - 1.0) * lx);
      for (int i = 0; i <= n; ++i) u(k, i) = s * (i + c) * pre * q(k, i);
    }
  } else {
    const DenseMatrix q0 = detail::jacobi_table(t, a, c, n);
    const DenseMatrix q1 = detail::jacobi_table(t, a - 1.0, c + 1.0, n);
    for (std::size_t k = 0; k < m; ++k) {
      const double lx = std::log(ns.node(k));
      const double lc = std::log(ns.node_cut(k));
      lw(k) = s * p.eta * lx + a * lc;
      const double pre0 = s * p.eta * std::exp((s * p.eta - 1.0) * lx + a * lc);
      const double pre1 = s * std::exp((s * (p.eta + 1.0) - 1.0) * lx + (a - 1.0) * lc);
      for (int i = 0; i <= n; ++i) u(k, i) = pre0 * q0(k, i) - (i + a) * pre1 * q1(k, i);
    }
  }
  return u * detail::weighted_inverse(ns, lw);
}

/// D multiplied by itself n times, folded as D (D (... D)).
inline DenseMatrix dm_power(const DenseMatrix& d, int n) {
  detail::require(n >= 1, "matrix power needs n >= 1");
  detail::require(d.rows() == d.cols(), "matrix power needs a square matrix");
  DenseMatrix r = d;
  for (int k = 1; k < n; ++k) r = (d * r).eval();
  return r;
}

enum class CondNorm { Two, One };

struct ConditionResult {
  double value = 0.0;
  bool singular = false;
};

/// Condition number in the 2-norm (full SVD up to order 200, LU-based 1-norm
/// estimate beyond) or in the 1-norm (explicit LU inverse).
inline ConditionResult condition_number(const DenseMatrix& mtx, CondNorm norm = CondNorm::Two) {
  detail::require(mtx.rows() == mtx.cols(), "condition number needs a square matrix");
  detail::require(mtx.allFinite(), "condition number needs finite entries");
  const double inf = std::numeric_limits<double>::infinity();
  if (mtx.rows() == 0) return {1.0, false};
  const double eps = std::numeric_limits<double>::epsilon();
  if (norm == CondNorm::Two && mtx.rows() <= 200) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(mtx);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(sv.size() - 1);
    if (smin <= smax * eps * mtx.rows()) return {inf, true};
    return {smax / smin, false};
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(mtx);
  if (!lu.isInvertible()) return {inf, true};
  if (norm == CondNorm::Two) {
    const double rc = Eigen::PartialPivLU<Eigen::MatrixXd>(mtx).rcond();
    if (!(rc > eps)) return {inf, true};
    return {1.0 / rc, false};
  }
  const Eigen::MatrixXd inv = lu.inverse();
  const double n1 = mtx.cwiseAbs().colwise().sum().maxCoeff();
  const double n2 = inv.cwiseAbs().colwise().sum().maxCoeff();
  const double c = n1 * n2;
  if (!std::isfinite(c) || c * eps >= 1.0) return {inf, true};
  return {c, false};
}

}  // namespace muntz
