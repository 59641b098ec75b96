#pragma once

/// \file
/// Classical Jacobi polynomials on [-1,1]: three-term recurrence, Gauss-Jacobi
/// rules, orthogonality constants and log-gamma helpers.

#include <algorithm>
#include <cmath>
#include <span>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>

#include "muntz/error.hpp"

namespace muntz {

/// Exponents of the Jacobi weight (1-t)^alpha (1+t)^beta.
struct JacobiParams {
  double alpha = 0.0;
  double beta = 0.0;

  void validate() const {
    detail::require(alpha > -1.0 && beta > -1.0,
                    "Jacobi parameters must satisfy alpha > -1 and beta > -1");
  }
};

/// Nodes and weights of an (n+1)-point Gauss-Jacobi rule.
struct GaussRule {
  JacobiParams params;
  int degree = 0;  ///< n; the rule has n+1 nodes
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

namespace detail {

inline bool is_nonpositive_integer(double x) {
  return x <= 0.0 && std::abs(x - std::round(x)) < 1e-14;
}

inline double lgamma_reentrant(double x) {
#if defined(__GLIBC__)
  int ignored = 0;
  return ::lgamma_r(x, &ignored);
#else
  return std::lgamma(x);
#endif
}

}  // namespace detail

/// log|Gamma(x)|; the sign of Gamma(x) is written to `sign` when non-null.
inline double log_abs_gamma(double x, int* sign = nullptr) {
  if (detail::is_nonpositive_integer(x)) {
    std::ostringstream os;
    os << "Gamma has a pole at " << x;
    throw PreconditionError(os.str());
  }
  if (sign) {
    *sign = (x > 0.0 || static_cast<long long>(std::floor(x)) % 2 == 0) ? 1 : -1;
  }
  return detail::lgamma_reentrant(x);
}

/// Gamma(a) / Gamma(b) through a log-gamma difference.
inline double gamma_ratio(double a, double b) {
  int sa = 1;
  int sb = 1;
  const double la = log_abs_gamma(a, &sa);
  const double lb = log_abs_gamma(b, &sb);
  return sa * sb * std::exp(la - lb);
}

/// P_n^{(a,b)}(t) by the three-term recurrence. Any real a, b with a+b > -2 is
/// accepted (shifted families such as (alpha-1, beta+1) are evaluated here too);
/// t is not range-checked.
inline double jacobi_value(int n, double a, double b, double t) {
  if (n == 0) return 1.0;
  double p_prev = 1.0;
  double p = 0.5 * (a - b + (a + b + 2.0) * t);
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + a + b;
    const double c1 = 2.0 * (k + 1) * (k + a + b + 1.0) * s;
    if (c1 == 0.0) {
      throw PreconditionError("Jacobi recurrence degenerates: alpha + beta too small");
    }
    const double c2 = (s + 1.0) * (a * a - b * b);
    const double c3 = s * (s + 1.0) * (s + 2.0);
    const double c4 = 2.0 * (k + a) * (k + b) * (s + 2.0);
    const double next = ((c2 + c3 * t) * p - c4 * p_prev) / c1;
    p_prev = p;
    p = next;
  }
  return p;
}

/// Fills out[k] = P_k^{(a,b)}(t) for k = 0..out.size()-1.
inline void jacobi_values(double a, double b, double t, std::span<double> out) {
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() == 1) return;
  out[1] = 0.5 * (a - b + (a + b + 2.0) * t);
  for (std::size_t kk = 1; kk + 1 < out.size(); ++kk) {
    const double k = static_cast<double>(kk);
    const double s = 2.0 * k + a + b;
    const double c1 = 2.0 * (k + 1) * (k + a + b + 1.0) * s;
    if (c1 == 0.0) {
      throw PreconditionError("Jacobi recurrence degenerates: alpha + beta too small");
    }
    const double c2 = (s + 1.0) * (a * a - b * b);
    const double c3 = s * (s + 1.0) * (s + 2.0);
    const double c4 = 2.0 * (k + a) * (k + b) * (s + 2.0);
    out[kk + 1] = ((c2 + c3 * t) * out[kk] - c4 * out[kk - 1]) / c1;
  }
}

/// d/dt P_n^{(a,b)}(t) = (n+a+b+1)/2 P_{n-1}^{(a+1,b+1)}(t).
inline double jacobi_derivative(int n, double a, double b, double t) {
  if (n == 0) return 0.0;
  return 0.5 * (n + a + b + 1.0) * jacobi_value(n - 1, a + 1.0, b + 1.0, t);
}

/// P_n^{(alpha,beta)}(t) for t in [-1,1].
inline double eval_jacobi(int n, const JacobiParams& p, double t) {
  detail::require(n >= 0, "Jacobi degree must be non-negative");
  p.validate();
  if (!(std::abs(t) <= 1.0 + 1e-12)) {
    std::ostringstream os;
    os << "Jacobi argument " << t << " outside [-1,1]";
    throw PreconditionError(os.str());
  }
  return jacobi_value(n, p.alpha, p.beta, t);
}

/// Orthogonality constant gamma_n^{(alpha,beta)} = ||P_n||^2 in log-gamma form.
inline double gamma_n(int n, const JacobiParams& p) {
  detail::require(n >= 0, "gamma_n needs n >= 0");
  p.validate();
  const double a = p.alpha;
  const double b = p.beta;
  double lg = (a + b + 1.0) * std::log(2.0) + log_abs_gamma(n + a + 1.0) +
              log_abs_gamma(n + b + 1.0);
  if (n == 0) {
    // (a+b+1) Gamma(a+b+1) folded into Gamma(a+b+2); a+b+1 may vanish.
    lg -= log_abs_gamma(a + b + 2.0);
  } else {
    lg -= std::log(2.0 * n + a + b + 1.0) + log_abs_gamma(n + 1.0) +
          log_abs_gamma(n + a + b + 1.0);
  }
  return std::exp(lg);
}

/// (n+1)-point Gauss-Jacobi rule on [-1,1], exact for degree <= 2n+1.
///
/// Nodes come from the symmetric tridiagonal Jacobi matrix (Golub-Welsch) and
/// receive one Newton correction against P_{n+1}. Weights use the closed form
/// G / ((1 - t^2) P'_{n+1}(t)^2), which keeps full relative accuracy for large n.
inline GaussRule gauss_jacobi(int n, const JacobiParams& p) {
  detail::require(n >= 0, "gauss_jacobi needs n >= 0");
  p.validate();
  const double a = p.alpha;
  const double b = p.beta;
  const int m = n + 1;

  Eigen::VectorXd diag(m);
  Eigen::VectorXd sub(std::max(m - 1, 0));
  diag(0) = (b - a) / (a + b + 2.0);
  for (int k = 1; k < m; ++k) {
    const double s = 2.0 * k + a + b;
    diag(k) = (b * b - a * a) / (s * (s + 2.0));
  }
  for (int k = 1; k < m; ++k) {
    const double s = 2.0 * k + a + b;
    double v = 0.0;
    if (k == 1) {
      v = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b) * (2.0 + a + b) * (3.0 + a + b));
    } else {
      v = 4.0 * k * (k + a) * (k + b) * (k + a + b) / (s * s * (s + 1.0) * (s - 1.0));
    }
    sub(k - 1) = std::sqrt(v);
  }

  GaussRule rule;
  rule.params = p;
  rule.degree = n;
  rule.nodes.resize(m);
  rule.weights.resize(m);

  if (m == 1) {
    rule.nodes[0] = diag(0);
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      throw NumericError("Golub-Welsch eigen-solve failed to converge");
    }
    for (int j = 0; j < m; ++j) rule.nodes[j] = solver.eigenvalues()(j);
  }

  const double log_g = (a + b + 1.0) * std::log(2.0) + log_abs_gamma(m + a + 1.0) +
                       log_abs_gamma(m + b + 1.0) - log_abs_gamma(m + 1.0) -
                       log_abs_gamma(m + a + b + 1.0);
  const double g = std::exp(log_g);
  for (int j = 0; j < m; ++j) {
    double t = rule.nodes[j];
    double dp = jacobi_derivative(m, a, b, t);
    if (dp != 0.0) {
      const double step = jacobi_value(m, a, b, t) / dp;
      if (std::abs(step) < 1e-6) {
        t -= step;
        dp = jacobi_derivative(m, a, b, t);
      }
    }
    const double w = g / ((1.0 - t) * (1.0 + t) * dp * dp);
    if (!(t > -1.0 && t < 1.0) || !(w > 0.0) || !std::isfinite(w)) {
      std::ostringstream os;
      os << "Gauss-Jacobi rule failed at node index " << j << " (t=" << t << ", w=" << w
         << ")";
      throw NumericError(os.str());
    }
    rule.nodes[j] = t;
    rule.weights[j] = w;
  }
  for (int j = 1; j < m; ++j) {
    if (!(rule.nodes[j] > rule.nodes[j - 1])) {
      std::ostringstream os;
      os << "Gauss-Jacobi nodes not strictly increasing at node index " << j;
      throw NumericError(os.str());
    }
  }
  return rule;
}

}  // namespace muntz
