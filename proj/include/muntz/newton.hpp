#pragma once

/// \file
/// Damped Newton iteration for square nonlinear systems.

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>

#include <Eigen/Dense>

#include "muntz/error.hpp"

namespace muntz {

struct NewtonOptions {
  double tol = 1e-11;  ///< on the max-norm of the residual
  int max_iter = 50;
  int max_halvings = 8;
};

struct NewtonResult {
  Eigen::VectorXd x;
  int iterations = 0;
  double residual_norm = 0.0;
};

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using JacobianFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

/// Forward-difference Jacobian with step sqrt(ulp) (1 + |x_j|).
inline Eigen::MatrixXd fd_jacobian(const ResidualFn& f, const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& fx) {
  const double root_eps = std::sqrt(std::numeric_limits<double>::epsilon());
  Eigen::MatrixXd j(fx.size(), x.size());
  Eigen::VectorXd xp = x;
  for (Eigen::Index c = 0; c < x.size(); ++c) {
    const double h = root_eps * (1.0 + std::abs(x(c)));
    xp(c) = x(c) + h;
    j.col(c) = (f(xp) - fx) / (xp(c) - x(c));
    xp(c) = x(c);
  }
  return j;
}

/// Newton's method with step halving whenever a full step does not reduce the
/// residual max-norm. A singular Jacobian gets one Tikhonov-regularized retry.
inline NewtonResult newton_solve(const ResidualFn& residual, const std::optional<JacobianFn>& jac,
                                 const Eigen::VectorXd& x0, const NewtonOptions& opt = {}) {
  NewtonResult res;
  res.x = x0;
  Eigen::VectorXd r = residual(res.x);
  detail::require(r.size() == x0.size(), "residual dimension does not match the unknowns");
  res.residual_norm = r.lpNorm<Eigen::Infinity>();
  while (res.residual_norm > opt.tol) {
    if (!std::isfinite(res.residual_norm)) {
      throw ConvergenceError("Newton residual is not finite", res.residual_norm);
    }
    if (res.iterations >= opt.max_iter) {
      std::ostringstream os;
      os << "Newton did not converge in " << opt.max_iter << " iterations (residual "
         << res.residual_norm << ")";
      throw ConvergenceError(os.str(), res.residual_norm);
    }
    const Eigen::MatrixXd j = jac ? (*jac)(res.x) : fd_jacobian(residual, res.x, r);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(j);
    Eigen::VectorXd step;
    if (lu.isInvertible()) {
      step = lu.solve(r);
    } else {
      const double lambda = 1e-10 * std::max(1.0, j.cwiseAbs().maxCoeff());
      const Eigen::MatrixXd jr =
          j.transpose() * j + lambda * Eigen::MatrixXd::Identity(j.cols(), j.cols());
      Eigen::FullPivLU<Eigen::MatrixXd> lur(jr);
      if (!lur.isInvertible()) {
        throw NumericError("Newton Jacobian is singular even after regularization");
      }
      step = lur.solve(j.transpose() * r);
    }
    double scale = 1.0;
    Eigen::VectorXd trial = res.x - step;
    Eigen::VectorXd rt = residual(trial);
    double nt = rt.lpNorm<Eigen::Infinity>();
    for (int h = 0; h < opt.max_halvings && !(nt < res.residual_norm); ++h) {
      scale *= 0.5;
      trial = res.x - scale * step;
      rt = residual(trial);
      nt = rt.lpNorm<Eigen::Infinity>();
    }
    ++res.iterations;
    if (!(nt < res.residual_norm)) {
      std::ostringstream os;
      os << "Newton stalled after " << res.iterations << " iterations (residual "
         << res.residual_norm << ")";
      throw ConvergenceError(os.str(), res.residual_norm);
    }
    res.x = trial;
    r = rt;
    res.residual_norm = nt;
  }
  return res;
}

}  // namespace muntz
