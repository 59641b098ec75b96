#pragma once

/// \file
/// Collocation solvers on the mapped Gauss-Jacobi nodes: linear multi-term EK
/// equations, nonlinear EK equations (Newton), a fractional PDE by the method
/// of lines, and Burgers' equation with the cutoff basis.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <vector>

#include <boost/numeric/odeint.hpp>
#include <Eigen/Dense>

#include "muntz/diff_matrices.hpp"
#include "muntz/error.hpp"
#include "muntz/lagrange_muntz.hpp"
#include "muntz/newton.hpp"

namespace muntz {

using Fn1 = std::function<double(double)>;
using Fn2 = std::function<double(double, double)>;

struct SolverReport {
  std::shared_ptr<const MuntzNodeSet> nodeset;
  std::vector<double> nodes;
  std::vector<double> solution;               ///< at the final time for evolution problems
  std::vector<double> times;                  ///< output times (evolution problems)
  std::vector<std::vector<double>> history;   ///< solution at each output time
  std::vector<double> error_history;          ///< max nodal error at each output time
  double E_infty = std::numeric_limits<double>::quiet_NaN();
  double cond = std::numeric_limits<double>::quiet_NaN();      ///< 2-norm
  double cond_one = std::numeric_limits<double>::quiet_NaN();  ///< 1-norm
  int iterations = 0;
  double residual_norm = 0.0;

  GridFunction grid() const { return GridFunction{nodeset, solution}; }
};

/// sum_k c_k(x) D^{mu_k} y + c_0(x) y = f(x), y^{(r)}(0) = 0.
struct LinearFdeProblem {
  std::vector<double> orders;  ///< 0 < mu_1 < ... < mu_l
  std::vector<Fn1> coeffs;     ///< c_0, c_1, ..., c_l
  Fn1 rhs;
  MuntzBasisParams basis;      ///< basis.mu fixes the trial space
  int N = 10;
  Fn1 exact;                   ///< optional, for E_infty
};

/// D^{mu_l} y = F(x, y, D^{mu_1} y, ..., D^{mu_{l-1}} y), y^{(r)}(0) = 0.
struct NonlinearFdeProblem {
  using Rhs = std::function<double(double x, double y, std::span<const double> d)>;
  /// Partials of F: grad[0] = dF/dy, grad[k] = dF/d(D^{mu_k} y).
  using RhsGrad = std::function<void(double x, double y, std::span<const double> d,
                                     std::span<double> grad)>;
  std::vector<double> orders;
  Rhs F;
  RhsGrad dF;  ///< optional; forward differences when empty
  MuntzBasisParams basis;
  int N = 10;
  Fn1 exact;
  std::vector<double> initial_guess;  ///< zero when empty
  NewtonOptions newton{};
};

/// u_t = d(x,t) D^mu u + s(x,t), u(0,t) = u_x(0,t) = 0, u(x,0) = f(x).
struct PdeProblem {
  Fn2 d;
  Fn2 s;
  Fn1 f;
  MuntzBasisParams basis;  ///< basis.mu is the order, in (1,2)
  int N = 10;
  double T = 1.0;
  std::vector<double> output_times;  ///< defaults to {0, T}
  double rtol = 1e-10;
  double atol = 1e-10;
  Fn2 exact;
};

/// u_t = eps u_xx - u u_x + s(x,t), u(0,t) = u(b,t) = 0, u(x,0) = f(x).
struct BurgersProblem {
  double epsilon = 0.1;
  Fn2 s;
  Fn1 f;
  MuntzBasisParams basis;
  int N = 20;
  double T = 1.0;
  double dt = 1e-3;
  int record_every = 0;  ///< steps between stored snapshots; 0 keeps only t = 0 and T
  Fn2 exact;
};

namespace detail {

inline void require_initial_conditions(const MuntzBasisParams& p, double top_order) {
  const double lead = p.sigma * (p.beta() - p.eta - p.mu);
  const double need = std::ceil(top_order - 1e-14) - 1.0;
  if (!(lead > need)) {
    std::ostringstream os;
    os << "trial space exponent sigma(beta-eta-mu)=" << lead << " must exceed ceil(mu_l)-1="
       << need;
    throw PreconditionError(os.str());
  }
}

inline void require_orders(const std::vector<double>& orders) {
  require(!orders.empty(), "at least one derivative order is needed");
  for (std::size_t k = 0; k < orders.size(); ++k) {
    require(orders[k] > 0.0, "derivative orders must be positive");
    if (k > 0) require(orders[k] > orders[k - 1], "derivative orders must increase");
  }
}

inline std::vector<double> eval_at(const Fn1& f, const std::vector<double>& xs, const char* what) {
  std::vector<double> v(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    v[i] = f(xs[i]);
    if (!std::isfinite(v[i])) {
      std::ostringstream os;
      os << what << " is not finite at node " << i << " (x=" << xs[i] << ")";
      throw PreconditionError(os.str());
    }
  }
  return v;
}

inline double max_error(const std::vector<double>& xs, const std::vector<double>& u,
                        const Fn1& exact) {
  double e = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) e = std::max(e, std::abs(u[i] - exact(xs[i])));
  return e;
}

}  // namespace detail

/// Collocates (sum_k C_k D^{mu_k} + C_0) Y = F and solves it densely.
inline SolverReport solve_linear_fde(const LinearFdeProblem& p) {
  p.basis.validate();
  detail::require_orders(p.orders);
  detail::require(p.coeffs.size() == p.orders.size() + 1, "need coefficients c_0..c_l");
  detail::require(static_cast<bool>(p.rhs), "right-hand side is missing");
  detail::require_initial_conditions(p.basis, p.orders.back());
  auto ns = std::make_shared<const MuntzNodeSet>(p.basis, p.N);
  const std::vector<double>& xs = ns->nodes();
  const std::size_t m = xs.size();

  DenseMatrix a = DenseMatrix::Zero(m, m);
  const std::vector<double> c0 = detail::eval_at(p.coeffs[0], xs, "c_0");
  for (std::size_t i = 0; i < m; ++i) a(i, i) += c0[i];
  for (std::size_t k = 0; k < p.orders.size(); ++k) {
    const std::vector<double> ck = detail::eval_at(p.coeffs[k + 1], xs, "coefficient");
    const DenseMatrix d = ek_dm_stable(Side::Left, *ns, p.orders[k]);
    for (std::size_t i = 0; i < m; ++i) a.row(i) += ck[i] * d.row(i);
  }
  const std::vector<double> f = detail::eval_at(p.rhs, xs, "right-hand side");

  SolverReport rep;
  const ConditionResult c2 = condition_number(a, CondNorm::Two);
  rep.cond = c2.value;
  rep.cond_one = condition_number(a, CondNorm::One).value;
  if (c2.singular) {
    std::ostringstream os;
    os << "collocation system is singular (condition estimate " << c2.value << ")";
    throw NumericError(os.str());
  }
  const Eigen::Map<const Vector> fv(f.data(), static_cast<Eigen::Index>(m));
  const Vector y = a.fullPivLu().solve(fv);
  rep.nodeset = ns;
  rep.nodes = xs;
  rep.solution.assign(y.data(), y.data() + y.size());
  rep.residual_norm = (a * y - fv).lpNorm<Eigen::Infinity>();
  if (p.exact) rep.E_infty = detail::max_error(xs, rep.solution, p.exact);
  return rep;
}

/// Newton on D^{mu_l} Y - F(x, Y, D^{mu_1} Y, ...) = 0.
inline SolverReport solve_nonlinear_fde(const NonlinearFdeProblem& p) {
  p.basis.validate();
  detail::require_orders(p.orders);
  detail::require(static_cast<bool>(p.F), "nonlinear right-hand side is missing");
  detail::require_initial_conditions(p.basis, p.orders.back());
  auto ns = std::make_shared<const MuntzNodeSet>(p.basis, p.N);
  const std::vector<double>& xs = ns->nodes();
  const Eigen::Index m = static_cast<Eigen::Index>(xs.size());
  const std::size_t l = p.orders.size();

  std::vector<DenseMatrix> dm;
  for (double mu : p.orders) dm.push_back(ek_dm_stable(Side::Left, *ns, mu));

  auto lower = [&](const Vector& y) {
    std::vector<Vector> out;
    for (std::size_t k = 0; k + 1 < l; ++k) out.push_back(dm[k] * y);
    return out;
  };
  ResidualFn residual = [&](const Vector& y) {
    const std::vector<Vector> dy = lower(y);
    Vector r = dm.back() * y;
    std::vector<double> dvals(l - 1);
    for (Eigen::Index i = 0; i < m; ++i) {
      for (std::size_t k = 0; k + 1 < l; ++k) dvals[k] = dy[k](i);
      r(i) -= p.F(xs[i], y(i), dvals);
    }
    return r;
  };
  std::optional<JacobianFn> jac;
  if (p.dF) {
    jac = [&](const Vector& y) {
      const std::vector<Vector> dy = lower(y);
      Eigen::MatrixXd j = dm.back();
      std::vector<double> dvals(l - 1);
      std::vector<double> grad(l);
      for (Eigen::Index i = 0; i < m; ++i) {
        for (std::size_t k = 0; k + 1 < l; ++k) dvals[k] = dy[k](i);
        p.dF(xs[i], y(i), dvals, grad);
        j(i, i) -= grad[0];
        for (std::size_t k = 0; k + 1 < l; ++k) j.row(i) -= grad[k + 1] * dm[k].row(i);
      }
      return j;
    };
  }
  Vector y0 = Vector::Zero(m);
  if (!p.initial_guess.empty()) {
    detail::require(p.initial_guess.size() == xs.size(), "initial guess has the wrong length");
    y0 = Eigen::Map<const Vector>(p.initial_guess.data(), m);
  }
  const NewtonResult nr = newton_solve(residual, jac, y0, p.newton);

  SolverReport rep;
  rep.nodeset = ns;
  rep.nodes = xs;
  rep.solution.assign(nr.x.data(), nr.x.data() + nr.x.size());
  rep.iterations = nr.iterations;
  rep.residual_norm = nr.residual_norm;
  const Eigen::MatrixXd jf = jac ? (*jac)(nr.x) : fd_jacobian(residual, nr.x, residual(nr.x));
  rep.cond = condition_number(jf, CondNorm::Two).value;
  rep.cond_one = condition_number(jf, CondNorm::One).value;
  if (p.exact) rep.E_infty = detail::max_error(xs, rep.solution, p.exact);
  return rep;
}

/// Method of lines: a' = diag(d(x,t)) D^mu a + s(t), integrated by the
/// Dormand-Prince 5(4) pair with dense output at the requested times.
inline SolverReport solve_pde_mol(const PdeProblem& p) {
  namespace odeint = boost::numeric::odeint;
  p.basis.validate();
  const double mu = p.basis.mu;
  detail::require(mu > 1.0 && mu < 2.0, "fractional PDE order must lie in (1,2)");
  detail::require(p.d && p.s && p.f, "PDE needs d, s and f");
  detail::require(p.T > 0.0, "final time must be positive");
  detail::require(p.rtol > 0.0 && p.atol > 0.0, "tolerances must be positive");
  detail::require_initial_conditions(p.basis, mu);
  auto ns = std::make_shared<const MuntzNodeSet>(p.basis, p.N);
  const std::vector<double>& xs = ns->nodes();
  const std::size_t m = xs.size();
  const DenseMatrix dmat = ek_dm_stable(Side::Left, *ns, mu);

  std::vector<double> times = p.output_times;
  if (times.empty()) times = {0.0, p.T};
  for (std::size_t i = 0; i < times.size(); ++i) {
    detail::require(times[i] >= 0.0 && times[i] <= p.T, "output times must lie in [0,T]");
    if (i > 0) detail::require(times[i] > times[i - 1], "output times must increase");
  }
  if (times.front() != 0.0) times.insert(times.begin(), 0.0);

  using State = std::vector<double>;
  auto rhs = [&](const State& a, State& da, double t) {
    const Eigen::Map<const Vector> av(a.data(), static_cast<Eigen::Index>(m));
    const Vector w = dmat * av;
    for (std::size_t i = 0; i < m; ++i) da[i] = p.d(xs[i], t) * w(i) + p.s(xs[i], t);
  };
  State a = detail::eval_at(p.f, xs, "initial data");

  SolverReport rep;
  rep.nodeset = ns;
  rep.nodes = xs;
  auto observe = [&](const State& st, double t) {
    rep.times.push_back(t);
    rep.history.push_back(st);
    if (p.exact) {
      double e = 0.0;
      for (std::size_t i = 0; i < m; ++i) e = std::max(e, std::abs(st[i] - p.exact(xs[i], t)));
      rep.error_history.push_back(e);
    }
  };
  try {
    auto stepper = odeint::make_dense_output(p.atol, p.rtol, odeint::runge_kutta_dopri5<State>());
    const double dt0 = std::min(1e-3, 0.01 * p.T);
    odeint::integrate_times(stepper, rhs, a, times.begin(), times.end(), dt0, observe,
                            odeint::max_step_checker(200000));
  } catch (const odeint::odeint_error& e) {
    std::ostringstream os;
    os << "time integration failed (" << e.what()
       << "); the system may be stiff, relax the tolerances";
    throw ConvergenceError(os.str(), std::numeric_limits<double>::quiet_NaN());
  }
  rep.solution = rep.history.back();
  if (!rep.error_history.empty()) {
    rep.E_infty = *std::max_element(rep.error_history.begin(), rep.error_history.end());
  }
  rep.cond = condition_number(dmat, CondNorm::Two).value;
  rep.cond_one = condition_number(dmat, CondNorm::One).value;
  return rep;
}

/// Trapezoidal rule in time with a Newton solve per step; the spatial operators
/// are the cutoff-basis first-order matrix and its square.
inline SolverReport solve_burgers(const BurgersProblem& p) {
  p.basis.validate();
  detail::require(p.basis.eta > 0.0 && p.basis.alpha() > 0.0,
                  "Burgers trial basis needs eta > 0 and alpha > 0");
  detail::require(p.epsilon > 0.0, "viscosity must be positive");
  detail::require(p.T > 0.0 && p.dt > 0.0, "T and dt must be positive");
  detail::require(p.s && p.f, "Burgers needs s and f");
  auto ns = std::make_shared<const MuntzNodeSet>(p.basis, p.N);
  const std::vector<double>& xs = ns->nodes();
  const Eigen::Index m = static_cast<Eigen::Index>(xs.size());
  const Eigen::MatrixXd d1 = first_order_dm(BasisFamily::CutoffBasis, *ns);
  const Eigen::MatrixXd d2 = dm_power(first_order_dm(BasisFamily::CutoffBasis, *ns), 2);
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(m, m);

  auto source = [&](double t) {
    Vector s(m);
    for (Eigen::Index i = 0; i < m; ++i) s(i) = p.s(xs[i], t);
    return s;
  };
  auto rhs = [&](const Vector& u, const Vector& s) -> Vector {
    return p.epsilon * (d2 * u) - u.cwiseProduct(d1 * u) + s;
  };

  NewtonOptions nopt;
  nopt.tol = 1e-10;
  nopt.max_iter = 25;

  // One trapezoid step of size h from (t, u); throws ConvergenceError on failure.
  auto step = [&](const Vector& u, double t, double h) {
    const Vector f0 = rhs(u, source(t));
    const Vector s1 = source(t + h);
    ResidualFn res = [&](const Vector& v) -> Vector { return v - u - 0.5 * h * (f0 + rhs(v, s1)); };
    JacobianFn jac = [&](const Vector& v) -> Eigen::MatrixXd {
      Eigen::MatrixXd j = p.epsilon * d2;
      j.diagonal() -= d1 * v;
      j -= v.asDiagonal() * d1;
      return eye - 0.5 * h * j;
    };
    return newton_solve(res, jac, u, nopt);
  };

  SolverReport rep;
  rep.nodeset = ns;
  rep.nodes = xs;
  const std::vector<double> u0 = detail::eval_at(p.f, xs, "initial data");
  Vector u = Eigen::Map<const Vector>(u0.data(), m);
  auto record = [&](double t) {
    rep.times.push_back(t);
    rep.history.emplace_back(u.data(), u.data() + m);
  };
  auto track_error = [&](double t) {
    if (!p.exact) return;
    double e = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) e = std::max(e, std::abs(u(i) - p.exact(xs[i], t)));
    rep.E_infty = std::isnan(rep.E_infty) ? e : std::max(rep.E_infty, e);
    rep.error_history.push_back(e);
  };
  record(0.0);
  track_error(0.0);
  rep.error_history.clear();

  const long steps = std::max(1L, std::lround(p.T / p.dt));
  const double h = p.T / static_cast<double>(steps);
  for (long k = 0; k < steps; ++k) {
    const double t = k * h;
    int halvings = 0;
    int pieces = 1;
    for (;;) {
      try {
        Vector v = u;
        const double hs = h / pieces;
        for (int q = 0; q < pieces; ++q) {
          const NewtonResult nr = step(v, t + q * hs, hs);
          v = nr.x;
          rep.iterations = std::max(rep.iterations, nr.iterations);
        }
        u = v;
        break;
      } catch (const ConvergenceError& e) {
        if (++halvings > 10) {
          std::ostringstream os;
          os << "Burgers step at t=" << t << " failed after 10 step halvings";
          throw ConvergenceError(os.str(), e.achieved());
        }
        pieces *= 2;
      }
    }
    const double tn = (k + 1 == steps) ? p.T : (k + 1) * h;
    if (p.exact) {
      double e = 0.0;
      for (Eigen::Index i = 0; i < m; ++i) e = std::max(e, std::abs(u(i) - p.exact(xs[i], tn)));
      rep.E_infty = std::isnan(rep.E_infty) ? e : std::max(rep.E_infty, e);
    }
    const bool last = k + 1 == steps;
    if (last || (p.record_every > 0 && (k + 1) % p.record_every == 0)) {
      record(tn);
      if (p.exact) {
        double e = 0.0;
        for (Eigen::Index i = 0; i < m; ++i) e = std::max(e, std::abs(u(i) - p.exact(xs[i], tn)));
        rep.error_history.push_back(e);
      }
    }
  }
  if (p.exact) {
    double e0 = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) e0 = std::max(e0, std::abs(rep.history[0][i] - p.exact(xs[i], 0.0)));
    rep.error_history.insert(rep.error_history.begin(), e0);
  }
  rep.solution.assign(u.data(), u.data() + m);
  rep.cond = condition_number(d1, CondNorm::Two).value;
  rep.cond_one = condition_number(d1, CondNorm::One).value;
  return rep;
}

}  // namespace muntz
