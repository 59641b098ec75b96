#pragma once

/// \file
/// Reference experiments with their parameters baked in. Each preset returns
/// plot/table data; sweeps over independent entries run on a small thread pool.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/differentiation/autodiff.hpp>

#include "muntz/diff_matrices.hpp"
#include "muntz/jacobi_muntz.hpp"
#include "muntz/lagrange_muntz.hpp"
#include "muntz/solvers.hpp"
#include "muntz/table.hpp"

namespace muntz::experiments {

/// Thread cap from MUNTZ_SPECTRAL_THREADS, else hardware concurrency.
inline unsigned thread_cap() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MUNTZ_SPECTRAL_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) n = static_cast<unsigned>(v);
  }
  return n;
}

/// out[i] = fn(i) for i < count, computed concurrently; results keep index order.
/// The first exception thrown by any entry is rethrown.
template <class R>
std::vector<R> parallel_map(std::size_t count, const std::function<R(std::size_t)>& fn,
                            unsigned threads = thread_cap()) {
  std::vector<R> out(count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex mtx;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mtx);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned nt = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), count));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < nt; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

enum class Approach { Stable, Direct };

inline const char* approach_name(Approach a) { return a == Approach::Stable ? "stable" : "direct"; }

struct DiffmatRow {
  int N = 0;
  double mu = 0.0;
  Approach approach = Approach::Stable;
  double cond = std::numeric_limits<double>::quiet_NaN();
  double max_err = std::numeric_limits<double>::infinity();
  bool overflow = false;
};

/// Applies the EK differentiation matrix of the given side to the JMF of
/// degree k (first kind on the left, second kind on the right) and compares
/// with its closed-form derivative at the nodes. A guarded overflow in the
/// direct construction reports max_err = inf.
inline DiffmatRow diffmat_case(Side side, const MuntzBasisParams& p, int k, int n,
                               Approach approach, CondNorm norm) {
  DiffmatRow row;
  row.N = n;
  row.mu = p.mu;
  row.approach = approach;
  const MuntzNodeSet ns(p, n);
  const JmfSpec spec{side == Side::Left ? JmfKind::First : JmfKind::Second, k, p};
  const std::size_t m = ns.size();
  Vector f(m);
  Vector exact(m);
  for (std::size_t r = 0; r < m; ++r) {
    f(r) = eval_jmf(spec, ns.node(r));
    exact(r) = ek_deriv_jmf_closed(spec, ns.node(r));
  }
  DenseMatrix d;
  try {
    d = approach == Approach::Stable ? ek_dm_stable(side, ns) : ek_dm_direct(side, ns, p.mu);
  } catch (const OverflowError&) {
    row.overflow = true;
    return row;
  }
  row.cond = condition_number(d, norm).value;
  const double err = (d * f - exact).cwiseAbs().maxCoeff();
  row.max_err = std::isfinite(err) ? err : std::numeric_limits<double>::infinity();
  return row;
}

inline Table diffmat_table(const std::vector<DiffmatRow>& rows) {
  Table t;
  t.columns = {"N", "mu", "approach", "cond", "cond_over_2N2mu", "max_err"};
  for (const auto& r : rows) {
    t.add({static_cast<std::int64_t>(r.N), r.mu, std::string(approach_name(r.approach)), r.cond,
           r.cond / (2.0 * std::pow(r.N, 2.0 * r.mu)), r.max_err});
  }
  return t;
}

/// Sweep over N x mu x {stable, direct} in a fixed row order.
inline std::vector<DiffmatRow> diffmat_sweep(Side side, MuntzBasisParams p, int k,
                                             const std::vector<int>& ns,
                                             const std::vector<double>& mus, CondNorm norm) {
  struct Job {
    int n;
    double mu;
    Approach a;
  };
  std::vector<Job> jobs;
  for (int n : ns) {
    for (double mu : mus) {
      jobs.push_back({n, mu, Approach::Direct});
      jobs.push_back({n, mu, Approach::Stable});
    }
  }
  return parallel_map<DiffmatRow>(jobs.size(), [&](std::size_t i) {
    MuntzBasisParams q = p;
    q.mu = jobs[i].mu;
    return diffmat_case(side, q, k, jobs[i].n, jobs[i].a, norm);
  });
}

// Left-sided matrices on JMF-1 of degree 10.
inline MuntzBasisParams ex1_params(double mu) { return {{-0.5, 2.0}, 0.5, 0.0, mu, 10.0}; }
constexpr int kEx1Degree = 10;

/// Left-side conditioning sweep. The condition number is the 1-norm one, which is the
/// quantity the reference ratios track.
inline std::vector<DiffmatRow> ex1(const std::vector<int>& ns = {45, 95, 145, 165},
                                   const std::vector<double>& mus = {0.25, 0.5, 0.75},
                                   CondNorm norm = CondNorm::One) {
  return diffmat_sweep(Side::Left, ex1_params(0.5), kEx1Degree, ns, mus, norm);
}

// Right-sided matrices on JMF-2 of degree 5.
inline MuntzBasisParams ex2_params(double mu) { return {{0.5, -0.5}, 0.5, 0.5, mu, 10.0}; }
constexpr int kEx2Degree = 5;

inline std::vector<DiffmatRow> ex2(const std::vector<int>& ns = {45, 95, 145, 175},
                                   const std::vector<double>& mus = {0.25, 0.5, 0.75},
                                   CondNorm norm = CondNorm::One) {
  return diffmat_sweep(Side::Right, ex2_params(0.5), kEx2Degree, ns, mus, norm);
}

/// D^mu y + lambda y = f on [0,10]; f is the Cauchy-Euler forcing of
/// y = sqrt(x) sin(sqrt(x)), exact only for mu = 1.
inline LinearFdeProblem cauchy_euler_problem(int n, double mu = 1.0, double eta = -1.0,
                                             double sigma = 0.5, double lambda = 1.0) {
  LinearFdeProblem p;
  p.orders = {mu};
  p.coeffs = {[lambda](double) { return lambda; }, [](double) { return 1.0; }};
  p.rhs = [=](double x) {
    const double r = std::sqrt(x);
    return r * ((eta + 1.0 + lambda) * std::sin(r) +
                (std::sin(r) + r * std::cos(r)) / (2.0 * sigma));
  };
  p.basis = {{-0.5, 1.0}, sigma, eta, mu, 10.0};
  p.N = n;
  if (mu == 1.0) {
    p.exact = [](double x) {
      const double r = std::sqrt(x);
      return r * std::sin(r);
    };
  }
  return p;
}

struct ConvergenceRow {
  int N = 0;
  double E_infty = 0.0;
  double cond = 0.0;
  double cond_one = 0.0;
  int iterations = 0;
};

inline Table convergence_table(const std::vector<ConvergenceRow>& rows) {
  Table t;
  t.columns = {"N", "E_infty", "cond", "cond_one", "iterations"};
  for (const auto& r : rows) {
    t.add({static_cast<std::int64_t>(r.N), r.E_infty, r.cond, r.cond_one,
           static_cast<std::int64_t>(r.iterations)});
  }
  return t;
}

inline std::vector<ConvergenceRow> ex3(const std::vector<int>& ns = {10, 20, 30, 40, 50},
                                       double mu = 1.0, double eta = -1.0) {
  return parallel_map<ConvergenceRow>(ns.size(), [&](std::size_t i) {
    const SolverReport r = solve_linear_fde(cauchy_euler_problem(ns[i], mu, eta));
    return ConvergenceRow{ns[i], r.E_infty, r.cond, r.cond_one, 0};
  });
}

/// 1 < mu <= 2, y(0) = y'(0) = 0, f = x^2 sin x on [0,10]; no exact solution.
inline LinearFdeProblem second_order_problem(int n, double mu, double sigma,
                                             double lambda = 1.0) {
  LinearFdeProblem p;
  p.orders = {mu};
  p.coeffs = {[lambda](double) { return lambda; }, [](double) { return 1.0; }};
  p.rhs = [](double x) { return x * x * std::sin(x); };
  p.basis = {{-0.5, 3.0}, sigma, -2.0, mu, 10.0};
  p.N = n;
  return p;
}

/// Solution samples on a uniform grid for each (sigma, mu).
inline Table ex4(const std::vector<double>& sigmas = {0.5, 1.0},
                 const std::vector<double>& mus = {1.2, 1.4, 1.6, 1.8, 2.0}, int n = 50,
                 int samples = 101) {
  struct Job {
    double sigma;
    double mu;
  };
  std::vector<Job> jobs;
  for (double s : sigmas) {
    for (double mu : mus) jobs.push_back({s, mu});
  }
  auto grids = parallel_map<GridFunction>(jobs.size(), [&](std::size_t i) {
    return solve_linear_fde(second_order_problem(n, jobs[i].mu, jobs[i].sigma)).grid();
  });
  Table t;
  t.columns = {"sigma", "mu", "x", "y"};
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    for (int q = 0; q < samples; ++q) {
      const double x = 10.0 * q / (samples - 1);
      const double y = eval_interpolant(InterpolantKind::NJMI1, grids[i], x);
      t.add({jobs[i].sigma, jobs[i].mu, x, y});
    }
  }
  return t;
}

inline double riccati_exact(double x) {
  const double r2 = std::sqrt(2.0);
  return 1.0 + r2 * std::tanh(r2 * x + 0.5 * std::log((r2 - 1.0) / (r2 + 1.0)));
}

/// D^mu y - (eta + 1 + 2x/sigma) y = (x/sigma)(1 - y^2) on [0,2].
inline NonlinearFdeProblem riccati_problem(int n, double mu = 1.0, double eta = -1.0,
                                           double sigma = 1.0) {
  NonlinearFdeProblem p;
  p.orders = {mu};
  p.F = [=](double x, double y, std::span<const double>) {
    return (eta + 1.0 + 2.0 * x / sigma) * y + x / sigma * (1.0 - y * y);
  };
  p.basis = {{-0.5, 1.0}, sigma, eta, mu, 2.0};
  p.N = n;
  if (mu == 1.0 && sigma == 1.0 && eta == -1.0) p.exact = riccati_exact;
  return p;
}

inline std::vector<ConvergenceRow> riccati(const std::vector<int>& ns = {10, 20, 30, 40, 50}) {
  return parallel_map<ConvergenceRow>(ns.size(), [&](std::size_t i) {
    const SolverReport r = solve_nonlinear_fde(riccati_problem(ns[i]));
    return ConvergenceRow{ns[i], r.E_infty, r.cond, r.cond_one,
                          r.iterations};
  });
}

/// u_t = d D^mu u + s with u = x^{sigma nu} sin(t^2), d = -1/(1+x+t) on [0,5]^2.
inline PdeProblem pde_problem(int n = 10, double rtol = 1e-10, double atol = 1e-10) {
  constexpr double sigma = 0.5;
  constexpr double nu = 5.0;
  constexpr double eta = -1.75;
  constexpr double mu = 1.75;
  PdeProblem p;
  p.basis = {{0.5, 3.0}, sigma, eta, mu, 5.0};
  p.N = n;
  p.T = 5.0;
  p.rtol = rtol;
  p.atol = atol;
  // Left EK derivative of x^{sigma nu}: Gamma(nu+eta+mu+1)/Gamma(nu+eta+1) x^{sigma nu}.
  const double g = gamma_ratio(nu + eta + mu + 1.0, nu + eta + 1.0);
  p.d = [](double x, double t) { return -1.0 / (1.0 + x + t); };
  p.s = [=](double x, double t) {
    const double u = std::pow(x, sigma * nu);
    return 2.0 * t * std::cos(t * t) * u + g * u * std::sin(t * t) / (1.0 + x + t);
  };
  p.f = [](double) { return 0.0; };
  p.exact = [=](double x, double t) { return std::pow(x, sigma * nu) * std::sin(t * t); };
  for (int i = 0; i <= 20; ++i) p.output_times.push_back(0.25 * i);
  return p;
}

/// Nodal solution, exact value and error at each output time.
inline Table evolution_table(const SolverReport& r, const Fn2& exact) {
  Table t;
  t.columns = {"t", "x", "u", "exact", "abs_err"};
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
      const double e = exact ? exact(r.nodes[i], r.times[k]) : std::numeric_limits<double>::quiet_NaN();
      t.add({r.times[k], r.nodes[i], r.history[k][i], e, std::abs(r.history[k][i] - e)});
    }
  }
  return t;
}

template <class X, class T>
auto burgers_u(const X& x, const T& t) {
  using std::cos;
  using std::pow;
  using std::sqrt;
  return pow(1.0 - sqrt(x), 1.5) * pow(x, 1.5) * cos(sqrt(x)) * cos(t * t);
}

/// s = u_t - eps u_xx + u u_x for the manufactured Burgers solution.
inline double burgers_source(double x, double t, double eps) {
  using boost::math::differentiation::make_fvar;
  const auto ux = burgers_u(make_fvar<double, 2>(x), t);
  const auto ut = burgers_u(x, make_fvar<double, 1>(t));
  return ut.derivative(1) - eps * ux.derivative(2) + ux.derivative(0) * ux.derivative(1);
}

inline BurgersProblem burgers_problem(double sigma, int n = 20, double eps = 0.1,
                                      double dt = 5e-4, double T = 10.0) {
  BurgersProblem p;
  p.epsilon = eps;
  p.basis = {{0.5, 1.0}, sigma, 1.0, 0.0, 1.0};
  p.N = n;
  p.T = T;
  p.dt = dt;
  p.s = [eps](double x, double t) { return burgers_source(x, t, eps); };
  p.f = [](double x) { return burgers_u(x, 0.0); };
  p.exact = [](double x, double t) { return burgers_u(x, t); };
  p.record_every = static_cast<int>(std::lround(0.5 / dt));
  return p;
}

}  // namespace muntz::experiments
