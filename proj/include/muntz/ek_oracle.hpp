#pragma once

/// \file
/// Brute-force Erdelyi-Kober fractional integrals and derivatives. Slow and only
/// ~1e-6 accurate for derivatives; used as a reference for the closed forms.
///
/// Everything is done in the variable tau = t^sigma, where the operators take
/// the Riemann-Liouville shape
///   left  I f = X^{-(eta+mu)}/Gamma(mu) int_A^X (X-tau)^{mu-1} tau^eta f dtau
///   right I f = X^{eta}/Gamma(mu) int_X^B (tau-X)^{mu-1} tau^{-(eta+mu)} f dtau
/// and (1/(sigma x^{sigma-1})) d/dx = d/dX.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "muntz/error.hpp"
#include "muntz/jacobi.hpp"
#include "muntz/side.hpp"

namespace muntz {

struct EkOperatorSpec {
  Side side = Side::Left;
  double mu = 0.5;
  double sigma = 1.0;
  double eta = 0.0;
  double a = 0.0;
  double b = 1.0;

  void validate() const {
    detail::require(mu > 0.0, "EK order mu must be positive");
    detail::require(sigma > 0.0, "sigma must be positive");
    detail::require(a >= 0.0 && b > a, "EK interval needs 0 <= a < b");
  }
};

namespace detail {

inline double quad_0_to(const std::function<double(double)>& g, double len) {
  if (!(len > 0.0)) return 0.0;
  thread_local boost::math::quadrature::tanh_sinh<double> ts;
  double err = 0.0;
  double l1 = 0.0;
  const double v = ts.integrate(g, 0.0, len, 1e-13, &err, &l1);
  if (!std::isfinite(v) || err > 1e-9 * std::max(1.0, l1)) {
    std::ostringstream os;
    os << "EK quadrature did not converge (error estimate " << err << ")";
    throw ConvergenceError(os.str(), err);
  }
  return v;
}

/// int_A^X (X-tau)^{nu-1} tau^eta f(tau^{1/sigma}) dtau, split at the midpoint so
/// that each piece has its possible singularity at its zero endpoint.
inline double left_kernel_integral(const std::function<double(double)>& f, double nu, double eta,
                                   double sigma, double big_a, double big_x) {
  const double half = 0.5 * (big_x - big_a);
  const double mid = big_a + half;
  auto near_x = [&](double u) {
    const double tau = big_x - u;
    return std::pow(u, nu - 1.0) * std::pow(tau, eta) * f(std::pow(tau, 1.0 / sigma));
  };
  auto near_a = [&](double v) {
    const double tau = big_a + v;
    if (tau <= 0.0) return 0.0;
    return std::pow(big_x - tau, nu - 1.0) * std::pow(tau, eta) * f(std::pow(tau, 1.0 / sigma));
  };
  return quad_0_to(near_x, big_x - mid) + quad_0_to(near_a, half);
}

/// int_X^B (tau-X)^{nu-1} tau^{-(eta+nu)} f(tau^{1/sigma}) dtau, split likewise.
/// Abscissas that round onto tau = B are dropped.
inline double right_kernel_integral(const std::function<double(double)>& f, double nu,
                                    double eta, double sigma, double big_x, double big_b) {
  const double half = 0.5 * (big_b - big_x);
  auto near_x = [&](double u) {
    const double tau = big_x + u;
    return std::pow(u, nu - 1.0) * std::pow(tau, -(eta + nu)) * f(std::pow(tau, 1.0 / sigma));
  };
  auto near_b = [&](double v) {
    const double tau = big_b - v;
    if (tau >= big_b) return 0.0;
    return std::pow(tau - big_x, nu - 1.0) * std::pow(tau, -(eta + nu)) *
           f(std::pow(tau, 1.0 / sigma));
  };
  return quad_0_to(near_x, half) + quad_0_to(near_b, half);
}

/// EK integral of order nu and weight eta at X = x^sigma.
inline double ek_integral_at(Side side, double nu, double eta, double sigma, double big_a,
                             double big_b, const std::function<double(double)>& f, double big_x) {
  const double g = std::exp(-log_abs_gamma(nu));
  if (side == Side::Left) {
    return std::pow(big_x, -(eta + nu)) * g *
           left_kernel_integral(f, nu, eta, sigma, big_a, big_x);
  }
  return std::pow(big_x, eta) * g * right_kernel_integral(f, nu, eta, sigma, big_x, big_b);
}

/// Ridders-Richardson extrapolation of a central difference of order 1 or 2.
inline double ridders(const std::function<double(double)>& g, double x0, double h0, int order) {
  constexpr int kTab = 10;
  constexpr double kCon = 1.6;
  constexpr double kCon2 = kCon * kCon;
  double tab[kTab][kTab] = {};
  auto diff = [&](double h) {
    if (order == 1) return (g(x0 + h) - g(x0 - h)) / (2.0 * h);
    return (g(x0 + h) - 2.0 * g(x0) + g(x0 - h)) / (h * h);
  };
  double h = h0;
  double best = 0.0;
  double err = std::numeric_limits<double>::max();
  tab[0][0] = diff(h);
  best = tab[0][0];
  for (int i = 1; i < kTab; ++i) {
    h /= kCon;
    tab[0][i] = diff(h);
    double fac = kCon2;
    for (int j = 1; j <= i; ++j) {
      tab[j][i] = (tab[j - 1][i] * fac - tab[j - 1][i - 1]) / (fac - 1.0);
      fac *= kCon2;
      const double e = std::max(std::abs(tab[j][i] - tab[j - 1][i]),
                                std::abs(tab[j][i] - tab[j - 1][i - 1]));
      if (e <= err) {
        err = e;
        best = tab[j][i];
      }
    }
    if (std::abs(tab[i][i] - tab[i - 1][i - 1]) >= 2.0 * err) break;
  }
  return best;
}

}  // namespace detail

/// Left integral {}_a I^mu_{x,sigma,eta} f or right integral {}_x I^mu_{b,sigma,eta} f.
inline double ek_integral(const EkOperatorSpec& spec, const std::function<double(double)>& f,
                          double x) {
  spec.validate();
  const bool inside = spec.side == Side::Left ? (x > spec.a && x <= spec.b)
                                              : (x >= spec.a && x < spec.b && x > 0.0);
  detail::require(inside, "EK integral evaluated outside its domain");
  const double s = spec.sigma;
  return detail::ek_integral_at(spec.side, spec.mu, spec.eta, s, std::pow(spec.a, s),
                                std::pow(spec.b, s), f, std::pow(x, s));
}

/// Left or right EK derivative of order 0 < mu <= 2 by differentiating the
/// inner EK integral numerically in X = x^sigma.
inline double ek_derivative(const EkOperatorSpec& spec, const std::function<double(double)>& f,
                            double x) {
  spec.validate();
  detail::require(spec.mu <= 2.0, "EK oracle supports mu <= 2 only");
  detail::require(x > spec.a && x < spec.b, "EK derivative needs an interior point");
  const int n = static_cast<int>(std::ceil(spec.mu - 1e-14));
  const double nu = n - spec.mu;
  const double s = spec.sigma;
  const double big_a = std::pow(spec.a, s);
  const double big_b = std::pow(spec.b, s);
  const double big_x = std::pow(x, s);
  const double eta = spec.eta;
  const double mu = spec.mu;

  auto f_of_big = [&](double bx) { return f(std::pow(bx, 1.0 / s)); };
  std::function<double(double)> inner;
  if (spec.side == Side::Left) {
    inner = [&](double bx) {
      const double i = nu > 0.0
                           ? detail::ek_integral_at(Side::Left, nu, eta + mu, s, big_a, big_b, f, bx)
                           : f_of_big(bx);
      return std::pow(bx, eta + n) * i;
    };
  } else {
    inner = [&](double bx) {
      const double e = eta + mu - n;
      const double i = nu > 0.0
                           ? detail::ek_integral_at(Side::Right, nu, e, s, big_a, big_b, f, bx)
                           : f_of_big(bx);
      return std::pow(bx, -e) * i;
    };
  }
  const double h0 = 0.2 * std::min(big_x - big_a, big_b - big_x);
  if (!(h0 > 1e-10 * std::max(1.0, big_x))) {
    std::ostringstream os;
    os << "EK derivative step underflows at x=" << x << "; evaluate at an interior point";
    throw NumericError(os.str());
  }
  const double d = detail::ridders(inner, big_x, h0, n);
  if (spec.side == Side::Left) return std::pow(big_x, -eta) * d;
  return std::pow(big_x, eta + mu) * (n % 2 == 0 ? d : -d);
}

}  // namespace muntz
