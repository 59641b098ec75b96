#pragma once

/// \file
/// Jacobi-Muntz functions of the first and second kind, their closed-form
/// Erdelyi-Kober derivatives and the two classical first-derivative identities.

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "muntz/error.hpp"
#include "muntz/jacobi.hpp"
#include "muntz/quadrature.hpp"

namespace muntz {

enum class JmfKind { First, Second };

/// What to do at x = 0 (or x = b) when a prefactor exponent is negative.
enum class EndpointPolicy { Reject, Limit };

struct JmfSpec {
  JmfKind kind = JmfKind::First;
  int n = 0;
  MuntzBasisParams params;
};

namespace detail {

inline void check_domain(double x, double b) {
  if (!(x >= 0.0 && x <= b)) {
    std::ostringstream os;
    os << "x=" << x << " outside [0," << b << "]";
    throw PreconditionError(os.str());
  }
}

/// 2 (x/b)^sigma - 1.
inline double mapped_arg(double x, double sigma, double b) {
  if (x == 0.0) return -1.0;
  return 2.0 * std::exp(sigma * std::log(x / b)) - 1.0;
}

/// x^e with 0^0 = 1; callers handle 0^(negative).
inline double pow0(double x, double e) {
  if (e == 0.0) return 1.0;
  if (x == 0.0) return 0.0;
  return std::exp(e * std::log(x));
}

/// x^ex (b^sigma - x^sigma)^ec P_n^{(a,c)}(2(x/b)^sigma - 1) with endpoint handling.
inline double prefactored_jacobi(int n, double a, double c, double sigma, double b, double ex,
                                 double ec, double x, EndpointPolicy policy) {
  check_domain(x, b);
  const double y = mapped_arg(x, sigma, b);
  const double pn = jacobi_value(n, a, c, std::clamp(y, -1.0, 1.0));
  const bool sing_left = x == 0.0 && ex < 0.0;
  const bool sing_right = x == b && ec < 0.0;
  if (sing_left || sing_right) {
    if (policy == EndpointPolicy::Reject) {
      std::ostringstream os;
      os << "prefactor exponent " << (sing_left ? ex : ec) << " is negative at x=" << x;
      throw SingularityError(os.str());
    }
    return std::copysign(std::numeric_limits<double>::infinity(), pn);
  }
  const double cut = x == b ? 0.0 : std::pow(b, sigma) * 0.5 * (1.0 - y);
  return pow0(x, ex) * pow0(cut, ec) * pn;
}

}  // namespace detail

/// Value of the JMF described by `spec` at x in [0,b].
inline double eval_jmf(const JmfSpec& spec, double x,
                       EndpointPolicy policy = EndpointPolicy::Reject) {
  const MuntzBasisParams& p = spec.params;
  p.validate();
  detail::require(spec.n >= 0, "JMF degree must be non-negative");
  if (spec.kind == JmfKind::First) {
    const double ex = p.sigma * (p.beta() - p.eta - p.mu);
    return detail::prefactored_jacobi(spec.n, p.alpha(), p.beta(), p.sigma, p.b, ex, 0.0, x,
                                      policy);
  }
  return detail::prefactored_jacobi(spec.n, p.alpha(), p.beta(), p.sigma, p.b, p.sigma * p.eta,
                                    p.alpha(), x, policy);
}

/// Closed-form EK derivative of order params.mu: left-sided (a = 0) for the
/// first kind, right-sided for the second kind.
inline double ek_deriv_jmf_closed(const JmfSpec& spec, double x,
                                  EndpointPolicy policy = EndpointPolicy::Reject) {
  const MuntzBasisParams& p = spec.params;
  p.validate();
  detail::require(spec.n >= 0, "JMF degree must be non-negative");
  const int k = spec.n;
  const double mu = p.mu;
  if (spec.kind == JmfKind::First) {
    if (!(p.beta() - mu > -1.0)) {
      std::ostringstream os;
      os << "left EK derivative needs beta - mu > -1 (beta=" << p.beta() << ", mu=" << mu << ")";
      throw PreconditionError(os.str());
    }
    const double ratio = gamma_ratio(k + p.beta() + 1.0, k + p.beta() - mu + 1.0);
    const double ex = p.sigma * (p.beta() - p.eta - mu);
    return ratio * detail::prefactored_jacobi(k, p.alpha() + mu, p.beta() - mu, p.sigma, p.b, ex,
                                              0.0, x, policy);
  }
  if (!(p.alpha() - mu > -1.0)) {
    std::ostringstream os;
    os << "right EK derivative needs alpha - mu > -1 (alpha=" << p.alpha() << ", mu=" << mu
       << ")";
    throw PreconditionError(os.str());
  }
  const double ratio = gamma_ratio(k + p.alpha() + 1.0, k + p.alpha() - mu + 1.0);
  return ratio * detail::prefactored_jacobi(k, p.alpha() - mu, p.beta() + mu, p.sigma, p.b,
                                            p.sigma * (p.eta + mu), p.alpha() - mu, x, policy);
}

enum class SpecialKind { PowerJacobi, CutoffJacobi };

/// d/dx of x^{sigma beta} P_n(.) (PowerJacobi) or (b^sigma - x^sigma)^alpha P_n(.)
/// (CutoffJacobi), P_n = P_n^{(alpha,beta)}(2(x/b)^sigma - 1).
inline double d_dx_special(SpecialKind kind, int n, const MuntzBasisParams& p, double x,
                           EndpointPolicy policy = EndpointPolicy::Reject) {
  p.validate();
  detail::require(n >= 0, "degree must be non-negative");
  const double a = p.alpha();
  const double c = p.beta();
  const double s = p.sigma;
  if (kind == SpecialKind::PowerJacobi) {
    // sigma Gamma(n+beta+1)/Gamma(n+beta) = sigma (n+beta), also at the n+beta = 0 pole.
    const double f = s * (n + c);
    if (f == 0.0) return 0.0;
    return f * detail::prefactored_jacobi(n, a + 1.0, c - 1.0, s, p.b, s * c - 1.0, 0.0, x,
                                          policy);
  }
  const double f = -s * (n + a);
  if (f == 0.0) return 0.0;
  return f * detail::prefactored_jacobi(n, a - 1.0, c + 1.0, s, p.b, s - 1.0, a - 1.0, x, policy);
}

}  // namespace muntz
