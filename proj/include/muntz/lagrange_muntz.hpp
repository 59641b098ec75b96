#pragma once

/// \file
/// Lagrange-Muntz cardinal functions on the mapped Gauss-Jacobi nodes and the
/// three nodal interpolants built from them.

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <sstream>
#include <vector>

#include "muntz/error.hpp"
#include "muntz/jacobi_muntz.hpp"
#include "muntz/quadrature.hpp"

namespace muntz {

/// The N+1 mapped nodes of mapped_rule(N, params) with the data needed for
/// cardinal-function evaluation in the variable X = x^sigma.
class MuntzNodeSet {
 public:
  static constexpr int kLogFormThreshold = 60;

  MuntzNodeSet(const MuntzBasisParams& params, int n) : params_(params), n_(n) {
    detail::require(n >= 0, "node set needs N >= 0");
    rule_ = mapped_rule(n, params);
    const std::size_t m = rule_.size();
    xs_.resize(m);
    cut_.resize(m);
    log_den_.resize(m);
    den_sign_.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
      xs_[j] = rule_.x_sigma(j);
      cut_[j] = rule_.cut_sigma(j);
    }
    // X_r - X_j = b^sigma (t_r - t_j) / 2 keeps full relative accuracy.
    const double half_bs = 0.5 * std::pow(params.b, params.sigma);
    for (std::size_t r = 0; r < m; ++r) {
      double lg = 0.0;
      int sg = 1;
      for (std::size_t j = 0; j < m; ++j) {
        if (j == r) continue;
        const double d = half_bs * (rule_.ref_nodes[r] - rule_.ref_nodes[j]);
        if (d == 0.0) {
          std::ostringstream os;
          os << "coincident nodes " << r << " and " << j;
          throw NumericError(os.str());
        }
        lg += std::log(std::abs(d));
        if (d < 0.0) sg = -sg;
      }
      log_den_[r] = lg;
      den_sign_[r] = sg;
    }
  }

  const MuntzBasisParams& params() const { return params_; }
  int degree() const { return n_; }
  std::size_t size() const { return xs_.size(); }
  const QuadRule& rule() const { return rule_; }
  const std::vector<double>& nodes() const { return rule_.nodes; }
  double node(std::size_t r) const { return rule_.nodes[r]; }
  /// x_r^sigma
  double node_sigma(std::size_t r) const { return xs_[r]; }
  /// b^sigma - x_r^sigma
  double node_cut(std::size_t r) const { return cut_[r]; }
  /// log |prod_{j != r} (x_r^sigma - x_j^sigma)| and its sign.
  double log_denominator(std::size_t r) const { return log_den_[r]; }
  int denominator_sign(std::size_t r) const { return den_sign_[r]; }

  void check_domain(double x) const { detail::check_domain(x, params_.b); }

  /// Index of the node with x^sigma equal to X, or -1.
  int node_index(double big_x) const {
    for (std::size_t j = 0; j < xs_.size(); ++j) {
      if (big_x == xs_[j]) return static_cast<int>(j);
    }
    return -1;
  }

  /// x^sigma, snapped onto the stored node value when x is a node.
  double to_sigma(double x) const {
    for (std::size_t j = 0; j < size(); ++j) {
      if (x == rule_.nodes[j]) return xs_[j];
    }
    return x == 0.0 ? 0.0 : std::exp(params_.sigma * std::log(x));
  }

 private:
  MuntzBasisParams params_;
  int n_;
  QuadRule rule_;
  std::vector<double> xs_;
  std::vector<double> cut_;
  std::vector<double> log_den_;
  std::vector<int> den_sign_;
};

/// Samples at the nodes of a node set.
struct GridFunction {
  std::shared_ptr<const MuntzNodeSet> nodeset;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
};

enum class InterpolantKind { MJI, NJMI1, NJMI2 };

/// h_r^sigma(x) = prod_{j != r} (x^sigma - x_j^sigma) / (x_r^sigma - x_j^sigma).
inline double eval_h_sigma(const MuntzNodeSet& ns, int r, double x) {
  detail::require(r >= 0 && static_cast<std::size_t>(r) < ns.size(), "cardinal index out of range");
  ns.check_domain(x);
  const double big_x = ns.to_sigma(x);
  const int hit = ns.node_index(big_x);
  if (hit >= 0) return hit == r ? 1.0 : 0.0;
  const std::size_t m = ns.size();
  if (ns.degree() <= MuntzNodeSet::kLogFormThreshold) {
    double num = 1.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (static_cast<int>(j) != r) num *= big_x - ns.node_sigma(j);
    }
    return ns.denominator_sign(r) * num * std::exp(-ns.log_denominator(r));
  }
  double lg = -ns.log_denominator(r);
  int sg = ns.denominator_sign(r);
  for (std::size_t j = 0; j < m; ++j) {
    if (static_cast<int>(j) == r) continue;
    const double d = big_x - ns.node_sigma(j);
    lg += std::log(std::abs(d));
    if (d < 0.0) sg = -sg;
  }
  return sg * std::exp(lg);
}

namespace detail {

/// Prefactor of the interpolant family at x, and at node r. Kind MJI has none.
inline double family_prefactor(const MuntzNodeSet& ns, InterpolantKind kind, double x,
                               EndpointPolicy policy) {
  const MuntzBasisParams& p = ns.params();
  if (kind == InterpolantKind::MJI) return 1.0;
  double ex = 0.0;
  double ec = 0.0;
  if (kind == InterpolantKind::NJMI1) {
    ex = p.sigma * (p.beta() - p.eta - p.mu);
  } else {
    ex = p.sigma * p.eta;
    ec = p.alpha();
  }
  const bool sing = (x == 0.0 && ex < 0.0) || (x == p.b && ec < 0.0);
  if (sing) {
    if (policy == EndpointPolicy::Reject) {
      std::ostringstream os;
      os << "interpolant prefactor is singular at x=" << x;
      throw SingularityError(os.str());
    }
    return std::numeric_limits<double>::infinity();
  }
  const double cut = x == p.b ? 0.0 : std::pow(p.b, p.sigma) - ns.to_sigma(x);
  return pow0(x, ex) * pow0(cut, ec);
}

inline double node_prefactor(const MuntzNodeSet& ns, InterpolantKind kind, std::size_t r) {
  const MuntzBasisParams& p = ns.params();
  const double lx = std::log(ns.node(r));
  if (kind == InterpolantKind::MJI) return 1.0;
  if (kind == InterpolantKind::NJMI1) return std::exp(p.sigma * (p.beta() - p.eta - p.mu) * lx);
  return std::exp(p.sigma * p.eta * lx + p.alpha() * std::log(ns.node_cut(r)));
}

}  // namespace detail

/// First-kind (variant 1) or second-kind (variant 2) Lagrange-Muntz function.
inline double eval_lmf(const MuntzNodeSet& ns, int r, int variant, double x,
                       EndpointPolicy policy = EndpointPolicy::Reject) {
  detail::require(variant == 1 || variant == 2, "LMF variant must be 1 or 2");
  const InterpolantKind kind = variant == 1 ? InterpolantKind::NJMI1 : InterpolantKind::NJMI2;
  const double h = eval_h_sigma(ns, r, x);
  const double px = detail::family_prefactor(ns, kind, x, policy);
  if (std::isinf(px)) return h == 0.0 ? 0.0 : std::copysign(px, h);
  return px / detail::node_prefactor(ns, kind, static_cast<std::size_t>(r)) * h;
}

/// Samples f at the nodes.
inline GridFunction interpolate(InterpolantKind /*kind*/, const std::function<double(double)>& f,
                                std::shared_ptr<const MuntzNodeSet> ns) {
  GridFunction gf;
  gf.values.resize(ns->size());
  for (std::size_t r = 0; r < ns->size(); ++r) {
    const double v = f(ns->node(r));
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "function is not finite at node " << r << " (x=" << ns->node(r) << ")";
      throw PreconditionError(os.str());
    }
    gf.values[r] = v;
  }
  gf.nodeset = std::move(ns);
  return gf;
}

/// sum_k gf_k B_k(x) with B_k = h_k, 1L_k or 2L_k according to kind.
inline double eval_interpolant(InterpolantKind kind, const GridFunction& gf, double x,
                               EndpointPolicy policy = EndpointPolicy::Reject) {
  detail::require(gf.nodeset != nullptr, "grid function has no node set");
  const MuntzNodeSet& ns = *gf.nodeset;
  detail::require(gf.values.size() == ns.size(), "grid function length does not match node set");
  ns.check_domain(x);
  const double px = detail::family_prefactor(ns, kind, x, policy);
  double s = 0.0;
  for (std::size_t k = 0; k < ns.size(); ++k) {
    const double h = eval_h_sigma(ns, static_cast<int>(k), x);
    if (h != 0.0) s += gf.values[k] / detail::node_prefactor(ns, kind, k) * h;
  }
  if (std::isinf(px)) return s == 0.0 ? 0.0 : std::copysign(px, s);
  return px * s;
}

}  // namespace muntz
