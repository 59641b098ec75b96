#pragma once

/// \file
/// Mapped Gauss-Jacobi-Muntz rules on [0,b] and the two reweighted variants.

#include <cmath>
#include <functional>
#include <sstream>
#include <vector>

#include "muntz/error.hpp"
#include "muntz/jacobi.hpp"

namespace muntz {

/// Parameter bundle shared by every Muntz construction.
struct MuntzBasisParams {
  JacobiParams jac;
  double sigma = 1.0;
  double eta = 0.0;
  double mu = 0.0;
  double b = 1.0;

  double alpha() const { return jac.alpha; }
  double beta() const { return jac.beta; }

  void validate() const {
    jac.validate();
    detail::require(sigma > 0.0 && std::isfinite(sigma), "sigma must be positive");
    detail::require(b > 0.0 && std::isfinite(b), "b must be positive");
    detail::require(mu >= 0.0 && std::isfinite(mu), "mu must be non-negative");
    detail::require(std::isfinite(eta), "eta must be finite");
  }
};

enum class RuleKind { Base, Gjmqr1, Gjmqr2 };

/// Nodes and weights on (0,b). `ref_nodes` keeps the Gauss-Jacobi nodes t_j so
/// that x_j^sigma = b^sigma (1+t_j)/2 and b^sigma - x_j^sigma = b^sigma (1-t_j)/2
/// are available without cancellation.
struct QuadRule {
  RuleKind kind = RuleKind::Base;
  MuntzBasisParams params;
  int n = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> ref_nodes;

  std::size_t size() const { return nodes.size(); }
  double x_sigma(std::size_t j) const {
    return std::pow(params.b, params.sigma) * 0.5 * (1.0 + ref_nodes[j]);
  }
  double cut_sigma(std::size_t j) const {
    return std::pow(params.b, params.sigma) * 0.5 * (1.0 - ref_nodes[j]);
  }
};

/// log of (1/sigma)(b^sigma/2)^(alpha+beta+1).
inline double log_mapped_scale(const MuntzBasisParams& p) {
  return -std::log(p.sigma) +
         (p.alpha() + p.beta() + 1.0) * (p.sigma * std::log(p.b) - std::log(2.0));
}

/// Squared norm of the n-th JMF: (1/sigma)(b^sigma/2)^(alpha+beta+1) gamma_n.
inline double gamma_star(int n, const MuntzBasisParams& p) {
  p.validate();
  return std::exp(log_mapped_scale(p)) * gamma_n(n, p.jac);
}

/// (n+1)-point rule exact on span{x^{k sigma}, k <= 2n+1} against
/// x^{sigma(beta+1)-1} (b^sigma - x^sigma)^alpha.
inline QuadRule mapped_rule(int n, const MuntzBasisParams& p) {
  p.validate();
  const GaussRule g = gauss_jacobi(n, p.jac);
  QuadRule r;
  r.kind = RuleKind::Base;
  r.params = p;
  r.n = n;
  r.ref_nodes = g.nodes;
  r.nodes.resize(g.size());
  r.weights.resize(g.size());
  const double scale = std::exp(log_mapped_scale(p));
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double u = 0.5 * (1.0 + g.nodes[j]);
    r.nodes[j] = p.b * std::exp(std::log(u) / p.sigma);
    r.weights[j] = scale * g.weights[j];
  }
  for (std::size_t j = 0; j < r.size(); ++j) {
    const bool inside = r.nodes[j] > 0.0 && r.nodes[j] < p.b;
    const bool ordered = j == 0 || r.nodes[j] > r.nodes[j - 1];
    if (!inside || !ordered) {
      std::ostringstream os;
      os << "mapped node " << j << " (x=" << r.nodes[j] << ") collapsed; sigma too small for n=" << n;
      throw NumericError(os.str());
    }
  }
  return r;
}

/// Reweights a base rule into GJMQR-1 (variant 1) or GJMQR-2 (variant 2).
inline QuadRule gjmqr_weights(const QuadRule& base, int variant) {
  detail::require(base.kind == RuleKind::Base, "gjmqr_weights needs a base rule");
  detail::require(variant == 1 || variant == 2, "GJMQR variant must be 1 or 2");
  const MuntzBasisParams& p = base.params;
  QuadRule r = base;
  r.kind = variant == 1 ? RuleKind::Gjmqr1 : RuleKind::Gjmqr2;
  for (std::size_t j = 0; j < r.size(); ++j) {
    const double lx = std::log(base.nodes[j]);
    double e = 0.0;
    if (variant == 1) {
      e = 2.0 * p.sigma * (p.eta + p.mu - p.beta()) * lx;
    } else {
      e = -2.0 * p.alpha() * std::log(base.cut_sigma(j)) - 2.0 * p.sigma * p.eta * lx;
    }
    r.weights[j] = base.weights[j] * std::exp(e);
  }
  return r;
}

/// sum_j w_j f(x_j).
inline double integrate(const std::function<double(double)>& f, const QuadRule& rule) {
  double s = 0.0;
  for (std::size_t j = 0; j < rule.size(); ++j) {
    const double v = f(rule.nodes[j]);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "integrand is not finite at node " << j << " (x=" << rule.nodes[j] << ")";
      throw PreconditionError(os.str());
    }
    s += rule.weights[j] * v;
  }
  return s;
}

}  // namespace muntz
