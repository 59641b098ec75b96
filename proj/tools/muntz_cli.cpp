// Command-line front end: quadrature rules, basis samples, differentiation
// matrix sweeps, interpolation, the collocation solvers and the reference experiments.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "muntz/diff_matrices.hpp"
#include "muntz/experiments.hpp"
#include "muntz/jacobi_muntz.hpp"
#include "muntz/lagrange_muntz.hpp"
#include "muntz/quadrature.hpp"
#include "muntz/solvers.hpp"
#include "muntz/table.hpp"

namespace {

using muntz::Table;
namespace ex = muntz::experiments;

constexpr int kSchemaVersion = 1;

struct Options {
  std::optional<double> alpha, beta, sigma, eta, mu, b;
  std::optional<int> n;
  std::vector<int> sweep;
  std::vector<double> mus;
  std::string output;
  std::string format = "csv";
  std::string variant = "base";
  std::string kind = "first";
  std::string interpolant = "mji";
  std::string side = "left";
  std::string norm = "one";
  std::string problem;
  std::string function = "sqrt_sin";
  std::string experiment;
  int degree = 10;
  int samples = 101;
  double lambda = 1.0;
  double epsilon = 0.1;
  double dt = 5e-4;
  std::optional<double> final_time;
  double rtol = 1e-10;
  double atol = 1e-10;
};

void apply(const Options& o, muntz::MuntzBasisParams& p) {
  if (o.alpha) p.jac.alpha = *o.alpha;
  if (o.beta) p.jac.beta = *o.beta;
  if (o.sigma) p.sigma = *o.sigma;
  if (o.eta) p.eta = *o.eta;
  if (o.mu) p.mu = *o.mu;
  if (o.b) p.b = *o.b;
  p.validate();
}

std::vector<int> sizes(const Options& o, int fallback) {
  if (!o.sweep.empty()) return o.sweep;
  return {o.n.value_or(fallback)};
}

nlohmann::json cell_json(const muntz::Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (std::isfinite(*d)) return *d;
    return muntz::format_double(*d);
  }
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  return std::get<std::string>(c);
}

void emit(const Options& o, const Table& t) {
  std::ofstream file;
  if (!o.output.empty()) {
    file.open(o.output, std::ios::binary);
    if (!file) throw muntz::PreconditionError("cannot open output file " + o.output);
  }
  std::ostream& os = o.output.empty() ? std::cout : file;
  if (o.format == "json") {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["columns"] = t.columns;
    j["rows"] = nlohmann::json::array();
    for (const auto& row : t.rows) {
      nlohmann::json r = nlohmann::json::array();
      for (const auto& c : row) r.push_back(cell_json(c));
      j["rows"].push_back(r);
    }
    os << j.dump(1) << '\n';
  } else {
    muntz::write_csv(os, t);
  }
}

Table nodal_table(const muntz::SolverReport& r, const muntz::Fn1& exact) {
  Table t;
  t.columns = {"x", "y", "exact", "abs_err"};
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    const double e = exact ? exact(r.nodes[i]) : std::nan("");
    t.add({r.nodes[i], r.solution[i], e, std::abs(r.solution[i] - e)});
  }
  return t;
}

Table run_quad(const Options& o) {
  muntz::MuntzBasisParams p;
  apply(o, p);
  muntz::QuadRule rule = muntz::mapped_rule(o.n.value_or(8), p);
  if (o.variant == "gjmqr1") rule = muntz::gjmqr_weights(rule, 1);
  else if (o.variant == "gjmqr2") rule = muntz::gjmqr_weights(rule, 2);
  else if (o.variant != "base") throw muntz::PreconditionError("variant must be base, gjmqr1 or gjmqr2");
  Table t;
  t.columns = {"j", "node", "weight"};
  for (std::size_t j = 0; j < rule.size(); ++j) {
    t.add({static_cast<std::int64_t>(j), rule.nodes[j], rule.weights[j]});
  }
  return t;
}

Table run_basis(const Options& o) {
  muntz::MuntzBasisParams p;
  apply(o, p);
  if (o.kind != "first" && o.kind != "second") throw muntz::PreconditionError("kind must be first or second");
  const muntz::JmfSpec spec{o.kind == "second" ? muntz::JmfKind::Second : muntz::JmfKind::First,
                            o.degree, p};
  Table t;
  t.columns = {"x", "value", "ek_derivative"};
  for (int q = 0; q < o.samples; ++q) {
    const double x = p.b * (q + 0.5) / o.samples;
    t.add({x, muntz::eval_jmf(spec, x), muntz::ek_deriv_jmf_closed(spec, x)});
  }
  return t;
}

muntz::CondNorm norm_of(const Options& o) {
  if (o.norm == "two") return muntz::CondNorm::Two;
  if (o.norm == "one") return muntz::CondNorm::One;
  throw muntz::PreconditionError("norm must be one or two");
}

Table run_diffmat(const Options& o) {
  const muntz::Side side = o.side == "right" ? muntz::Side::Right : muntz::Side::Left;
  if (o.side != "left" && o.side != "right") throw muntz::PreconditionError("side must be left or right");
  muntz::MuntzBasisParams p = side == muntz::Side::Left ? ex::ex1_params(0.5) : ex::ex2_params(0.5);
  apply(o, p);
  std::vector<double> mus = o.mus;
  if (mus.empty()) mus = {p.mu};
  return ex::diffmat_table(ex::diffmat_sweep(side, p, o.degree, sizes(o, 45), mus, norm_of(o)));
}

double builtin_function(const std::string& name, double x) {
  if (name == "sqrt_sin") return std::sqrt(x) * std::sin(std::sqrt(x));
  if (name == "x2_sin") return x * x * std::sin(x);
  if (name == "exp") return std::exp(-x);
  throw muntz::PreconditionError("function must be sqrt_sin, x2_sin or exp");
}

Table run_interp(const Options& o) {
  muntz::MuntzBasisParams p{{-0.5, 1.0}, 0.5, 0.0, 0.0, 10.0};
  apply(o, p);
  muntz::InterpolantKind kind = muntz::InterpolantKind::MJI;
  if (o.interpolant == "njmi1") kind = muntz::InterpolantKind::NJMI1;
  else if (o.interpolant == "njmi2") kind = muntz::InterpolantKind::NJMI2;
  else if (o.interpolant != "mji") throw muntz::PreconditionError("interpolant must be mji, njmi1 or njmi2");
  builtin_function(o.function, 1.0);
  auto f = [&](double x) { return builtin_function(o.function, x); };
  auto ns = std::make_shared<const muntz::MuntzNodeSet>(p, o.n.value_or(20));
  const muntz::GridFunction gf = muntz::interpolate(kind, f, ns);
  Table t;
  t.columns = {"x", "f", "interpolant", "abs_err"};
  for (int q = 0; q < o.samples; ++q) {
    const double x = p.b * (q + 0.5) / o.samples;
    const double v = muntz::eval_interpolant(kind, gf, x);
    t.add({x, f(x), v, std::abs(v - f(x))});
  }
  return t;
}

Table run_solve_linear(const Options& o) {
  const std::string problem = o.problem.empty() ? "cauchy-euler" : o.problem;
  std::function<muntz::LinearFdeProblem(int)> make;
  if (problem == "cauchy-euler") {
    make = [&](int n) {
      auto p = ex::cauchy_euler_problem(n, o.mu.value_or(1.0), o.eta.value_or(-1.0),
                                        o.sigma.value_or(0.5), o.lambda);
      apply(o, p.basis);
      return p;
    };
  } else if (problem == "second-order") {
    make = [&](int n) {
      auto p = ex::second_order_problem(n, o.mu.value_or(2.0), o.sigma.value_or(0.5), o.lambda);
      apply(o, p.basis);
      return p;
    };
  } else if (problem == "zero") {
    make = [&](int n) {
      auto p = ex::cauchy_euler_problem(n);
      p.rhs = [](double) { return 0.0; };
      p.exact = [](double) { return 0.0; };
      apply(o, p.basis);
      p.orders = {p.basis.mu};
      return p;
    };
  } else {
    throw muntz::PreconditionError("linear problem must be cauchy-euler, second-order or zero");
  }
  if (o.sweep.empty()) {
    const auto p = make(o.n.value_or(50));
    return nodal_table(muntz::solve_linear_fde(p), p.exact);
  }
  std::vector<ex::ConvergenceRow> rows = ex::parallel_map<ex::ConvergenceRow>(
      o.sweep.size(), [&](std::size_t i) {
        const auto r = muntz::solve_linear_fde(make(o.sweep[i]));
        return ex::ConvergenceRow{o.sweep[i], r.E_infty, r.cond, r.cond_one, 0};
      });
  return ex::convergence_table(rows);
}

Table run_solve_nonlinear(const Options& o) {
  if (!o.problem.empty() && o.problem != "riccati") {
    throw muntz::PreconditionError("nonlinear problem must be riccati");
  }
  auto make = [&](int n) {
    auto p = ex::riccati_problem(n, o.mu.value_or(1.0), o.eta.value_or(-1.0), o.sigma.value_or(1.0));
    apply(o, p.basis);
    return p;
  };
  if (o.sweep.empty()) {
    const auto p = make(o.n.value_or(50));
    return nodal_table(muntz::solve_nonlinear_fde(p), p.exact);
  }
  auto rows = ex::parallel_map<ex::ConvergenceRow>(o.sweep.size(), [&](std::size_t i) {
    const auto r = muntz::solve_nonlinear_fde(make(o.sweep[i]));
    return ex::ConvergenceRow{o.sweep[i], r.E_infty, r.cond, r.cond_one, r.iterations};
  });
  return ex::convergence_table(rows);
}

Table run_solve_pde(const Options& o) {
  auto p = ex::pde_problem(o.n.value_or(10), o.rtol, o.atol);
  apply(o, p.basis);
  const muntz::SolverReport r = muntz::solve_pde_mol(p);
  std::cerr << "E_infty " << muntz::format_double(r.E_infty) << '\n';
  return ex::evolution_table(r, p.exact);
}

Table run_solve_burgers(const Options& o) {
  auto p = ex::burgers_problem(o.sigma.value_or(0.5), o.n.value_or(20), o.epsilon, o.dt,
                               o.final_time.value_or(10.0));
  apply(o, p.basis);
  const muntz::SolverReport r = muntz::solve_burgers(p);
  std::cerr << "E_infty " << muntz::format_double(r.E_infty) << '\n';
  return ex::evolution_table(r, p.exact);
}

Table run_reference(const Options& o) {
  const std::string& e = o.experiment;
  std::vector<double> mus = o.mus.empty() ? std::vector<double>{0.25, 0.5, 0.75} : o.mus;
  if (e == "ex1") {
    return ex::diffmat_table(
        ex::ex1(o.sweep.empty() ? std::vector<int>{45, 95, 145, 165} : o.sweep, mus, norm_of(o)));
  }
  if (e == "ex2") {
    return ex::diffmat_table(
        ex::ex2(o.sweep.empty() ? std::vector<int>{45, 95, 145, 175} : o.sweep, mus, norm_of(o)));
  }
  if (e == "ex3") {
    return ex::convergence_table(
        ex::ex3(o.sweep.empty() ? std::vector<int>{10, 20, 30, 40, 50} : o.sweep));
  }
  if (e == "ex4") {
    const std::vector<double> m = o.mus.empty() ? std::vector<double>{1.2, 1.4, 1.6, 1.8, 2.0} : o.mus;
    return ex::ex4({0.5, 1.0}, m, o.n.value_or(50), o.samples);
  }
  if (e == "riccati") {
    return ex::convergence_table(
        ex::riccati(o.sweep.empty() ? std::vector<int>{10, 20, 30, 40, 50} : o.sweep));
  }
  if (e == "pde") {
    const auto p = ex::pde_problem();
    return ex::evolution_table(muntz::solve_pde_mol(p), p.exact);
  }
  if (e == "burgers") {
    const std::vector<double> sigmas{0.5, 1.0};
    auto reports = ex::parallel_map<muntz::SolverReport>(sigmas.size(), [&](std::size_t i) {
      return muntz::solve_burgers(ex::burgers_problem(sigmas[i]));
    });
    Table t;
    t.columns = {"sigma", "t", "max_abs_err"};
    for (std::size_t i = 0; i < sigmas.size(); ++i) {
      for (std::size_t k = 0; k < reports[i].times.size(); ++k) {
        t.add({sigmas[i], reports[i].times[k], reports[i].error_history[k]});
      }
    }
    return t;
  }
  throw muntz::PreconditionError("experiment must be ex1, ex2, ex3, ex4, riccati, pde or burgers");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Muntz spectral collocation toolkit"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value run configuration file");
  app.allow_config_extras(CLI::config_extras_mode::error);

  Options o;
  app.add_option("--alpha", o.alpha, "Jacobi alpha");
  app.add_option("--beta", o.beta, "Jacobi beta");
  app.add_option("--sigma", o.sigma, "Muntz exponent scale");
  app.add_option("--eta", o.eta, "EK weight shift");
  app.add_option("--mu", o.mu, "fractional order");
  app.add_option("--b", o.b, "right endpoint");
  app.add_option("-n,--n", o.n, "degree N (N+1 nodes)");
  app.add_option("--sweep", o.sweep, "list of N values")->delimiter(',');
  app.add_option("--mus", o.mus, "list of orders for diffmat sweeps")->delimiter(',');
  app.add_option("-o,--output", o.output, "output path (stdout when empty)");
  app.add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--variant", o.variant, "quad: base, gjmqr1 or gjmqr2");
  app.add_option("--kind", o.kind, "basis: first or second");
  app.add_option("--interpolant", o.interpolant, "interp: mji, njmi1 or njmi2");
  app.add_option("--side", o.side, "diffmat: left or right");
  app.add_option("--norm", o.norm, "condition number norm: one or two");
  app.add_option("--problem", o.problem, "solver problem preset");
  app.add_option("--function", o.function, "interp: sqrt_sin, x2_sin or exp");
  app.add_option("--degree", o.degree, "JMF degree k");
  app.add_option("--samples", o.samples, "number of sample points");
  app.add_option("--lambda", o.lambda, "zeroth-order coefficient");
  app.add_option("--epsilon", o.epsilon, "Burgers viscosity");
  app.add_option("--dt", o.dt, "Burgers time step");
  app.add_option("--T", o.final_time, "final time");
  app.add_option("--rtol", o.rtol, "PDE relative tolerance");
  app.add_option("--atol", o.atol, "PDE absolute tolerance");

  std::map<std::string, std::function<Table(const Options&)>> commands{
      {"quad", run_quad},
      {"basis", run_basis},
      {"diffmat", run_diffmat},
      {"interp", run_interp},
      {"solve-linear", run_solve_linear},
      {"solve-nonlinear", run_solve_nonlinear},
      {"solve-pde", run_solve_pde},
      {"solve-burgers", run_solve_burgers},
      {"paper-repro", run_reference},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, fn] : commands) subs[name] = app.add_subcommand(name);
  subs["quad"]->description("mapped Gauss-Jacobi-Muntz nodes and weights");
  subs["basis"]->description("JMF samples and closed-form EK derivatives");
  subs["diffmat"]->description("EK differentiation matrix accuracy and conditioning");
  subs["interp"]->description("nodal interpolation of a built-in function");
  subs["solve-linear"]->description("linear EK FDE by collocation");
  subs["solve-nonlinear"]->description("nonlinear EK FDE by Newton collocation");
  subs["solve-pde"]->description("fractional PDE by the method of lines");
  subs["solve-burgers"]->description("Burgers' equation, cutoff basis");
  subs["paper-repro"]->description("reproduce a reference experiment");
  subs["paper-repro"]->add_option("experiment", o.experiment, "ex1|ex2|ex3|ex4|riccati|pde|burgers")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: validation: " << e.what() << '\n';
    return 2;
  }

  try {
    for (const auto& [name, sub] : subs) {
      if (sub->parsed()) emit(o, commands.at(name)(o));
    }
  } catch (const muntz::PreconditionError& e) {
    std::cerr << "error: validation: " << e.what() << '\n';
    return 2;
  } catch (const muntz::NumericError& e) {
    std::cerr << "error: numeric: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
