#include "sgnet/validate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "sgnet/fields.hpp"
#include "sgnet/losses.hpp"
#include "sgnet/metrics.hpp"
#include "sgnet/net.hpp"
#include "sgnet/reference.hpp"
#include "sgnet/sobol.hpp"
#include "sgnet/spectral.hpp"

namespace sgnet {
namespace {

std::string fmt(const char* name, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s=%.3e", name, v);
  return buf;
}

double rel(double got, double want, double floor) {
  return std::abs(got - want) / std::max(std::abs(want), floor);
}

bool gram_identity(std::string& detail) {
  double worst = 0.0;
  for (PolyFamily fam : {PolyFamily::HermiteProbabilist, PolyFamily::LegendreUniform})
    for (int N = 1; N <= 3; ++N)
      for (int P : {0, 4, 10}) {
        OrderedBasis basis(N, P, fam);
        const auto rule = gauss_rule(fam, P + 2);
        const std::size_t M1 = basis.size(), nq = rule.size();
        Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(M1), static_cast<Eigen::Index>(M1));
        std::vector<double> y(static_cast<std::size_t>(N));
        Eigen::VectorXd p(static_cast<Eigen::Index>(M1));
        std::size_t total = 1;
        for (int n = 0; n < N; ++n) total *= nq;
        for (std::size_t flat = 0; flat < total; ++flat) {
          std::size_t rem = flat;
          double w = 1.0;
          for (int n = 0; n < N; ++n) {
            y[static_cast<std::size_t>(n)] = rule.nodes[rem % nq];
            w *= rule.weights[rem % nq];
            rem /= nq;
          }
          basis.eval_all(y, std::span<double>(p.data(), M1));
          gram.noalias() += w * p * p.transpose();
        }
        gram -= Eigen::MatrixXd::Identity(gram.rows(), gram.cols());
        worst = std::max(worst, gram.cwiseAbs().maxCoeff());
      }
  detail = fmt("max|gram-I|", worst);
  return worst <= 1e-10;
}

bool index_ordering(std::string& detail) {
  const std::vector<MultiIndex> expected = {{0, 0}, {0, 1}, {1, 0}, {0, 2}, {1, 1}, {2, 0}};
  const bool order = enumerate_indices(2, 2) == expected;
  const std::size_t dim = basis_dim(3, 7);
  detail = std::string("ordering ") + (order ? "ok" : "wrong") + ", basis_dim(3,7)=" + std::to_string(dim);
  return order && dim == 120;
}

// <h_i h_j, h_k> for orthonormal probabilists' Hermite polynomials.
double hermite_linearization(int i, int j, int k) {
  if ((i + j + k) % 2 != 0) return 0.0;
  const int s = (i + j + k) / 2;
  if (s < i || s < j || s < k) return 0.0;
  return std::exp(0.5 * (std::lgamma(i + 1.0) + std::lgamma(j + 1.0) + std::lgamma(k + 1.0)) -
                  std::lgamma(s - i + 1.0) - std::lgamma(s - j + 1.0) - std::lgamma(s - k + 1.0));
}

bool tensor_linearization(std::string& detail) {
  double worst = 0.0;
  for (int P : {1, 5, 10, 15}) {
    const auto G = galerkin_tensor(OrderedBasis(1, P, PolyFamily::HermiteProbabilist));
    for (int i = 0; i <= P; ++i)
      for (int j = 0; j <= P; ++j)
        for (int k = 0; k <= P; ++k) {
          const double want = hermite_linearization(i, j, k);
          const double got = G(static_cast<std::size_t>(i), static_cast<std::size_t>(j), static_cast<std::size_t>(k));
          worst = std::max(worst, std::abs(got - want) / std::max(1.0, std::abs(want)));
        }
  }
  detail = fmt("max rel", worst);
  return worst <= 1e-9;
}

bool tensor_symmetry(std::string& detail) {
  bool symmetric = true;
  double slice = 0.0;
  for (PolyFamily fam : {PolyFamily::HermiteProbabilist, PolyFamily::LegendreUniform}) {
    const auto G = galerkin_tensor(OrderedBasis(3, 3, fam));
    const std::size_t d = G.dim();
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        for (std::size_t k = 0; k < d; ++k) {
          const double v = G(i, j, k);
          symmetric = symmetric && v == G(i, k, j) && v == G(j, i, k) && v == G(j, k, i) && v == G(k, i, j) &&
                      v == G(k, j, i);
          if (i == 0) slice = std::max(slice, std::abs(v - (j == k ? 1.0 : 0.0)));
        }
  }
  detail = std::string(symmetric ? "bitwise symmetric" : "asymmetric") + ", " + fmt("max|G0-I|", slice);
  return symmetric && slice <= 1e-12;
}

MultiBranchNet perturbed_net(int dim, int branches, std::uint64_t seed) {
  MultiBranchNet net(replicate_spec(make_branch_spec(dim, {7, 5}, Activation::Swish, Activation::Sigmoid), branches),
                     seed);
  Eigen::VectorXd theta = net.parameters();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 0.3);
  for (Eigen::Index i = 0; i < theta.size(); ++i) theta[i] += n(rng);
  net.set_parameters(theta);
  return net;
}

bool net_input_derivatives(std::string& detail) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  double worst_g = 0.0, worst_l = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 1 + trial % 2;
    const auto net = perturbed_net(dim, 2, 300 + static_cast<std::uint64_t>(trial));
    std::vector<double> x(static_cast<std::size_t>(dim));
    for (double& v : x) v = u(rng);
    const auto ev = net.evaluate_point(x, 2);
    for (int k = 0; k < 2; ++k) {
      double lap = 0.0;
      for (int m = 0; m < dim; ++m) {
        auto at = [&](double h) {
          auto xs = x;
          xs[static_cast<std::size_t>(m)] += h;
          return net.evaluate_point(xs, 0).U(k, 0);
        };
        const double g = (at(1e-5) - at(-1e-5)) / 2e-5;
        worst_g = std::max(worst_g, rel(ev.grad[static_cast<std::size_t>(m)](k, 0), g, 1e-3));
        lap += (at(1e-4) - 2.0 * ev.U(k, 0) + at(-1e-4)) / 1e-8;
      }
      worst_l = std::max(worst_l, rel(ev.lap(k, 0), lap, 1e-3));
    }
  }
  detail = fmt("grad rel", worst_g) + ", " + fmt("lap rel", worst_l);
  return worst_g <= 1e-6 && worst_l <= 1e-4;
}

bool loss_gradients(std::string& detail) {
  double worst = 0.0;
  struct Case {
    ExperimentKind kind;
    int N, P;
  };
  for (const Case c : {Case{ExperimentKind::Exp1, 1, 2}, Case{ExperimentKind::Exp2, 2, 1}, Case{ExperimentKind::Exp3, 2, 2}}) {
    const auto model = make_field_model(c.kind, c.N);
    OrderedBasis basis(c.N, c.P, model->family());
    const auto field = make_spectral_field(model, basis);
    const auto G = galerkin_tensor(basis);
    LossAssembler loss(*field, G);
    auto net = perturbed_net(field->spatial_dim(), static_cast<int>(basis.size()), 41);
    SobolStream stream(field->spatial_dim());
    const Eigen::MatrixXd X = stream.batch(8);
    for (LossKind kind : {LossKind::Galerkin, LossKind::Ritz}) {
      const RiskResult r = loss.risk(kind, net, X);
      std::mt19937_64 rng(5);
      std::uniform_int_distribution<Eigen::Index> pick(0, static_cast<Eigen::Index>(net.param_count()) - 1);
      for (int t = 0; t < 8; ++t) {
        const Eigen::Index i = pick(rng);
        const Eigen::VectorXd theta = net.parameters();
        auto value_at = [&](double h) {
          Eigen::VectorXd shifted = theta;
          shifted[i] += h;
          net.set_parameters(shifted);
          return kind == LossKind::Galerkin ? loss.strong_risk_value(net, X) : loss.ritz_risk_value(net, X);
        };
        const double fd = (value_at(1e-6) - value_at(-1e-6)) / 2e-6;
        net.set_parameters(theta);
        worst = std::max(worst, rel(r.grad[i], fd, 1e-4));
      }
    }
  }
  detail = fmt("max rel", worst);
  return worst <= 1e-5;
}

bool lognormal_factors(std::string& detail) {
  const auto rule = gauss_rule(PolyFamily::HermiteProbabilist, 40);
  double worst = 0.0;
  for (double sigma = 0.25; sigma <= 3.0 + 1e-12; sigma += 0.25)
    for (int n = 0; n <= 10; ++n) {
      const double closed =
          std::exp(0.5 * sigma * sigma) * std::pow(sigma, n) / std::sqrt(std::tgamma(n + 1.0));
      worst = std::max(worst, rel(exp3_factor(n, sigma, rule), closed, 1e-300));
    }
  detail = fmt("max rel", worst);
  return worst <= 1e-10;
}

struct Exp1Setup {
  std::vector<double> f;
  std::unique_ptr<SpectralField> field;
  GalerkinTensor G;
};

Exp1Setup exp1_setup(int P) {
  const auto model = make_field_model(ExperimentKind::Exp1, 1);
  OrderedBasis basis(1, P, model->family());
  Exp1Setup s{exp1_forcing_coeffs(P), make_spectral_field(model, basis), galerkin_tensor(basis)};
  return s;
}

FunctionModel exp1_coefficients(const std::vector<double>& f) {
  return FunctionModel(static_cast<int>(f.size()), 1,
                       [f](int k, std::span<const double> x, double& u, std::span<double> g, double& lap) {
                         const double c = 0.5 * f[static_cast<std::size_t>(k)];
                         u = c * (x[0] - x[0] * x[0]);
                         g[0] = c * (1.0 - 2.0 * x[0]);
                         lap = -2.0 * c;
                       });
}

bool exact_exp1_risks(std::string& detail) {
  auto s = exp1_setup(6);
  LossAssembler loss(*s.field, s.G);
  const auto exact = exp1_coefficients(s.f);
  SobolStream stream(1);
  const Eigen::MatrixXd X = stream.batch(10000);
  double sum = 0.0;
  for (double v : s.f) sum += v * v;
  const double strong = loss.strong_risk_value(exact, X);
  const double ritz = loss.ritz_risk_value(exact, X);
  ValidationSet val(*s.field, ValidationSet::default_points(1), 2000, 3);
  const double v = val.evaluate(exact).error;
  detail = fmt("strong", strong) + ", " + fmt("ritz rel", rel(ritz, -sum / 24.0, 1e-300)) + ", " + fmt("validation", v);
  return strong <= 1e-20 && rel(ritz, -sum / 24.0, 1e-300) <= 0.01 && v <= 1e-12;
}

bool fem_exp1_nodes(std::string& detail) {
  const Mesh1D mesh(64);
  double worst = 0.0;
  for (double xi : {-2.0, -0.3, 0.0, 1.1, 2.5}) {
    const Eigen::VectorXd u = fem_pathwise(
        mesh, [](double) { return 1.0; },
        [xi](double) { return std::abs(xi - 1.0); });
    for (int i = 0; i < mesh.nodes(); ++i)
      worst = std::max(worst, std::abs(u[i] - exp1_exact(xi, mesh.node(i))));
  }
  detail = fmt("max nodal error", worst);
  return worst <= 1e-12;
}

bool coupled_exp1_decouples(std::string& detail) {
  auto s = exp1_setup(4);
  const auto sol = sga_fem_coupled(Mesh1D(128), *s.field, s.G);
  const auto grid = fem_grid(Mesh1D(128));
  const auto table = tabulate(sol, grid);
  const auto exact = tabulate(exp1_coefficients(s.f), grid);
  const auto d = spectral_h1_distance(table, exact, grid);
  detail = fmt("spectral distance", d.rel_error);
  return d.rel_error <= 1e-10;
}

bool metric_identity(std::string& detail) {
  auto s = exp1_setup(3);
  const auto grid = trapezoid_grid(1, 257);
  const auto table = tabulate(exp1_coefficients(s.f), grid);
  const auto self = spectral_h1_distance(table, table, grid);
  detail = fmt("self distance", self.rel_error);
  return self.rel_error == 0.0;
}

}  // namespace

std::vector<PropertyCheck> property_checks() {
  return {
      {"basis.gram_identity", gram_identity},
      {"basis.index_ordering", index_ordering},
      {"tensor.hermite_linearization", tensor_linearization},
      {"tensor.symmetry", tensor_symmetry},
      {"net.input_derivatives", net_input_derivatives},
      {"losses.parameter_gradients", loss_gradients},
      {"fields.lognormal_factors", lognormal_factors},
      {"losses.exact_exp1", exact_exp1_risks},
      {"reference.fem_exp1_nodes", fem_exp1_nodes},
      {"reference.coupled_exp1", coupled_exp1_decouples},
      {"metrics.self_distance", metric_identity},
  };
}

std::vector<CheckResult> run_property_checks(const std::string& filter) {
  std::vector<CheckResult> out;
  for (const auto& check : property_checks()) {
    if (!filter.empty() && check.name.find(filter) == std::string::npos) continue;
    CheckResult r;
    r.name = check.name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      r.passed = check.run(r.detail);
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(std::move(r));
  }
  return out;
}

int report_property_checks(const std::vector<CheckResult>& results, std::ostream& out) {
  int failures = 0;
  for (const auto& r : results) {
    failures += r.passed ? 0 : 1;
    char time[32];
    std::snprintf(time, sizeof time, "%.2fs", r.seconds);
    out << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.detail << ", " << time << ")\n";
  }
  return failures;
}

}  // namespace sgnet
