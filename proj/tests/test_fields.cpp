#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>

#include "sgnet/error.hpp"
#include "sgnet/fields.hpp"

namespace sgnet {
namespace {

// H_k(z) by the physicist's recurrence without normalization.
double physicist_hermite(int k, double z) {
  double prev = 1.0, cur = 2.0 * z;
  if (k == 0) return 1.0;
  for (int j = 1; j < k; ++j) {
    const double next = 2.0 * z * cur - 2.0 * j * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double kl_oracle(int k, double x) {
  const double s5 = std::sqrt(5.0);
  return std::pow(5.0, 0.125) / std::sqrt(std::pow(2.0, k) * factorial(k)) *
         std::exp(-(s5 - 1.0) / 4.0 * x * x) * physicist_hermite(k, std::sqrt(s5 / 2.0) * x);
}

double normal_pdf(double y) { return std::exp(-0.5 * y * y) / std::sqrt(2.0 * M_PI); }
double normal_cdf(double y) { return 0.5 * std::erfc(-y / std::sqrt(2.0)); }

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

TEST(KL, EigenpairValues) {
  const auto p0 = kl_eigenpair(0);
  EXPECT_NEAR(p0.eigenvalue, 0.618034, 1e-6);
  EXPECT_NEAR(p0.value(0.0), 1.222845, 1e-6);
  const auto p1 = kl_eigenpair(1);
  EXPECT_NEAR(p1.eigenvalue, 0.236068, 1e-6);
  for (int k = 0; k < 20; ++k)
    EXPECT_NEAR(kl_eigenpair(k + 1).eigenvalue / kl_eigenpair(k).eigenvalue,
                2.0 / (3.0 + std::sqrt(5.0)), 1e-14);
  EXPECT_THROW(kl_eigenpair(61), InvalidArgument);
  EXPECT_THROW(kl_eigenpair(-1), InvalidArgument);
  EXPECT_NO_THROW(kl_eigenpair(60).value(0.7));
}

TEST(KL, EigenfunctionsMatchDirectFormula) {
  for (int k = 0; k <= 12; ++k)
    for (double x : {0.0, 0.13, 0.5, 0.91, 1.0}) {
      EXPECT_NEAR(kl_eigenpair(k).value(x), kl_oracle(k, x), 1e-12 * std::max(1.0, std::abs(kl_oracle(k, x))));
      const double h = 1e-5;
      const double fd = (kl_eigenpair(k).value(x + h) - kl_eigenpair(k).value(x - h)) / (2 * h);
      EXPECT_NEAR(kl_eigenpair(k).derivative(x), fd, 1e-8 * std::max(1.0, std::abs(fd)));
    }
}

TEST(Exp1, ForcingCoefficients) {
  const auto f = exp1_forcing_coeffs(40);
  EXPECT_NEAR(f[0], 2.0 * normal_pdf(1.0) + (2.0 * normal_cdf(1.0) - 1.0), 1e-12);
  EXPECT_NEAR(f[1], 2.0 * normal_cdf(-1.0) - 1.0, 1e-12);
  EXPECT_NEAR(f[0], 1.16663, 1e-5);
  EXPECT_NEAR(f[1], -0.68269, 1e-5);
  for (std::size_t i = 6; i < f.size(); ++i) EXPECT_LT(std::abs(f[i]), std::abs(f[2])) << i;
  double partial = 0.0, previous = -1.0;
  for (double fi : f) {
    partial += fi * fi;
    EXPECT_LE(partial, 2.0);
    EXPECT_GE(partial, previous);
    previous = partial;
  }
  EXPECT_GT(partial, 1.99);
}

TEST(Exp2, CoefficientValues) {
  const std::vector<double> x = {0.5, 0.5};
  const auto c = exp2_diffusion_coeffs(1, x);
  EXPECT_NEAR(c.values[0], 2.4375, 1e-14);
  EXPECT_NEAR(c.values[1], -0.5 / std::sqrt(3.0), 1e-14);
  const std::vector<double> outside = {1.2, 0.5};
  EXPECT_THROW(exp2_diffusion_coeffs(1, outside), InvalidArgument);
}

TEST(Exp2, PathwiseReconstructionIsExact) {
  for (int N : {1, 3, 7}) {
    auto model = make_field_model(ExperimentKind::Exp2, N);
    OrderedBasis basis(N, 1, PolyFamily::LegendreUniform);
    auto field = make_spectral_field(model, basis);
    std::mt19937_64 rng(17 + N);
    std::uniform_real_distribution<double> u01(0.0, 1.0), u11(-1.0, 1.0);
    SpectralSample s;
    std::vector<double> p(basis.size());
    for (int t = 0; t < 100; ++t) {
      std::vector<double> x = {u01(rng), u01(rng)}, y(static_cast<std::size_t>(N));
      for (double& v : y) v = u11(rng);
      field->evaluate(x, s);
      basis.eval_all(y, p);
      double a = 0.0, g1 = 0.0, g2 = 0.0;
      for (std::size_t i = 0; i < basis.size(); ++i) {
        a += s.a[i] * p[i];
        g1 += s.grad_a[2 * i] * p[i];
        g2 += s.grad_a[2 * i + 1] * p[i];
      }
      const auto ref = sample_pathwise(*model, y, x);
      EXPECT_NEAR(a, ref.a, 1e-12);
      EXPECT_NEAR(g1, ref.grad_a[0], 1e-12);
      EXPECT_NEAR(g2, ref.grad_a[1], 1e-12);
    }
  }
}

TEST(Exp2, HigherDegreeCoefficientsVanish) {
  auto model = make_field_model(ExperimentKind::Exp2, 2);
  OrderedBasis basis(2, 2, PolyFamily::LegendreUniform);
  auto field = make_spectral_field(model, basis);
  SpectralSample s;
  const std::vector<double> x = {0.3, 0.8};
  field->evaluate(x, s);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    if (total_degree(basis.index(k)) >= 2) {
      EXPECT_EQ(s.a[k], 0.0);
    }
  }
}

TEST(Exp2, BoundsHold) {
  auto model = make_field_model(ExperimentKind::Exp2, 25);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u01(0.0, 1.0), u11(-1.0, 1.0);
  std::vector<double> y(25), x(2);
  for (int t = 0; t < 100000; ++t) {
    for (double& v : y) v = u11(rng);
    x = {u01(rng), u01(rng)};
    const double a = model->sample(y, x).a;
    ASSERT_GE(a, 0.65);
    ASSERT_LE(a, 3.0);
  }
  const std::vector<double> minus(25, -1.0);
  const std::vector<double> xm = {0.3, 0.6};
  EXPECT_NEAR(model->sample(minus, xm).a, 3.0 - 0.3 * 0.6 * 0.7 * 0.4, 1e-15);
}

TEST(Exp3, FactorClosedForm) {
  const auto rule = gauss_rule(PolyFamily::HermiteProbabilist, 40);
  for (double sigma : {0.25, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0})
    for (int n = 0; n <= 10; ++n) {
      const double closed = std::exp(0.5 * sigma * sigma) * std::pow(sigma, n) / std::sqrt(factorial(n));
      EXPECT_LT(rel_err(exp3_factor(n, sigma, rule), closed), 1e-10) << sigma << " " << n;
    }
  EXPECT_NEAR(exp3_factor(0, 0.0, rule), 1.0, 1e-15);
  // direct projection of exp(sigma y) h_n(y) agrees in absolute terms
  std::vector<double> h(11);
  for (double sigma : {0.1, 0.9, 2.0})
    for (int n = 0; n <= 10; ++n) {
      double direct = 0.0;
      for (std::size_t q = 0; q < rule.size(); ++q) {
        eval_univariate_all(PolyFamily::HermiteProbabilist, rule.nodes[q], std::span<double>(h.data(), n + 1));
        direct += rule.weights[q] * std::exp(sigma * rule.nodes[q]) * h[static_cast<std::size_t>(n)];
      }
      EXPECT_NEAR(exp3_factor(n, sigma, rule), direct, 1e-10 * std::exp(0.5 * sigma * sigma));
    }
  EXPECT_NEAR(exp3_factor(3, 0.0, rule), 0.0, 1e-15);
}

TEST(Exp3, FactorDerivativeMatchesFiniteDifference) {
  for (double sigma : {-1.2, 0.3, 1.1, 2.4})
    for (int n = 0; n <= 6; ++n) {
      auto closed = [n](double s) {
        return std::exp(0.5 * s * s) * std::pow(s, n) / std::sqrt(factorial(n));
      };
      const double h = 1e-6;
      const double fd = (closed(sigma + h) - closed(sigma - h)) / (2 * h);
      EXPECT_NEAR(exp3_factor_derivative(n, sigma), fd, 1e-7 * std::max(1.0, std::abs(fd)));
    }
}

TEST(Exp3, CoefficientGradientsMatchFiniteDifference) {
  for (const MultiIndex& nu : enumerate_indices(3, 3))
    for (double x : {0.07, 0.33, 0.5, 0.81, 0.96}) {
      const double h = 1e-5;
      const double fd = (exp3_diffusion_coeff(nu, x + h) - exp3_diffusion_coeff(nu, x - h)) / (2 * h);
      const double g = exp3_diffusion_grad(nu, x);
      EXPECT_LE(std::abs(g - fd), 1e-6 * std::max(std::abs(fd), 1e-3)) << x;
    }
  // zero multi-index: chain rule on exp(1/2 sum sigma^2)
  const double x = 0.4;
  double s2 = 0.0, ssd = 0.0;
  for (int i = 0; i < 2; ++i) {
    const auto p = kl_eigenpair(i);
    const double s = std::sqrt(p.eigenvalue) * p.value(x);
    s2 += s * s;
    ssd += s * std::sqrt(p.eigenvalue) * p.derivative(x);
  }
  EXPECT_NEAR(exp3_diffusion_grad({0, 0}, x), std::exp(0.5 * s2) * ssd, 1e-12);
}

TEST(Exp3, SpectralFieldMatchesStandaloneFunctions) {
  auto model = make_field_model(ExperimentKind::Exp3, 2);
  OrderedBasis basis(2, 3, PolyFamily::HermiteProbabilist);
  auto field = make_spectral_field(model, basis);
  SpectralSample s;
  const std::vector<double> x = {0.37};
  field->evaluate(x, s);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    EXPECT_NEAR(s.a[k], exp3_diffusion_coeff(basis.index(k), x[0]), 1e-14);
    EXPECT_NEAR(s.grad_a[k], exp3_diffusion_grad(basis.index(k), x[0]), 1e-12);
  }
  EXPECT_EQ(s.f[0], 1.0);
  for (std::size_t k = 1; k < basis.size(); ++k) EXPECT_EQ(s.f[k], 0.0);
}

TEST(Exp3, PathwiseSamples) {
  auto model = make_field_model(ExperimentKind::Exp3, 3);
  const std::vector<double> zero(3, 0.0);
  const std::vector<double> x = {0.2};
  const auto s = model->sample(zero, x);
  EXPECT_EQ(s.a, 1.0);
  EXPECT_EQ(s.f, 1.0);
  auto e1 = make_field_model(ExperimentKind::Exp1, 1);
  const std::vector<double> one = {1.0};
  EXPECT_EQ(e1->sample(one, x).a, 1.0);
  EXPECT_EQ(e1->sample(one, x).f, 0.0);
  EXPECT_THROW(make_field_model(ExperimentKind::Exp1, 2), InvalidArgument);
  const std::vector<double> wrong(2, 0.0);
  EXPECT_THROW(sample_pathwise(*model, wrong, x), InvalidArgument);
}

// Monte Carlo projection <a(.,x), p_k> against the spectral evaluators.
void check_mc_projection(ExperimentKind kind, int N, int P, PolyFamily fam, Weighting weighting) {
  auto model = make_field_model(kind, N);
  OrderedBasis basis(N, P, fam);
  FieldOptions opts;
  opts.weighting = weighting;
  auto field = make_spectral_field(model, basis, opts);
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> u11(-1.0, 1.0), u01(0.02, 0.98);
  const int samples = 100000;
  const double c_abs = std::sqrt(kl_eigenpair(0).eigenvalue) * kl_eigenpair(0).value(0.0);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> x(static_cast<std::size_t>(model->spatial_dim()));
    for (double& v : x) v = u01(rng);
    SpectralSample s;
    if (weighting == Weighting::None) field->evaluate(x, s);
    else field->evaluate_energy(x, s);
    std::vector<double> sum(basis.size(), 0.0), sumsq(basis.size(), 0.0), p(basis.size());
    std::vector<double> y(static_cast<std::size_t>(N));
    for (int m = 0; m < samples; ++m) {
      double l1 = 0.0;
      for (double& v : y) {
        v = fam == PolyFamily::HermiteProbabilist ? normal(rng) : u11(rng);
        l1 += std::abs(v);
      }
      double a = model->sample(y, x).a;
      if (weighting == Weighting::AminInverse) a *= std::exp(c_abs * l1);
      basis.eval_all(y, p);
      for (std::size_t k = 0; k < basis.size(); ++k) {
        sum[k] += a * p[k];
        sumsq[k] += a * a * p[k] * p[k];
      }
    }
    for (std::size_t k = 0; k < basis.size(); ++k) {
      const double mean = sum[k] / samples;
      const double se = std::sqrt((sumsq[k] / samples - mean * mean) / samples);
      EXPECT_LE(std::abs(mean - s.a[k]), 3.0 * se + 1e-12)
          << to_string(kind) << " k=" << k << " x=" << x[0];
    }
  }
}

TEST(Reconstruction, MonteCarloProjectionOracle) {
  check_mc_projection(ExperimentKind::Exp2, 3, 1, PolyFamily::LegendreUniform, Weighting::None);
  check_mc_projection(ExperimentKind::Exp3, 2, 2, PolyFamily::HermiteProbabilist, Weighting::None);
}

// Fine trapezoid rule for int g(y) h_n(y) phi(y) dy over [-12, 12].
double trapezoid_projection(const std::function<double(double)>& g, int n) {
  const int steps = 400000;
  const double a = -12.0, b = 12.0, dy = (b - a) / steps;
  std::vector<double> h(static_cast<std::size_t>(n) + 1);
  double sum = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double y = a + i * dy;
    eval_univariate_all(PolyFamily::HermiteProbabilist, y, h);
    const double w = (i == 0 || i == steps) ? 0.5 : 1.0;
    sum += w * g(y) * h.back() * normal_pdf(y);
  }
  return sum * dy;
}

TEST(Reconstruction, WeightedLogNormalAgainstTrapezoidOracle) {
  auto model = make_field_model(ExperimentKind::Exp3, 2);
  OrderedBasis basis(2, 3, PolyFamily::HermiteProbabilist);
  FieldOptions opts;
  opts.weighting = Weighting::AminInverse;
  auto field = make_spectral_field(model, basis, opts);
  const double c = std::sqrt(kl_eigenpair(0).eigenvalue) * kl_eigenpair(0).value(0.0);
  for (double x : {0.11, 0.5, 0.92}) {
    SpectralSample s;
    const std::vector<double> xs = {x};
    field->evaluate_energy(xs, s);
    for (std::size_t k = 0; k < basis.size(); ++k) {
      double want = 1.0;
      for (int i = 0; i < 2; ++i) {
        const auto p = kl_eigenpair(i);
        const double sigma = std::sqrt(p.eigenvalue) * p.value(x);
        want *= trapezoid_projection(
            [&](double y) { return std::exp(sigma * y + c * std::abs(y)); },
            basis.index(k)[static_cast<std::size_t>(i)]);
      }
      EXPECT_NEAR(s.a[k], want, 1e-8 * std::max(1.0, std::abs(want))) << "k=" << k << " x=" << x;
    }
  }
}

TEST(Exp3, WeightedForcingIsSpatiallyConstant) {
  auto model = make_field_model(ExperimentKind::Exp3, 2);
  OrderedBasis basis(2, 2, PolyFamily::HermiteProbabilist);
  FieldOptions opts;
  opts.weighting = Weighting::AminInverse;
  auto field = make_spectral_field(model, basis, opts);
  SpectralSample a, b;
  const std::vector<double> x1 = {0.1}, x2 = {0.9};
  field->evaluate_energy(x1, a);
  field->evaluate_energy(x2, b);
  EXPECT_EQ(a.f, b.f);
  // E[exp(c|Y|)] = 2 exp(c^2/2) Phi(c), squared for two dimensions
  const double c = std::sqrt(kl_eigenpair(0).eigenvalue) * kl_eigenpair(0).value(0.0);
  const double one_dim = 2.0 * std::exp(0.5 * c * c) * normal_cdf(c);
  EXPECT_NEAR(a.f[0], one_dim * one_dim, 1e-10);
  // weighted gradients vs finite differences
  SpectralSample lo, hi, mid;
  const double x0 = 0.42, h = 1e-5;
  const std::vector<double> xl = {x0 - h}, xh = {x0 + h}, xm = {x0};
  field->evaluate_energy(xl, lo);
  field->evaluate_energy(xh, hi);
  field->evaluate_energy(xm, mid);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const double fd = (hi.a[k] - lo.a[k]) / (2 * h);
    EXPECT_LE(std::abs(mid.grad_a[k] - fd), 1e-6 * std::max(std::abs(fd), 1e-3));
  }
}

TEST(Fields, GradientsMatchFiniteDifference) {
  auto model = make_field_model(ExperimentKind::Exp2, 4);
  OrderedBasis basis(4, 1, PolyFamily::LegendreUniform);
  auto field = make_spectral_field(model, basis);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  const double h = 1e-5;
  for (int t = 0; t < 20; ++t) {
    const double x1 = u(rng), x2 = u(rng);
    SpectralSample s, p1, m1, p2, m2;
    std::vector<double> x = {x1, x2};
    field->evaluate(x, s);
    std::vector<double> xp1 = {x1 + h, x2}, xm1 = {x1 - h, x2}, xp2 = {x1, x2 + h}, xm2 = {x1, x2 - h};
    field->evaluate(xp1, p1);
    field->evaluate(xm1, m1);
    field->evaluate(xp2, p2);
    field->evaluate(xm2, m2);
    for (std::size_t k = 0; k < basis.size(); ++k) {
      const double fd1 = (p1.a[k] - m1.a[k]) / (2 * h), fd2 = (p2.a[k] - m2.a[k]) / (2 * h);
      EXPECT_LE(std::abs(s.grad_a[2 * k] - fd1), 1e-6 * std::max(std::abs(fd1), 1e-3));
      EXPECT_LE(std::abs(s.grad_a[2 * k + 1] - fd2), 1e-6 * std::max(std::abs(fd2), 1e-3));
    }
  }
}

TEST(Fields, FactoryValidation) {
  auto model = make_field_model(ExperimentKind::Exp3, 2);
  EXPECT_THROW(make_spectral_field(model, OrderedBasis(2, 2, PolyFamily::LegendreUniform)),
               InvalidArgument);
  EXPECT_THROW(make_spectral_field(model, OrderedBasis(3, 2, PolyFamily::HermiteProbabilist)),
               InvalidArgument);
  FieldOptions bad;
  bad.output_scale = 0.0;
  EXPECT_THROW(make_spectral_field(model, OrderedBasis(2, 1, PolyFamily::HermiteProbabilist), bad),
               InvalidArgument);
  EXPECT_EQ(parse_experiment("exp2"), ExperimentKind::Exp2);
  EXPECT_THROW(parse_experiment("exp9"), InvalidArgument);
}

TEST(Fields, OutputScaleDividesForcing) {
  auto model = make_field_model(ExperimentKind::Exp1, 1);
  OrderedBasis basis(1, 3, PolyFamily::HermiteProbabilist);
  FieldOptions opts;
  opts.output_scale = 4.0;
  auto scaled = make_spectral_field(model, basis, opts);
  auto plain = make_spectral_field(model, basis);
  SpectralSample a, b;
  const std::vector<double> x = {0.5};
  scaled->evaluate(x, a);
  plain->evaluate(x, b);
  for (std::size_t k = 0; k < basis.size(); ++k) EXPECT_DOUBLE_EQ(a.f[k] * 4.0, b.f[k]);
}

}  // namespace
}  // namespace sgnet
