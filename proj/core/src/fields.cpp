#include "sgnet/fields.hpp"

#include <cmath>
#include <string>

#include "sgnet/error.hpp"

namespace sgnet {

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Exp1: return "exp1";
    case ExperimentKind::Exp2: return "exp2";
    case ExperimentKind::Exp3: return "exp3";
  }
  return "unknown";
}

ExperimentKind parse_experiment(std::string_view name) {
  if (name == "exp1") return ExperimentKind::Exp1;
  if (name == "exp2") return ExperimentKind::Exp2;
  if (name == "exp3") return ExperimentKind::Exp3;
  throw InvalidArgument("unknown experiment '" + std::string(name) + "'");
}

std::string_view to_string(Weighting weighting) {
  return weighting == Weighting::None ? "none" : "a_min_inv";
}

Weighting parse_weighting(std::string_view name) {
  if (name == "none") return Weighting::None;
  if (name == "a_min_inv") return Weighting::AminInverse;
  throw InvalidArgument("unknown weighting '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// KL eigen-system of the squared-exponential kernel

namespace {

const double kSqrt5 = std::sqrt(5.0);
const double kRatio = 2.0 / (3.0 + kSqrt5);
const double kEnvelope = (kSqrt5 - 1.0) / 4.0;
const double kArgScale = std::sqrt(kSqrt5 / 2.0);
const double kNorm = std::pow(5.0, 0.125);

// H_k(z)/sqrt(2^k k!) and its z-derivative, normalized inside the recurrence.
void normalized_physicist_hermite(int k, double z, double& value, double& derivative) {
  double prev = 1.0;
  double cur = std::sqrt(2.0) * z;
  if (k == 0) {
    value = 1.0;
    derivative = 0.0;
    return;
  }
  for (int j = 1; j < k; ++j) {
    const double jj = static_cast<double>(j);
    const double next = z * std::sqrt(2.0 / (jj + 1.0)) * cur - std::sqrt(jj / (jj + 1.0)) * prev;
    prev = cur;
    cur = next;
  }
  value = cur;
  // H_k' = 2k H_{k-1}  =>  normalized: sqrt(2k) * Hhat_{k-1}
  derivative = std::sqrt(2.0 * k) * prev;
}

}  // namespace

double KLEigenpair::value(double x) const {
  double h = 0.0, dh = 0.0;
  normalized_physicist_hermite(index, kArgScale * x, h, dh);
  return kNorm * std::exp(-kEnvelope * x * x) * h;
}

double KLEigenpair::derivative(double x) const {
  double h = 0.0, dh = 0.0;
  normalized_physicist_hermite(index, kArgScale * x, h, dh);
  const double env = std::exp(-kEnvelope * x * x);
  return kNorm * env * (-2.0 * kEnvelope * x * h + kArgScale * dh);
}

KLEigenpair kl_eigenpair(int k) {
  if (k < 0 || k > kMaxKLIndex)
    throw InvalidArgument("KL index " + std::to_string(k) + " outside [0, " +
                          std::to_string(kMaxKLIndex) + "]");
  return KLEigenpair{k, std::pow(kRatio, k + 0.5)};
}

// ---------------------------------------------------------------------------
// Experiment-specific coefficient formulas

std::vector<double> exp1_forcing_coeffs(int P) {
  if (P < 0) throw InvalidArgument("exp1_forcing_coeffs: negative degree");
  const QuadratureRule rule = split_normal_rule(1.0);
  std::vector<double> coeffs(static_cast<std::size_t>(P) + 1, 0.0);
  std::vector<double> h(coeffs.size());
  for (std::size_t q = 0; q < rule.size(); ++q) {
    eval_univariate_all(PolyFamily::HermiteProbabilist, rule.nodes[q], h);
    const double g = rule.weights[q] * std::abs(rule.nodes[q] - 1.0);
    for (std::size_t k = 0; k < coeffs.size(); ++k) coeffs[k] += g * h[k];
  }
  return coeffs;
}

namespace {

constexpr double kExp2Decay = 8.0 / 5.0;

void check_unit_square(std::span<const double> x) {
  if (x.size() != 2) throw InvalidArgument("expected a 2-D spatial point");
  for (double v : x)
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("spatial point outside [0,1]^2");
}

// k-th KL-type term amplitude k^{-8/5} exp(-(x1-x2)^2/k) and its gradient.
void exp2_term(int k, double x1, double x2, double& value, double& d1, double& d2) {
  const double kk = static_cast<double>(k);
  const double diff = x1 - x2;
  value = std::pow(kk, -kExp2Decay) * std::exp(-diff * diff / kk);
  d1 = -2.0 * diff / kk * value;
  d2 = -d1;
}

void exp2_bump(double x1, double x2, double& value, double& d1, double& d2) {
  value = x1 * x2 * (1.0 - x1) * (1.0 - x2);
  d1 = (1.0 - 2.0 * x1) * x2 * (1.0 - x2);
  d2 = (1.0 - 2.0 * x2) * x1 * (1.0 - x1);
}

}  // namespace

DiffusionCoefficients exp2_diffusion_coeffs(int N, std::span<const double> x) {
  if (N < 1) throw InvalidArgument("exp2_diffusion_coeffs: N must be positive");
  check_unit_square(x);
  const double x1 = x[0], x2 = x[1];
  DiffusionCoefficients out;
  out.values.assign(static_cast<std::size_t>(N) + 1, 0.0);
  out.gradients.assign(2 * (static_cast<std::size_t>(N) + 1), 0.0);
  double b = 0.0, b1 = 0.0, b2 = 0.0;
  exp2_bump(x1, x2, b, b1, b2);
  out.values[0] = 3.0 - b;
  out.gradients[0] = -b1;
  out.gradients[1] = -b2;
  const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
  for (int k = 1; k <= N; ++k) {
    double t = 0.0, t1 = 0.0, t2 = 0.0;
    exp2_term(k, x1, x2, t, t1, t2);
    // -(1/2) t (Y_k + 1) = -(1/2) t - (1/(2 sqrt3)) t p_1(Y_k)
    out.values[0] -= 0.5 * t;
    out.gradients[0] -= 0.5 * t1;
    out.gradients[1] -= 0.5 * t2;
    // Y_k is dimension k-1; in graded-lex order at degree 1 it sits at
    // basis index N - k + 1.
    const std::size_t idx = static_cast<std::size_t>(N - k + 1);
    out.values[idx] = -0.5 * inv_sqrt3 * t;
    out.gradients[2 * idx] = -0.5 * inv_sqrt3 * t1;
    out.gradients[2 * idx + 1] = -0.5 * inv_sqrt3 * t2;
  }
  return out;
}

// Gaussian integration by parts, E[g(Y) He_n(Y)] = E[g^(n)(Y)], moves the
// polynomial out of the integrand; the direct form cancels badly for small sigma.
double exp3_factor(int n, double sigma, const QuadratureRule& rule) {
  double mgf = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) mgf += rule.weights[q] * std::exp(sigma * rule.nodes[q]);
  if (n == 0) return mgf;
  return mgf * std::pow(sigma, n) * std::exp(-0.5 * log_factorial(n));
}

double exp3_factor_derivative(int n, double sigma) {
  const double scale = std::exp(0.5 * sigma * sigma - 0.5 * log_factorial(n));
  const double lower = n == 0 ? 0.0 : n * std::pow(sigma, n - 1);
  return scale * (std::pow(sigma, n + 1) + lower);
}

namespace {

void exp3_sigmas(int N, double x, std::vector<double>& sigma, std::vector<double>& dsigma) {
  sigma.resize(static_cast<std::size_t>(N));
  dsigma.resize(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) {
    const KLEigenpair pair = kl_eigenpair(i);
    const double s = std::sqrt(pair.eigenvalue);
    sigma[static_cast<std::size_t>(i)] = s * pair.value(x);
    dsigma[static_cast<std::size_t>(i)] = s * pair.derivative(x);
    if (!std::isfinite(sigma[static_cast<std::size_t>(i)]))
      throw NumericalError("exp3: non-finite KL amplitude at x=" + std::to_string(x));
  }
}

}  // namespace

double exp3_diffusion_coeff(const MultiIndex& nu, double x, int quad_nodes) {
  const QuadratureRule rule = gauss_rule(PolyFamily::HermiteProbabilist, quad_nodes);
  std::vector<double> sigma, dsigma;
  exp3_sigmas(static_cast<int>(nu.size()), x, sigma, dsigma);
  double value = 1.0;
  for (std::size_t i = 0; i < nu.size(); ++i) value *= exp3_factor(nu[i], sigma[i], rule);
  return value;
}

double exp3_diffusion_grad(const MultiIndex& nu, double x) {
  std::vector<double> sigma, dsigma;
  exp3_sigmas(static_cast<int>(nu.size()), x, sigma, dsigma);
  double grad = 0.0;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    double term = exp3_factor_derivative(nu[i], sigma[i]) * dsigma[i];
    for (std::size_t m = 0; m < nu.size(); ++m) {
      if (m == i) continue;
      const double s = sigma[m];
      term *= std::exp(0.5 * s * s - 0.5 * log_factorial(nu[m])) * std::pow(s, nu[m]);
    }
    grad += term;
  }
  return grad;
}

// ---------------------------------------------------------------------------
// Field models

namespace {

class Exp1Model final : public FieldModel {
 public:
  ExperimentKind kind() const override { return ExperimentKind::Exp1; }
  int stochastic_dim() const override { return 1; }
  int spatial_dim() const override { return 1; }
  PolyFamily family() const override { return PolyFamily::HermiteProbabilist; }
  PathwiseSample sample(std::span<const double> y, std::span<const double>) const override {
    PathwiseSample s;
    s.a = 1.0;
    s.f = std::abs(y[0] - 1.0);
    return s;
  }
};

class Exp2Model final : public FieldModel {
 public:
  explicit Exp2Model(int N) : N_(N) {}
  ExperimentKind kind() const override { return ExperimentKind::Exp2; }
  int stochastic_dim() const override { return N_; }
  int spatial_dim() const override { return 2; }
  PolyFamily family() const override { return PolyFamily::LegendreUniform; }
  PathwiseSample sample(std::span<const double> y, std::span<const double> x) const override {
    double b = 0.0, b1 = 0.0, b2 = 0.0;
    exp2_bump(x[0], x[1], b, b1, b2);
    PathwiseSample s;
    s.a = 3.0 - b;
    s.grad_a = {-b1, -b2};
    for (int k = 1; k <= N_; ++k) {
      double t = 0.0, t1 = 0.0, t2 = 0.0;
      exp2_term(k, x[0], x[1], t, t1, t2);
      const double c = 0.5 * (y[static_cast<std::size_t>(k - 1)] + 1.0);
      s.a -= c * t;
      s.grad_a[0] -= c * t1;
      s.grad_a[1] -= c * t2;
    }
    s.f = 1.0;
    return s;
  }

 private:
  int N_;
};

class Exp3Model final : public FieldModel {
 public:
  explicit Exp3Model(int N) : N_(N) {
    for (int i = 0; i < N; ++i) {
      pairs_.push_back(kl_eigenpair(i));
      roots_.push_back(std::sqrt(pairs_.back().eigenvalue));
    }
  }
  ExperimentKind kind() const override { return ExperimentKind::Exp3; }
  int stochastic_dim() const override { return N_; }
  int spatial_dim() const override { return 1; }
  PolyFamily family() const override { return PolyFamily::HermiteProbabilist; }
  PathwiseSample sample(std::span<const double> y, std::span<const double> x) const override {
    double g = 0.0, dg = 0.0;
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
      g += roots_[i] * pairs_[i].value(x[0]) * y[i];
      dg += roots_[i] * pairs_[i].derivative(x[0]) * y[i];
    }
    PathwiseSample s;
    s.a = std::exp(g);
    s.grad_a = {s.a * dg, 0.0};
    s.f = 1.0;
    return s;
  }

 private:
  int N_;
  std::vector<KLEigenpair> pairs_;
  std::vector<double> roots_;
};

}  // namespace

std::shared_ptr<const FieldModel> make_field_model(ExperimentKind kind, int N) {
  if (N < 1) throw InvalidArgument("field model: N must be positive");
  switch (kind) {
    case ExperimentKind::Exp1:
      if (N != 1) throw InvalidArgument("exp1 is driven by a single random variable (N = 1)");
      return std::make_shared<Exp1Model>();
    case ExperimentKind::Exp2: return std::make_shared<Exp2Model>(N);
    case ExperimentKind::Exp3:
      if (N > kMaxKLIndex + 1) throw InvalidArgument("exp3: too many KL terms");
      return std::make_shared<Exp3Model>(N);
  }
  throw InvalidArgument("unknown experiment kind");
}

PathwiseSample sample_pathwise(const FieldModel& model, std::span<const double> y,
                               std::span<const double> x) {
  if (y.size() != static_cast<std::size_t>(model.stochastic_dim()))
    throw InvalidArgument("sample_pathwise: stochastic dimension mismatch");
  if (x.size() != static_cast<std::size_t>(model.spatial_dim()))
    throw InvalidArgument("sample_pathwise: spatial dimension mismatch");
  return model.sample(y, x);
}

// ---------------------------------------------------------------------------
// Spectral fields

SpectralField::SpectralField(std::shared_ptr<const FieldModel> model, OrderedBasis basis,
                             FieldOptions options)
    : model_(std::move(model)),
      basis_(std::move(basis)),
      options_(options),
      spatial_dim_(model_->spatial_dim()) {
  if (!(options_.output_scale > 0.0) || !std::isfinite(options_.output_scale))
    throw InvalidArgument("output_scale must be positive");
}

void SpectralField::prepare(SpectralSample& out) const {
  const std::size_t m1 = basis_.size();
  out.a.assign(m1, 0.0);
  out.grad_a.assign(m1 * static_cast<std::size_t>(spatial_dim_), 0.0);
  out.f.assign(m1, 0.0);
}

void SpectralField::evaluate(std::span<const double> x, SpectralSample& out) const {
  if (x.size() != static_cast<std::size_t>(spatial_dim_))
    throw InvalidArgument("SpectralField: spatial dimension mismatch");
  prepare(out);
  compute(x, out);
  if (options_.output_scale != 1.0)
    for (double& f : out.f) f /= options_.output_scale;
}

void SpectralField::evaluate_energy(std::span<const double> x, SpectralSample& out) const {
  if (options_.weighting == Weighting::None) {
    evaluate(x, out);
    return;
  }
  if (x.size() != static_cast<std::size_t>(spatial_dim_))
    throw InvalidArgument("SpectralField: spatial dimension mismatch");
  prepare(out);
  compute_weighted(x, out);
  if (options_.output_scale != 1.0)
    for (double& f : out.f) f /= options_.output_scale;
}

void SpectralField::compute_weighted(std::span<const double>, SpectralSample&) const {
  throw InvalidArgument("weighted energy operators are not available for " +
                        std::string(to_string(model_->kind())));
}

namespace {

class Exp1Field final : public SpectralField {
 public:
  Exp1Field(std::shared_ptr<const FieldModel> model, const OrderedBasis& basis,
            const FieldOptions& options)
      : SpectralField(std::move(model), basis, options),
        forcing_(exp1_forcing_coeffs(basis.max_degree())) {}

  bool spatially_constant_diffusion() const override { return true; }

 protected:
  void compute(std::span<const double>, SpectralSample& out) const override {
    out.a[0] = 1.0;
    for (std::size_t k = 0; k < out.f.size(); ++k) out.f[k] = forcing_[k];
  }
  // a_min = 1, so weighting is the identity.
  void compute_weighted(std::span<const double> x, SpectralSample& out) const override {
    compute(x, out);
  }

 private:
  std::vector<double> forcing_;
};

class Exp2Field final : public SpectralField {
 public:
  static constexpr double kAmin = 0.65;

  Exp2Field(std::shared_ptr<const FieldModel> model, const OrderedBasis& basis,
            const FieldOptions& options)
      : SpectralField(std::move(model), basis, options) {
    // basis position of each degree-1 index, by dimension
    const auto& idx = basis.indices();
    unit_position_.assign(static_cast<std::size_t>(basis.stochastic_dim()), 0);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (total_degree(idx[k]) != 1) continue;
      for (std::size_t n = 0; n < idx[k].size(); ++n)
        if (idx[k][n] == 1) unit_position_[n] = k;
    }
  }

 protected:
  void compute(std::span<const double> x, SpectralSample& out) const override {
    const int N = basis().stochastic_dim();
    const DiffusionCoefficients c = exp2_diffusion_coeffs(N, x);
    out.a[0] = c.values[0];
    out.grad_a[0] = c.gradients[0];
    out.grad_a[1] = c.gradients[1];
    // exp2_diffusion_coeffs orders by the P = 1 basis; remap in case P > 1.
    for (int n = 0; n < N; ++n) {
      const std::size_t src = static_cast<std::size_t>(N - n);
      const std::size_t dst = unit_position_[static_cast<std::size_t>(n)];
      out.a[dst] = c.values[src];
      out.grad_a[2 * dst] = c.gradients[2 * src];
      out.grad_a[2 * dst + 1] = c.gradients[2 * src + 1];
    }
    out.f[0] = 1.0;
  }
  void compute_weighted(std::span<const double> x, SpectralSample& out) const override {
    compute(x, out);
    for (double& v : out.a) v /= kAmin;
    for (double& v : out.grad_a) v /= kAmin;
    for (double& v : out.f) v /= kAmin;
  }

 private:
  std::vector<std::size_t> unit_position_;
};

class Exp3Field final : public SpectralField {
 public:
  Exp3Field(std::shared_ptr<const FieldModel> model, const OrderedBasis& basis,
            const FieldOptions& options)
      : SpectralField(std::move(model), basis, options),
        N_(basis.stochastic_dim()),
        P1_(static_cast<std::size_t>(basis.max_degree()) + 1),
        rule_(gauss_rule(PolyFamily::HermiteProbabilist, options.quad_nodes)),
        kink_rule_(split_normal_rule(0.0)) {
    for (int i = 0; i < N_; ++i) {
      const KLEigenpair p = kl_eigenpair(i);
      pairs_.push_back(p);
      roots_.push_back(std::sqrt(p.eigenvalue));
    }
    tabulate(rule_, herm_);
    tabulate(kink_rule_, kink_herm_);
    // a_min(y) = exp(-c ||y||_1) with c = sqrt(lambda_0) phi_0(0)
    abs_weight_ = roots_[0] * pairs_[0].value(0.0);
    // weighted forcing E[exp(c|Y|) h_n(Y)] per degree; spatially constant
    weighted_forcing_.assign(P1_, 0.0);
    for (std::size_t q = 0; q < kink_rule_.size(); ++q) {
      const double w = kink_rule_.weights[q] * std::exp(abs_weight_ * std::abs(kink_rule_.nodes[q]));
      for (std::size_t n = 0; n < P1_; ++n) weighted_forcing_[n] += w * kink_herm_[q * P1_ + n];
    }
  }

 protected:
  void compute(std::span<const double> x, SpectralSample& out) const override {
    std::vector<double> sigma, dsigma;
    amplitudes(x[0], sigma, dsigma);
    std::vector<double> factor(static_cast<std::size_t>(N_) * P1_);
    std::vector<double> dfactor(factor.size());
    for (int i = 0; i < N_; ++i) {
      const double s = sigma[static_cast<std::size_t>(i)];
      for (std::size_t n = 0; n < P1_; ++n) {
        double sum = 0.0;
        for (std::size_t q = 0; q < rule_.size(); ++q)
          sum += rule_.weights[q] * std::exp(s * rule_.nodes[q]) * herm_[q * P1_ + n];
        factor[static_cast<std::size_t>(i) * P1_ + n] = sum;
        dfactor[static_cast<std::size_t>(i) * P1_ + n] =
            exp3_factor_derivative(static_cast<int>(n), s);
      }
    }
    assemble(factor, dfactor, dsigma, out);
    out.f[0] = 1.0;
  }

  void compute_weighted(std::span<const double> x, SpectralSample& out) const override {
    std::vector<double> sigma, dsigma;
    amplitudes(x[0], sigma, dsigma);
    std::vector<double> factor(static_cast<std::size_t>(N_) * P1_, 0.0);
    std::vector<double> dfactor(factor.size(), 0.0);
    for (int i = 0; i < N_; ++i) {
      const double s = sigma[static_cast<std::size_t>(i)];
      for (std::size_t q = 0; q < kink_rule_.size(); ++q) {
        const double y = kink_rule_.nodes[q];
        const double w = kink_rule_.weights[q] * std::exp(s * y + abs_weight_ * std::abs(y));
        for (std::size_t n = 0; n < P1_; ++n) {
          factor[static_cast<std::size_t>(i) * P1_ + n] += w * kink_herm_[q * P1_ + n];
          dfactor[static_cast<std::size_t>(i) * P1_ + n] += w * y * kink_herm_[q * P1_ + n];
        }
      }
    }
    assemble(factor, dfactor, dsigma, out);
    const auto& idx = basis().indices();
    for (std::size_t k = 0; k < idx.size(); ++k) {
      double v = 1.0;
      for (int i = 0; i < N_; ++i)
        v *= weighted_forcing_[static_cast<std::size_t>(idx[k][static_cast<std::size_t>(i)])];
      out.f[k] = v;
    }
  }

 private:
  void tabulate(const QuadratureRule& rule, std::vector<double>& table) const {
    table.resize(rule.size() * P1_);
    for (std::size_t q = 0; q < rule.size(); ++q)
      eval_univariate_all(PolyFamily::HermiteProbabilist, rule.nodes[q],
                          std::span<double>(table).subspan(q * P1_, P1_));
  }

  void amplitudes(double x, std::vector<double>& sigma, std::vector<double>& dsigma) const {
    sigma.resize(static_cast<std::size_t>(N_));
    dsigma.resize(static_cast<std::size_t>(N_));
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
      sigma[i] = roots_[i] * pairs_[i].value(x);
      dsigma[i] = roots_[i] * pairs_[i].derivative(x);
      if (!std::isfinite(sigma[i]) || !std::isfinite(dsigma[i]))
        throw NumericalError("exp3: non-finite KL amplitude at x=" + std::to_string(x));
    }
  }

  // a_nu = prod_i F_i[nu_i]; d/dx a_nu = sum_i F_i'[nu_i] sigma_i' prod_{m != i} F_m[nu_m].
  void assemble(const std::vector<double>& factor, const std::vector<double>& dfactor,
                const std::vector<double>& dsigma, SpectralSample& out) const {
    const auto& idx = basis().indices();
    for (std::size_t k = 0; k < idx.size(); ++k) {
      double value = 1.0;
      double grad = 0.0;
      for (int i = 0; i < N_; ++i) {
        const std::size_t off = static_cast<std::size_t>(i) * P1_ +
                                static_cast<std::size_t>(idx[k][static_cast<std::size_t>(i)]);
        grad = grad * factor[off] + value * dfactor[off] * dsigma[static_cast<std::size_t>(i)];
        value *= factor[off];
      }
      out.a[k] = value;
      out.grad_a[k] = grad;
    }
  }

  int N_;
  std::size_t P1_;
  QuadratureRule rule_;
  QuadratureRule kink_rule_;
  std::vector<double> herm_;
  std::vector<double> kink_herm_;
  std::vector<KLEigenpair> pairs_;
  std::vector<double> roots_;
  double abs_weight_ = 0.0;
  std::vector<double> weighted_forcing_;
};

}  // namespace

std::unique_ptr<SpectralField> make_spectral_field(std::shared_ptr<const FieldModel> model,
                                                   const OrderedBasis& basis,
                                                   const FieldOptions& options) {
  if (!model) throw InvalidArgument("make_spectral_field: null model");
  if (basis.stochastic_dim() != model->stochastic_dim())
    throw InvalidArgument("basis stochastic dimension does not match the field model");
  for (PolyFamily f : basis.families())
    if (f != model->family())
      throw InvalidArgument("basis family does not match the field model law");
  if (options.quad_nodes < 1) throw InvalidArgument("quad_nodes must be positive");
  switch (model->kind()) {
    case ExperimentKind::Exp1: return std::make_unique<Exp1Field>(model, basis, options);
    case ExperimentKind::Exp2: return std::make_unique<Exp2Field>(model, basis, options);
    case ExperimentKind::Exp3: return std::make_unique<Exp3Field>(model, basis, options);
  }
  throw InvalidArgument("unknown experiment kind");
}

}  // namespace sgnet
