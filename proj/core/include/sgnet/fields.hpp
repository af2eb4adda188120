#pragma once

// Random diffusion/forcing models of the three experiments, their pathwise
// samplers and their spectral (polynomial chaos) coefficient evaluators.

#include <array>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "sgnet/spectral.hpp"

namespace sgnet {

enum class ExperimentKind {
  Exp1,  ///< a = 1, f = |xi - 1| on (0,1), Hermite, N = 1
  Exp2,  ///< KL-type uniform diffusion on (0,1)^2, f = 1, Legendre
  Exp3,  ///< log-normal KL diffusion on (0,1), f = 1, Hermite
};

std::string_view to_string(ExperimentKind kind);
ExperimentKind parse_experiment(std::string_view name);

/// Scaling of the energy (Ritz) operators: none, or division by a_min(y).
enum class Weighting { None, AminInverse };

std::string_view to_string(Weighting weighting);
Weighting parse_weighting(std::string_view name);

/// Squared-exponential kernel eigenpair, lambda_k = (2/(3+sqrt5))^(k+1/2).
struct KLEigenpair {
  int index = 0;
  double eigenvalue = 0.0;

  double value(double x) const;
  double derivative(double x) const;
};

inline constexpr int kMaxKLIndex = 60;

/// Throws InvalidArgument for k < 0 or k > kMaxKLIndex.
KLEigenpair kl_eigenpair(int k);

/// Hermite coefficients f_0..f_P of |y - 1| (kink-split composite rule).
std::vector<double> exp1_forcing_coeffs(int P);

/// Values a_0..a_N (orthonormal Legendre basis, graded-lex order) and
/// gradients, row-major (N+1) x 2.
struct DiffusionCoefficients {
  std::vector<double> values;
  std::vector<double> gradients;
};

DiffusionCoefficients exp2_diffusion_coeffs(int N, std::span<const double> x);

/// Univariate factor E[exp(sigma Y) h_n(Y)] by `rule` (a Hermite Gauss rule).
double exp3_factor(int n, double sigma, const QuadratureRule& rule);

/// d/dsigma of the closed form exp(sigma^2/2) sigma^n / sqrt(n!).
double exp3_factor_derivative(int n, double sigma);

/// a_nu(x) of the log-normal field truncated to N = nu.size() KL terms.
double exp3_diffusion_coeff(const MultiIndex& nu, double x, int quad_nodes = 40);
double exp3_diffusion_grad(const MultiIndex& nu, double x);

struct PathwiseSample {
  double a = 0.0;
  std::array<double, 2> grad_a{0.0, 0.0};
  double f = 0.0;
};

/// Truncated random field model; pure and immutable.
class FieldModel {
 public:
  virtual ~FieldModel() = default;

  virtual ExperimentKind kind() const = 0;
  virtual int stochastic_dim() const = 0;
  virtual int spatial_dim() const = 0;
  virtual PolyFamily family() const = 0;

  /// Closed-form pathwise a(y,x), grad a(y,x), f(y,x).
  virtual PathwiseSample sample(std::span<const double> y, std::span<const double> x) const = 0;
};

/// Exp1 requires N = 1.
std::shared_ptr<const FieldModel> make_field_model(ExperimentKind kind, int N);

PathwiseSample sample_pathwise(const FieldModel& model, std::span<const double> y,
                               std::span<const double> x);

struct FieldOptions {
  Weighting weighting = Weighting::None;
  int quad_nodes = 40;
  /// Network learns u / s; forcing coefficients are divided by s.
  double output_scale = 1.0;
};

/// Spectral coefficients at one spatial point; grad_a is row-major (M+1) x d.
struct SpectralSample {
  std::vector<double> a;
  std::vector<double> grad_a;
  std::vector<double> f;
};

/// Coefficient evaluators a_i(x), grad a_i(x), f_k(x) bound to a basis.
class SpectralField {
 public:
  virtual ~SpectralField() = default;

  std::size_t size() const { return basis_.size(); }
  int spatial_dim() const { return spatial_dim_; }
  const OrderedBasis& basis() const { return basis_; }
  const FieldOptions& options() const { return options_; }
  const FieldModel& model() const { return *model_; }

  /// Unweighted coefficients (strong form, validation, reconstruction).
  void evaluate(std::span<const double> x, SpectralSample& out) const;
  /// Coefficients of the energy functional; weighted when configured.
  void evaluate_energy(std::span<const double> x, SpectralSample& out) const;

  /// True when a(y,x) does not depend on x (grad a_i == 0 everywhere).
  virtual bool spatially_constant_diffusion() const { return false; }

 protected:
  SpectralField(std::shared_ptr<const FieldModel> model, OrderedBasis basis, FieldOptions options);

  virtual void compute(std::span<const double> x, SpectralSample& out) const = 0;
  virtual void compute_weighted(std::span<const double> x, SpectralSample& out) const;

 private:
  void prepare(SpectralSample& out) const;

  std::shared_ptr<const FieldModel> model_;
  OrderedBasis basis_;
  FieldOptions options_;
  int spatial_dim_;
};

/// Validates basis family and dimension against the model.
std::unique_ptr<SpectralField> make_spectral_field(std::shared_ptr<const FieldModel> model,
                                                   const OrderedBasis& basis,
                                                   const FieldOptions& options = {});

}  // namespace sgnet
