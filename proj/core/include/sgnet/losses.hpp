#pragma once

// Strong (Galerkin residual) and Ritz (energy) risks of the coupled spectral
// system, and the pathwise validation error.

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "sgnet/fields.hpp"
#include "sgnet/net.hpp"
#include "sgnet/spectral.hpp"

namespace sgnet {

enum class LossKind { Galerkin, Ritz };

std::string_view to_string(LossKind kind);
LossKind parse_loss(std::string_view name);

/// Columns of X sorted lexicographically; losses reduce in this order.
Eigen::MatrixXd canonical_order(const Eigen::MatrixXd& X);

/// Spectral coefficients at batch points, point-major (n x (M+1)).
struct FieldBatch {
  Eigen::MatrixXd a;
  std::vector<Eigen::MatrixXd> grad_a;
  Eigen::MatrixXd f;
};

/// `energy` selects the (possibly weighted) coefficients of the Ritz functional.
FieldBatch sample_field(const SpectralField& field, const Eigen::MatrixXd& X, bool energy);

struct RiskResult {
  double risk = 0.0;
  Eigen::VectorXd grad;
};

/// Holds references; field and tensor must outlive the assembler.
class LossAssembler {
 public:
  LossAssembler(const SpectralField& field, const GalerkinTensor& G);

  std::size_t size() const { return G_.dim(); }
  const SpectralField& field() const { return field_; }

  /// A_jk(x) = sum_i a_i(x) G_ijk.
  Eigen::MatrixXd operator_matrix(std::span<const double> x, bool energy = false) const;
  /// B_jk(x)[m] = sum_i d_m a_i(x) G_ijk.
  std::vector<Eigen::MatrixXd> operator_gradient(std::span<const double> x) const;

  double strong_risk_value(const BranchedModel& model, const Eigen::MatrixXd& X) const;
  RiskResult strong_risk(const MultiBranchNet& net, const Eigen::MatrixXd& X) const;

  double ritz_risk_value(const BranchedModel& model, const Eigen::MatrixXd& X) const;
  RiskResult ritz_risk(const MultiBranchNet& net, const Eigen::MatrixXd& X) const;

  RiskResult risk(LossKind kind, const MultiBranchNet& net, const Eigen::MatrixXd& X) const;

 private:
  double strong_core(const BranchedModel& model, const Eigen::MatrixXd& Xs, BatchEval& ev,
                     BatchAdjoint* adj) const;
  double ritz_core(const BranchedModel& model, const Eigen::MatrixXd& Xs, BatchEval& ev,
                   BatchAdjoint* adj) const;
  void check(const BranchedModel& model, const Eigen::MatrixXd& X) const;

  const SpectralField& field_;
  const GalerkinTensor& G_;
  std::vector<Eigen::MatrixXd> slices_;
};

struct ValidationResult {
  double error = 0.0;
  /// Monte Carlo standard error over the stochastic samples.
  double std_error = 0.0;
};

/// Mean squared pathwise strong residual over fixed spatial points and
/// seeded germ samples; the sample set is drawn once.
class ValidationSet {
 public:
  ValidationSet(const SpectralField& field, Eigen::MatrixXd points, std::size_t samples,
                std::uint64_t seed);

  /// 128 Sobol points in 1-D, a 32 x 32 cell-centred grid in 2-D.
  static Eigen::MatrixXd default_points(int spatial_dim);

  std::size_t samples() const { return static_cast<std::size_t>(basis_values_.rows()); }
  const Eigen::MatrixXd& points() const { return points_; }
  /// p_k(y^(s)), one row per sample.
  const Eigen::MatrixXd& basis_values() const { return basis_values_; }

  ValidationResult evaluate(const BranchedModel& model) const;

 private:
  Eigen::MatrixXd points_;
  Eigen::MatrixXd basis_values_;  // S x (M+1)
  FieldBatch coeffs_;             // at points_
};

}  // namespace sgnet
