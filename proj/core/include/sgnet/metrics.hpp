#pragma once

// Relative L2(Omega; H1(D)) error between a pathwise reference and a
// polynomial chaos approximation: trapezoid rules in space, Monte Carlo in y.

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sgnet/fields.hpp"
#include "sgnet/net.hpp"
#include "sgnet/reference.hpp"
#include "sgnet/spectral.hpp"

namespace sgnet {

/// Quadrature points for the value term and for the gradient term; the two
/// sets coincide for trapezoid grids and differ for FEM grids.
struct SpatialGrid {
  int spatial_dim = 1;
  Eigen::MatrixXd value_points;  // d x n
  Eigen::VectorXd value_weights;
  Eigen::MatrixXd grad_points;
  Eigen::VectorXd grad_weights;
  std::string descriptor;
};

/// Composite trapezoid rule with `points` nodes per direction on [0,1]^d.
SpatialGrid trapezoid_grid(int spatial_dim, int points);
/// 257 points in 1-D, 65 x 65 in 2-D.
SpatialGrid default_grid(int spatial_dim);
/// Trapezoid over the mesh nodes for values, midpoint rule over element
/// centres for gradients (where P1/Q1 gradients are single-valued).
SpatialGrid fem_grid(const Mesh1D& mesh);
SpatialGrid fem_grid(const Mesh2D& mesh);

/// Chaos coefficient functions on a grid: values K x n_value, grads[m] K x n_grad.
struct CoefficientTable {
  Eigen::MatrixXd values;
  std::vector<Eigen::MatrixXd> grads;

  std::size_t size() const { return static_cast<std::size_t>(values.rows()); }
};

/// Branch outputs times `scale` (the output scale of the field).
CoefficientTable tabulate(const BranchedModel& model, const SpatialGrid& grid, double scale = 1.0);
/// P1/Q1 interpolation of a coupled solution.
CoefficientTable tabulate(const CoupledSolution& solution, const SpatialGrid& grid);

/// Interpolates nodal P1/Q1 data at arbitrary points of [0,1]^d.
class NodalInterpolant {
 public:
  NodalInterpolant(int spatial_dim, int cells);

  double value(const Eigen::VectorXd& nodal, std::span<const double> x) const;
  void gradient(const Eigen::VectorXd& nodal, std::span<const double> x, std::span<double> out) const;

 private:
  int dim_;
  int cells_;
};

/// u(y, .) and grad u(y, .) on a grid.
class PathwiseReference {
 public:
  virtual ~PathwiseReference() = default;

  virtual int spatial_dim() const = 0;
  /// u at grid.value_points, grad (d x n) at grid.grad_points.
  virtual void evaluate(std::span<const double> y, const SpatialGrid& grid, Eigen::VectorXd& u,
                        Eigen::MatrixXd& grad) const = 0;
};

/// u = 1/2 |y_1 - 1| (x - x^2).
class Exp1Reference final : public PathwiseReference {
 public:
  int spatial_dim() const override { return 1; }
  void evaluate(std::span<const double> y, const SpatialGrid& grid, Eigen::VectorXd& u,
                Eigen::MatrixXd& grad) const override;
};

/// One pathwise FEM solve per sample.
class FemReference final : public PathwiseReference {
 public:
  FemReference(std::shared_ptr<const FieldModel> model, Mesh1D mesh);
  FemReference(std::shared_ptr<const FieldModel> model, Mesh2D mesh);

  int spatial_dim() const override { return model_->spatial_dim(); }
  void evaluate(std::span<const double> y, const SpatialGrid& grid, Eigen::VectorXd& u,
                Eigen::MatrixXd& grad) const override;

  Eigen::VectorXd solve(std::span<const double> y) const;

 private:
  std::shared_ptr<const FieldModel> model_;
  int cells_;
};

/// Sum_k c_k(x) p_k(y) from a table tabulated on the same grid.
class ChaosReference final : public PathwiseReference {
 public:
  ChaosReference(const OrderedBasis& basis, CoefficientTable table, int spatial_dim);

  int spatial_dim() const override { return dim_; }
  void evaluate(std::span<const double> y, const SpatialGrid& grid, Eigen::VectorXd& u,
                Eigen::MatrixXd& grad) const override;

 private:
  OrderedBasis basis_;
  CoefficientTable table_;
  int dim_;
};

struct ErrorReport {
  double rel_error = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
  std::size_t n_mc = 0;
  std::string grid;
  /// Standard error of the Monte Carlo numerator estimate (0 when exact).
  double mc_std_error = 0.0;

  static std::string csv_header();
  std::string csv_row() const;
};

/// Draws y^(m) from the basis germ law with `seed` (same stream as
/// mc_pathwise_reference) and averages the pathwise H1 distances.
ErrorReport rel_h1_error(const PathwiseReference& reference, const CoefficientTable& approx,
                         const OrderedBasis& basis, std::size_t n_mc, const SpatialGrid& grid,
                         std::uint64_t seed);

ErrorReport rel_h1_error(const PathwiseReference& reference, const BranchedModel& model, double scale,
                         const OrderedBasis& basis, std::size_t n_mc, const SpatialGrid& grid,
                         std::uint64_t seed);

/// Exact in y by orthonormality: sum_k |c_k - r_k|_{H1}^2 / sum_k |r_k|_{H1}^2.
ErrorReport spectral_h1_distance(const CoefficientTable& approx, const CoefficientTable& reference,
                                 const SpatialGrid& grid);

}  // namespace sgnet
