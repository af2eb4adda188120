#pragma once

// Reference solutions: the analytic exp1 solution, pathwise P1/Q1 finite
// elements and the coupled stochastic Galerkin finite element system.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "sgnet/fields.hpp"
#include "sgnet/spectral.hpp"

namespace sgnet {

/// u = 1/2 |xi - 1| (x - x^2).
double exp1_exact(double xi, double x);
double exp1_exact_derivative(double xi, double x);

struct Mesh1D {
  int n_elem = 512;

  explicit Mesh1D(int n = 512);
  double h() const { return 1.0 / n_elem; }
  int nodes() const { return n_elem + 1; }
  double node(int i) const { return static_cast<double>(i) / n_elem; }
};

/// n x n uniform quadrilaterals on the unit square; node (i, j) at (i/n, j/n)
/// has index j * (n + 1) + i.
struct Mesh2D {
  int n = 64;

  explicit Mesh2D(int cells = 64);
  double h() const { return 1.0 / n; }
  int nodes() const { return (n + 1) * (n + 1); }
};

using Coefficient1D = std::function<double(double)>;
using Coefficient2D = std::function<double(double, double)>;

/// Nodal values (boundary included, zero) of the P1 solution of
/// -(a u')' = f, u(0) = u(1) = 0, with 2-point Gauss element quadrature.
Eigen::VectorXd fem_pathwise(const Mesh1D& mesh, const Coefficient1D& a, const Coefficient1D& f);

/// Q1 solution with 2x2 Gauss quadrature, solved by conjugate gradients.
Eigen::VectorXd fem_pathwise(const Mesh2D& mesh, const Coefficient2D& a, const Coefficient2D& f);

/// Assembled block system of the coupled spectral problem. Unknown (a, i) =
/// interior node a (in interior_nodes order), block i, sits at a * (M+1) + i.
struct CoupledSystem {
  int spatial_dim = 1;
  int cells = 0;
  std::size_t blocks = 0;
  Eigen::SparseMatrix<double> K;
  Eigen::VectorXd F;

  Eigen::Index dof() const { return F.size(); }
};

/// Global indices of the interior nodes of a uniform 1-D or 2-D mesh.
std::vector<Eigen::Index> interior_nodes(int spatial_dim, int cells);

/// `energy` uses the (possibly weighted) energy coefficients of the field.
/// 3-point Gauss per element and direction.
CoupledSystem assemble_coupled(const Mesh1D& mesh, const SpectralField& field, const GalerkinTensor& G,
                               bool energy = false);
/// Memory grows like (M+1)^2 (n-1)^2; callers gate this behind a flag.
CoupledSystem assemble_coupled(const Mesh2D& mesh, const SpectralField& field, const GalerkinTensor& G,
                               bool energy = false);

struct CoupledSolution {
  int spatial_dim = 1;
  int cells = 0;
  /// Nodal coefficient vectors, nodes x (M + 1), boundary rows zero.
  Eigen::MatrixXd u;
  int iterations = 0;
  double relative_residual = 0.0;

  std::size_t blocks() const { return static_cast<std::size_t>(u.cols()); }
};

/// Block-Jacobi preconditioned CG on the coupled system (tolerance 1e-12,
/// at most 10 * dof iterations, otherwise NumericalError).
CoupledSolution solve_coupled(const CoupledSystem& system);
CoupledSolution sga_fem_coupled(const Mesh1D& mesh, const SpectralField& field, const GalerkinTensor& G,
                                bool energy = false);
CoupledSolution sga_fem_coupled(const Mesh2D& mesh, const SpectralField& field, const GalerkinTensor& G,
                                bool energy = false);

/// Interior unknowns of a solution in the system ordering.
Eigen::VectorXd pack_interior(const CoupledSolution& sol);

/// 1/2 u^T K u - F^T u.
double discrete_energy(const CoupledSystem& system, const Eigen::VectorXd& u);

/// Smallest Ritz value after `steps` Lanczos iterations (full reorthogonalisation).
double lanczos_min_eigenvalue(const Eigen::SparseMatrix<double>& A, int steps = 30, std::uint64_t seed = 1);

void write_coupled_solution(std::ostream& os, const CoupledSolution& sol);
CoupledSolution read_coupled_solution(std::istream& is);

struct PathwiseSolution {
  std::size_t index = 0;
  std::vector<double> y;
  Eigen::VectorXd nodal;
};

using PathwiseSink = std::function<void(const PathwiseSolution&)>;

/// Draws y^(m) from the model's germ law with `seed` and streams the
/// pathwise FEM solutions to `sink` in sample order.
void mc_pathwise_reference(const FieldModel& model, const Mesh1D& mesh, std::size_t n_mc, std::uint64_t seed,
                           const PathwiseSink& sink);
void mc_pathwise_reference(const FieldModel& model, const Mesh2D& mesh, std::size_t n_mc, std::uint64_t seed,
                           const PathwiseSink& sink);

}  // namespace sgnet
