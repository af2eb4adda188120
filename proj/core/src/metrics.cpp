#include "sgnet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "sgnet/error.hpp"

namespace sgnet {

namespace {

Eigen::VectorXd trapezoid_weights_1d(int points) {
  const double h = 1.0 / (points - 1);
  Eigen::VectorXd w = Eigen::VectorXd::Constant(points, h);
  w[0] = w[points - 1] = 0.5 * h;
  return w;
}

void tensor_points(const Eigen::VectorXd& c, const Eigen::VectorXd& w, Eigen::MatrixXd& X, Eigen::VectorXd& W) {
  const Eigen::Index n = c.size();
  X.resize(2, n * n);
  W.resize(n * n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      X(0, j * n + i) = c[i];
      X(1, j * n + i) = c[j];
      W[j * n + i] = w[i] * w[j];
    }
}

Eigen::VectorXd linspace01(int points) {
  Eigen::VectorXd c(points);
  for (int i = 0; i < points; ++i) c[i] = static_cast<double>(i) / (points - 1);
  return c;
}

Eigen::VectorXd midpoints(int cells) {
  Eigen::VectorXd c(cells);
  for (int i = 0; i < cells; ++i) c[i] = (i + 0.5) / cells;
  return c;
}

}  // namespace

SpatialGrid trapezoid_grid(int spatial_dim, int points) {
  if (points < 2) throw InvalidArgument("trapezoid grid needs at least two points per direction");
  SpatialGrid g;
  g.spatial_dim = spatial_dim;
  const Eigen::VectorXd c = linspace01(points);
  const Eigen::VectorXd w = trapezoid_weights_1d(points);
  if (spatial_dim == 1) {
    g.value_points = c.transpose();
    g.value_weights = w;
    g.descriptor = "trapezoid " + std::to_string(points);
  } else if (spatial_dim == 2) {
    tensor_points(c, w, g.value_points, g.value_weights);
    g.descriptor = "trapezoid " + std::to_string(points) + "x" + std::to_string(points);
  } else {
    throw InvalidArgument("grids exist in 1-D and 2-D only");
  }
  g.grad_points = g.value_points;
  g.grad_weights = g.value_weights;
  return g;
}

SpatialGrid default_grid(int spatial_dim) { return trapezoid_grid(spatial_dim, spatial_dim == 1 ? 257 : 65); }

SpatialGrid fem_grid(const Mesh1D& mesh) {
  SpatialGrid g = trapezoid_grid(1, mesh.nodes());
  g.grad_points = midpoints(mesh.n_elem).transpose();
  g.grad_weights = Eigen::VectorXd::Constant(mesh.n_elem, mesh.h());
  g.descriptor = "fem " + std::to_string(mesh.n_elem);
  return g;
}

SpatialGrid fem_grid(const Mesh2D& mesh) {
  SpatialGrid g = trapezoid_grid(2, mesh.n + 1);
  tensor_points(midpoints(mesh.n), Eigen::VectorXd::Constant(mesh.n, mesh.h()), g.grad_points, g.grad_weights);
  g.descriptor = "fem " + std::to_string(mesh.n) + "x" + std::to_string(mesh.n);
  return g;
}

CoefficientTable tabulate(const BranchedModel& model, const SpatialGrid& grid, double scale) {
  if (model.input_dim() != grid.spatial_dim) throw InvalidArgument("model and grid dimensions differ");
  CoefficientTable t;
  BatchEval ev;
  model.evaluate(grid.value_points, 0, ev);
  t.values = scale * ev.U;
  model.evaluate(grid.grad_points, 1, ev);
  for (const auto& g : ev.grad) t.grads.push_back(scale * g);
  return t;
}

NodalInterpolant::NodalInterpolant(int spatial_dim, int cells) : dim_(spatial_dim), cells_(cells) {
  if (dim_ != 1 && dim_ != 2) throw InvalidArgument("interpolation exists in 1-D and 2-D only");
  if (cells_ < 1) throw InvalidArgument("interpolation needs at least one cell");
}

namespace {

// Element index and local coordinate of x in a uniform partition of [0,1].
std::pair<int, double> locate(double x, int cells) {
  const double s = x * cells;
  const int e = std::clamp(static_cast<int>(std::floor(s)), 0, cells - 1);
  return {e, s - e};
}

}  // namespace

double NodalInterpolant::value(const Eigen::VectorXd& nodal, std::span<const double> x) const {
  const auto [i, t] = locate(x[0], cells_);
  if (dim_ == 1) return (1 - t) * nodal[i] + t * nodal[i + 1];
  const auto [j, s] = locate(x[1], cells_);
  const int n = cells_ + 1;
  return (1 - t) * (1 - s) * nodal[j * n + i] + t * (1 - s) * nodal[j * n + i + 1] +
         (1 - t) * s * nodal[(j + 1) * n + i] + t * s * nodal[(j + 1) * n + i + 1];
}

void NodalInterpolant::gradient(const Eigen::VectorXd& nodal, std::span<const double> x,
                                std::span<double> out) const {
  const auto [i, t] = locate(x[0], cells_);
  if (dim_ == 1) {
    out[0] = (nodal[i + 1] - nodal[i]) * cells_;
    return;
  }
  const auto [j, s] = locate(x[1], cells_);
  const int n = cells_ + 1;
  const double v00 = nodal[j * n + i], v10 = nodal[j * n + i + 1];
  const double v01 = nodal[(j + 1) * n + i], v11 = nodal[(j + 1) * n + i + 1];
  out[0] = ((1 - s) * (v10 - v00) + s * (v11 - v01)) * cells_;
  out[1] = ((1 - t) * (v01 - v00) + t * (v11 - v10)) * cells_;
}

CoefficientTable tabulate(const CoupledSolution& solution, const SpatialGrid& grid) {
  if (solution.spatial_dim != grid.spatial_dim) throw InvalidArgument("solution and grid dimensions differ");
  const NodalInterpolant interp(solution.spatial_dim, solution.cells);
  const Eigen::Index K = solution.u.cols();
  const int d = grid.spatial_dim;
  CoefficientTable t;
  t.values.resize(K, grid.value_points.cols());
  t.grads.assign(static_cast<std::size_t>(d), Eigen::MatrixXd(K, grid.grad_points.cols()));
  double g[2];
  for (Eigen::Index k = 0; k < K; ++k) {
    const Eigen::VectorXd nodal = solution.u.col(k);
    for (Eigen::Index l = 0; l < grid.value_points.cols(); ++l)
      t.values(k, l) = interp.value(nodal, {grid.value_points.col(l).data(), static_cast<std::size_t>(d)});
    for (Eigen::Index l = 0; l < grid.grad_points.cols(); ++l) {
      interp.gradient(nodal, {grid.grad_points.col(l).data(), static_cast<std::size_t>(d)}, {g, 2});
      for (int m = 0; m < d; ++m) t.grads[static_cast<std::size_t>(m)](k, l) = g[m];
    }
  }
  return t;
}

void Exp1Reference::evaluate(std::span<const double> y, const SpatialGrid& grid, Eigen::VectorXd& u,
                             Eigen::MatrixXd& grad) const {
  if (grid.spatial_dim != 1) throw InvalidArgument("exp1 reference lives on a 1-D grid");
  u.resize(grid.value_points.cols());
  grad.resize(1, grid.grad_points.cols());
  for (Eigen::Index l = 0; l < u.size(); ++l) u[l] = exp1_exact(y[0], grid.value_points(0, l));
  for (Eigen::Index l = 0; l < grad.cols(); ++l) grad(0, l) = exp1_exact_derivative(y[0], grid.grad_points(0, l));
}

FemReference::FemReference(std::shared_ptr<const FieldModel> model, Mesh1D mesh)
    : model_(std::move(model)), cells_(mesh.n_elem) {
  if (model_->spatial_dim() != 1) throw InvalidArgument("1-D mesh given for a 2-D field model");
}

FemReference::FemReference(std::shared_ptr<const FieldModel> model, Mesh2D mesh)
    : model_(std::move(model)), cells_(mesh.n) {
  if (model_->spatial_dim() != 2) throw InvalidArgument("2-D mesh given for a 1-D field model");
}

Eigen::VectorXd FemReference::solve(std::span<const double> y) const {
  if (model_->spatial_dim() == 1) {
    auto a = [&](double x) { return model_->sample(y, std::span<const double>(&x, 1)).a; };
    auto f = [&](double x) { return model_->sample(y, std::span<const double>(&x, 1)).f; };
    return fem_pathwise(Mesh1D(cells_), a, f);
  }
  auto a = [&](double x1, double x2) {
    const double x[2] = {x1, x2};
    return model_->sample(y, x).a;
  };
  auto f = [&](double x1, double x2) {
    const double x[2] = {x1, x2};
    return model_->sample(y, x).f;
  };
  return fem_pathwise(Mesh2D(cells_), a, f);
}

void FemReference::evaluate(std::span<const double> y, const SpatialGrid& grid, Eigen::VectorXd& u,
                            Eigen::MatrixXd& grad) const {
  const int d = spatial_dim();
  if (grid.spatial_dim != d) throw InvalidArgument("reference and grid dimensions differ");
  const Eigen::VectorXd nodal = solve(y);
  const NodalInterpolant interp(d, cells_);
  u.resize(grid.value_points.cols());
  grad.resize(d, grid.grad_points.cols());
  for (Eigen::Index l = 0; l < u.size(); ++l)
    u[l] = interp.value(nodal, {grid.value_points.col(l).data(), static_cast<std::size_t>(d)});
  for (Eigen::Index l = 0; l < grad.cols(); ++l)
    interp.gradient(nodal, {grid.grad_points.col(l).data(), static_cast<std::size_t>(d)},
                    {grad.col(l).data(), static_cast<std::size_t>(d)});
}

ChaosReference::ChaosReference(const OrderedBasis& basis, CoefficientTable table, int spatial_dim)
    : basis_(basis), table_(std::move(table)), dim_(spatial_dim) {
  if (table_.size() != basis_.size()) throw InvalidArgument("coefficient table does not match the basis");
  if (table_.grads.size() != static_cast<std::size_t>(dim_)) throw InvalidArgument("coefficient table has wrong gradient dimension");
}

void ChaosReference::evaluate(std::span<const double> y, const SpatialGrid& grid, Eigen::VectorXd& u,
                              Eigen::MatrixXd& grad) const {
  if (table_.values.cols() != grid.value_points.cols() || table_.grads[0].cols() != grid.grad_points.cols())
    throw InvalidArgument("coefficient table was tabulated on a different grid");
  Eigen::VectorXd p(static_cast<Eigen::Index>(basis_.size()));
  basis_.eval_all(y, {p.data(), basis_.size()});
  u = table_.values.transpose() * p;
  grad.resize(dim_, grid.grad_points.cols());
  for (int m = 0; m < dim_; ++m) grad.row(m) = p.transpose() * table_.grads[static_cast<std::size_t>(m)];
}

std::string ErrorReport::csv_header() { return "rel_error,numerator,denominator,n_mc,grid,mc_std_error"; }

std::string ErrorReport::csv_row() const {
  std::ostringstream os;
  os << std::setprecision(17) << rel_error << ',' << numerator << ',' << denominator << ',' << n_mc << ','
     << grid << ',' << mc_std_error;
  return os.str();
}

namespace {

ErrorReport finish(double num, double den, std::size_t n_mc, const SpatialGrid& grid, double se) {
  if (!(den > 0.0)) throw NumericalError("reference has zero H1 norm; relative error undefined");
  ErrorReport r;
  r.numerator = num;
  r.denominator = den;
  r.rel_error = std::sqrt(num) / std::sqrt(den);
  r.n_mc = n_mc;
  r.grid = grid.descriptor;
  r.mc_std_error = se;
  return r;
}

void check_table(const CoefficientTable& t, const SpatialGrid& grid) {
  if (t.values.cols() != grid.value_points.cols() || t.grads.size() != static_cast<std::size_t>(grid.spatial_dim) ||
      t.grads[0].cols() != grid.grad_points.cols())
    throw InvalidArgument("coefficient table was tabulated on a different grid");
}

}  // namespace

ErrorReport rel_h1_error(const PathwiseReference& reference, const CoefficientTable& approx,
                         const OrderedBasis& basis, std::size_t n_mc, const SpatialGrid& grid,
                         std::uint64_t seed) {
  if (n_mc == 0) throw InvalidArgument("relative error needs at least one Monte Carlo sample");
  if (reference.spatial_dim() != grid.spatial_dim) throw InvalidArgument("reference and grid dimensions differ");
  if (approx.size() != basis.size()) throw InvalidArgument("coefficient table does not match the basis");
  check_table(approx, grid);
  const int d = grid.spatial_dim;

  GermSampler sampler(basis.families(), seed);
  std::vector<double> y(static_cast<std::size_t>(basis.stochastic_dim()));
  Eigen::VectorXd p(static_cast<Eigen::Index>(basis.size()));
  Eigen::VectorXd u, diff;
  Eigen::MatrixXd grad;
  double num_sum = 0.0, num_sq = 0.0, den_sum = 0.0;
  for (std::size_t m = 0; m < n_mc; ++m) {
    sampler.next(y);
    basis.eval_all(y, {p.data(), basis.size()});
    reference.evaluate(y, grid, u, grad);
    diff = u - approx.values.transpose() * p;
    double num = grid.value_weights.dot(diff.cwiseAbs2());
    double den = grid.value_weights.dot(u.cwiseAbs2());
    for (int k = 0; k < d; ++k) {
      const Eigen::RowVectorXd gk = grad.row(k);
      const Eigen::RowVectorXd dg = gk - p.transpose() * approx.grads[static_cast<std::size_t>(k)];
      num += dg.cwiseAbs2().dot(grid.grad_weights.transpose());
      den += gk.cwiseAbs2().dot(grid.grad_weights.transpose());
    }
    num_sum += num;
    num_sq += num * num;
    den_sum += den;
  }
  const double n = static_cast<double>(n_mc);
  const double mean = num_sum / n;
  const double var = n_mc > 1 ? std::max(0.0, (num_sq - n * mean * mean) / (n - 1.0)) : 0.0;
  return finish(mean, den_sum / n, n_mc, grid, std::sqrt(var / n));
}

ErrorReport rel_h1_error(const PathwiseReference& reference, const BranchedModel& model, double scale,
                         const OrderedBasis& basis, std::size_t n_mc, const SpatialGrid& grid,
                         std::uint64_t seed) {
  return rel_h1_error(reference, tabulate(model, grid, scale), basis, n_mc, grid, seed);
}

ErrorReport spectral_h1_distance(const CoefficientTable& approx, const CoefficientTable& reference,
                                 const SpatialGrid& grid) {
  check_table(approx, grid);
  check_table(reference, grid);
  if (approx.size() != reference.size()) throw InvalidArgument("coefficient tables have different sizes");
  double num = ((approx.values - reference.values).cwiseAbs2() * grid.value_weights).sum();
  double den = (reference.values.cwiseAbs2() * grid.value_weights).sum();
  for (std::size_t m = 0; m < approx.grads.size(); ++m) {
    num += ((approx.grads[m] - reference.grads[m]).cwiseAbs2() * grid.grad_weights).sum();
    den += (reference.grads[m].cwiseAbs2() * grid.grad_weights).sum();
  }
  return finish(num, den, 0, grid, 0.0);
}

}  // namespace sgnet
