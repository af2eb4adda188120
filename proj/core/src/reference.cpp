#include "sgnet/reference.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <random>

#include "binary_io.hpp"
#include "sgnet/error.hpp"

namespace sgnet {

double exp1_exact(double xi, double x) { return 0.5 * std::abs(xi - 1.0) * (x - x * x); }

double exp1_exact_derivative(double xi, double x) { return 0.5 * std::abs(xi - 1.0) * (1.0 - 2.0 * x); }

Mesh1D::Mesh1D(int n) : n_elem(n) {
  if (n < 2) throw InvalidArgument("1-D mesh needs at least two elements");
}

Mesh2D::Mesh2D(int cells) : n(cells) {
  if (cells < 2) throw InvalidArgument("2-D mesh needs at least two cells per side");
}

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

constexpr double kGauss2[2] = {0.5 - 0.5 / 1.7320508075688772, 0.5 + 0.5 / 1.7320508075688772};

// Three-point Gauss rule on [0,1].
constexpr double kGauss3Nodes[3] = {0.5 - 0.5 * 0.7745966692414834, 0.5, 0.5 + 0.5 * 0.7745966692414834};
constexpr double kGauss3Weights[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

void require_positive(double a, double x) {
  if (!(a > 0.0))
    throw NumericalError("diffusion coefficient " + std::to_string(a) + " is not positive at x=" +
                         std::to_string(x) + "; the stiffness matrix is not SPD");
}

// Eigen-compatible block-Jacobi preconditioner over contiguous blocks.
class BlockJacobi {
 public:
  using StorageIndex = int;
  enum { ColsAtCompileTime = Eigen::Dynamic, MaxColsAtCompileTime = Eigen::Dynamic };

  BlockJacobi() = default;

  void set_block_size(Eigen::Index b) { block_ = b; }

  template <class Mat>
  BlockJacobi& analyzePattern(const Mat&) { return *this; }

  template <class Mat>
  BlockJacobi& factorize(const Mat& A) {
    const Eigen::Index n = A.rows();
    if (block_ <= 0 || n % block_ != 0) {
      info_ = Eigen::InvalidInput;
      return *this;
    }
    const Eigen::MatrixXd dense_blocks = Eigen::MatrixXd::Zero(block_, block_);
    inverses_.assign(static_cast<std::size_t>(n / block_), dense_blocks);
    for (Eigen::Index c = 0; c < A.outerSize(); ++c)
      for (typename Mat::InnerIterator it(A, c); it; ++it) {
        const Eigen::Index r = it.row(), col = it.col();
        if (r / block_ == col / block_)
          inverses_[static_cast<std::size_t>(r / block_)](r % block_, col % block_) = it.value();
      }
    info_ = Eigen::Success;
    for (auto& B : inverses_) {
      Eigen::LLT<Eigen::MatrixXd> llt(B);
      if (llt.info() != Eigen::Success) {
        info_ = Eigen::NumericalIssue;
        return *this;
      }
      B = llt.solve(Eigen::MatrixXd::Identity(block_, block_));
    }
    return *this;
  }

  template <class Mat>
  BlockJacobi& compute(const Mat& A) { return factorize(A); }

  template <class Rhs>
  Eigen::VectorXd solve(const Rhs& b) const {
    Eigen::VectorXd x(b.size());
    for (std::size_t k = 0; k < inverses_.size(); ++k) {
      const auto off = static_cast<Eigen::Index>(k) * block_;
      x.segment(off, block_).noalias() = inverses_[k] * b.segment(off, block_);
    }
    return x;
  }

  Eigen::ComputationInfo info() const { return info_; }

 private:
  Eigen::Index block_ = 1;
  std::vector<Eigen::MatrixXd> inverses_;
  Eigen::ComputationInfo info_ = Eigen::Success;
};

}  // namespace

Eigen::VectorXd fem_pathwise(const Mesh1D& mesh, const Coefficient1D& a, const Coefficient1D& f) {
  const int n = mesh.n_elem;
  const double h = mesh.h();
  const int dof = n - 1;
  Triplets trip;
  trip.reserve(static_cast<std::size_t>(4 * n));
  Eigen::VectorXd F = Eigen::VectorXd::Zero(dof);
  for (int e = 0; e < n; ++e) {
    const double x0 = mesh.node(e);
    double a_int = 0.0, f_left = 0.0, f_right = 0.0;
    for (double xi : kGauss2) {
      const double x = x0 + xi * h;
      const double av = a(x);
      require_positive(av, x);
      a_int += 0.5 * av;
      const double fv = f(x);
      f_left += 0.5 * h * fv * (1.0 - xi);
      f_right += 0.5 * h * fv * xi;
    }
    const double k = a_int / h;
    const int nodes[2] = {e - 1, e};  // interior indices of the element's nodes
    const double fl[2] = {f_left, f_right};
    for (int p = 0; p < 2; ++p) {
      if (nodes[p] < 0 || nodes[p] >= dof) continue;
      F[nodes[p]] += fl[p];
      for (int q = 0; q < 2; ++q) {
        if (nodes[q] < 0 || nodes[q] >= dof) continue;
        trip.emplace_back(nodes[p], nodes[q], p == q ? k : -k);
      }
    }
  }
  Eigen::SparseMatrix<double> K(dof, dof);
  K.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(K);
  if (llt.info() != Eigen::Success) throw NumericalError("1-D stiffness matrix is not SPD");
  const Eigen::VectorXd u = llt.solve(F);
  Eigen::VectorXd nodal = Eigen::VectorXd::Zero(mesh.nodes());
  nodal.segment(1, dof) = u;
  return nodal;
}

Eigen::VectorXd fem_pathwise(const Mesh2D& mesh, const Coefficient2D& a, const Coefficient2D& f) {
  const int n = mesh.n;
  const double h = mesh.h();
  const int side = n - 1;
  const int dof = side * side;
  auto interior = [&](int i, int j) { return (i < 1 || j < 1 || i > side || j > side) ? -1 : (j - 1) * side + (i - 1); };
  Triplets trip;
  trip.reserve(static_cast<std::size_t>(16 * n * n));
  Eigen::VectorXd F = Eigen::VectorXd::Zero(dof);
  for (int ej = 0; ej < n; ++ej)
    for (int ei = 0; ei < n; ++ei) {
      double Ke[4][4] = {};
      double Fe[4] = {};
      for (double xi : kGauss2)
        for (double eta : kGauss2) {
          const double x = (ei + xi) * h, y = (ej + eta) * h;
          const double av = a(x, y);
          require_positive(av, x);
          const double fv = f(x, y);
          const double N[4] = {(1 - xi) * (1 - eta), xi * (1 - eta), (1 - xi) * eta, xi * eta};
          const double dx[4] = {-(1 - eta), 1 - eta, -eta, eta};
          const double dy[4] = {-(1 - xi), -xi, 1 - xi, xi};
          for (int p = 0; p < 4; ++p) {
            Fe[p] += 0.25 * h * h * fv * N[p];
            for (int q = 0; q < 4; ++q) Ke[p][q] += 0.25 * av * (dx[p] * dx[q] + dy[p] * dy[q]);
          }
        }
      const int idx[4] = {interior(ei, ej), interior(ei + 1, ej), interior(ei, ej + 1), interior(ei + 1, ej + 1)};
      for (int p = 0; p < 4; ++p) {
        if (idx[p] < 0) continue;
        F[idx[p]] += Fe[p];
        for (int q = 0; q < 4; ++q)
          if (idx[q] >= 0) trip.emplace_back(idx[p], idx[q], Ke[p][q]);
      }
    }
  Eigen::SparseMatrix<double> K(dof, dof);
  K.setFromTriplets(trip.begin(), trip.end());
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(1e-12);
  cg.setMaxIterations(10 * dof);
  cg.compute(K);
  const Eigen::VectorXd u = cg.solve(F);
  if (cg.info() != Eigen::Success)
    throw NumericalError("2-D CG did not converge (" + std::to_string(cg.iterations()) + " iterations)");
  Eigen::VectorXd nodal = Eigen::VectorXd::Zero(mesh.nodes());
  for (int j = 1; j <= side; ++j)
    for (int i = 1; i <= side; ++i) nodal[j * (n + 1) + i] = u[interior(i, j)];
  return nodal;
}

// ---------------------------------------------------------------------------

std::vector<Eigen::Index> interior_nodes(int spatial_dim, int cells) {
  std::vector<Eigen::Index> out;
  if (spatial_dim == 1) {
    for (int i = 1; i < cells; ++i) out.push_back(i);
  } else if (spatial_dim == 2) {
    for (int j = 1; j < cells; ++j)
      for (int i = 1; i < cells; ++i) out.push_back(static_cast<Eigen::Index>(j) * (cells + 1) + i);
  } else {
    throw InvalidArgument("meshes exist in 1-D and 2-D only");
  }
  return out;
}

namespace {

std::vector<Eigen::MatrixXd> tensor_slices(const GalerkinTensor& G) {
  const auto K = static_cast<Eigen::Index>(G.dim());
  std::vector<Eigen::MatrixXd> slices;
  for (std::size_t i = 0; i < G.dim(); ++i) {
    Eigen::MatrixXd S(K, K);
    for (Eigen::Index j = 0; j < K; ++j)
      for (Eigen::Index k = 0; k < K; ++k) S(j, k) = G(i, static_cast<std::size_t>(j), static_cast<std::size_t>(k));
    slices.push_back(std::move(S));
  }
  return slices;
}

void check_coupled_inputs(const SpectralField& field, const GalerkinTensor& G, int dim) {
  if (field.spatial_dim() != dim) throw InvalidArgument("mesh dimension does not match the field");
  if (G.dim() != field.size()) throw InvalidArgument("Galerkin tensor does not match the field basis");
}

// Scatter an element block matrix (local nodes x local nodes, each (M+1)^2)
// given interior indices (-1 on the boundary).
void scatter_block(Triplets& trip, std::span<const Eigen::Index> idx, std::span<const double> weights,
                   const Eigen::MatrixXd& A, Eigen::Index K, std::size_t nloc) {
  for (std::size_t p = 0; p < nloc; ++p) {
    if (idx[p] < 0) continue;
    for (std::size_t r = 0; r < nloc; ++r) {
      if (idx[r] < 0) continue;
      const double w = weights[p * nloc + r];
      if (w == 0.0) continue;
      for (Eigen::Index i = 0; i < K; ++i)
        for (Eigen::Index j = 0; j < K; ++j) {
          const double v = w * A(i, j);
          if (v != 0.0) trip.emplace_back(static_cast<int>(idx[p] * K + i), static_cast<int>(idx[r] * K + j), v);
        }
    }
  }
}

}  // namespace

CoupledSystem assemble_coupled(const Mesh1D& mesh, const SpectralField& field, const GalerkinTensor& G,
                               bool energy) {
  check_coupled_inputs(field, G, 1);
  const auto K = static_cast<Eigen::Index>(G.dim());
  const int n = mesh.n_elem;
  const double h = mesh.h();
  const Eigen::Index interior = n - 1;
  CoupledSystem sys;
  sys.spatial_dim = 1;
  sys.cells = n;
  sys.blocks = G.dim();
  sys.F = Eigen::VectorXd::Zero(interior * K);
  const auto slices = tensor_slices(G);

  Triplets trip;
  trip.reserve(static_cast<std::size_t>(4 * n) * static_cast<std::size_t>(K * K));
  SpectralSample s;
  const double weights[4] = {1.0, -1.0, -1.0, 1.0};
  for (int e = 0; e < n; ++e) {
    Eigen::MatrixXd Ae = Eigen::MatrixXd::Zero(K, K);
    Eigen::VectorXd load[2] = {Eigen::VectorXd::Zero(K), Eigen::VectorXd::Zero(K)};
    for (int q = 0; q < 3; ++q) {
      const double xi = kGauss3Nodes[q];
      const double x = (e + xi) * h;
      const std::span<const double> xs(&x, 1);
      if (energy) field.evaluate_energy(xs, s);
      else field.evaluate(xs, s);
      for (std::size_t i = 0; i < G.dim(); ++i)
        if (s.a[i] != 0.0) Ae += kGauss3Weights[q] * s.a[i] * slices[i];
      for (Eigen::Index k = 0; k < K; ++k) {
        load[0][k] += kGauss3Weights[q] * h * s.f[static_cast<std::size_t>(k)] * (1.0 - xi);
        load[1][k] += kGauss3Weights[q] * h * s.f[static_cast<std::size_t>(k)] * xi;
      }
    }
    Ae /= h;
    const Eigen::Index idx[2] = {e - 1 < interior ? e - 1 : -1, e < interior ? e : -1};
    for (int p = 0; p < 2; ++p)
      if (idx[p] >= 0) sys.F.segment(idx[p] * K, K) += load[p];
    scatter_block(trip, idx, weights, Ae, K, 2);
  }
  sys.K.resize(interior * K, interior * K);
  sys.K.setFromTriplets(trip.begin(), trip.end());
  return sys;
}

CoupledSystem assemble_coupled(const Mesh2D& mesh, const SpectralField& field, const GalerkinTensor& G,
                               bool energy) {
  check_coupled_inputs(field, G, 2);
  const auto K = static_cast<Eigen::Index>(G.dim());
  const int n = mesh.n;
  const double h = mesh.h();
  const int side = n - 1;
  const Eigen::Index interior = static_cast<Eigen::Index>(side) * side;
  auto node = [&](int i, int j) -> Eigen::Index {
    return (i < 1 || j < 1 || i > side || j > side) ? -1 : static_cast<Eigen::Index>(j - 1) * side + (i - 1);
  };
  CoupledSystem sys;
  sys.spatial_dim = 2;
  sys.cells = n;
  sys.blocks = G.dim();
  sys.F = Eigen::VectorXd::Zero(interior * K);
  const auto slices = tensor_slices(G);

  Triplets trip;
  SpectralSample s;
  for (int ej = 0; ej < n; ++ej)
    for (int ei = 0; ei < n; ++ei) {
      // per local pair (p, r): sum_q w_q A(x_q) grad N_p . grad N_r, accumulated as 16 blocks
      std::vector<Eigen::MatrixXd> blocks(16, Eigen::MatrixXd::Zero(K, K));
      Eigen::VectorXd load[4] = {Eigen::VectorXd::Zero(K), Eigen::VectorXd::Zero(K), Eigen::VectorXd::Zero(K),
                                 Eigen::VectorXd::Zero(K)};
      for (int qx = 0; qx < 3; ++qx)
        for (int qy = 0; qy < 3; ++qy) {
          const double xi = kGauss3Nodes[qx], eta = kGauss3Nodes[qy];
          const double w = kGauss3Weights[qx] * kGauss3Weights[qy];
          const double x[2] = {(ei + xi) * h, (ej + eta) * h};
          if (energy) field.evaluate_energy(x, s);
          else field.evaluate(x, s);
          Eigen::MatrixXd A = Eigen::MatrixXd::Zero(K, K);
          for (std::size_t i = 0; i < G.dim(); ++i)
            if (s.a[i] != 0.0) A += s.a[i] * slices[i];
          const double N[4] = {(1 - xi) * (1 - eta), xi * (1 - eta), (1 - xi) * eta, xi * eta};
          const double dx[4] = {-(1 - eta), 1 - eta, -eta, eta};
          const double dy[4] = {-(1 - xi), -xi, 1 - xi, xi};
          for (int p = 0; p < 4; ++p) {
            for (Eigen::Index k = 0; k < K; ++k) load[p][k] += w * h * h * s.f[static_cast<std::size_t>(k)] * N[p];
            for (int r = 0; r < 4; ++r) blocks[static_cast<std::size_t>(p * 4 + r)] += (w * (dx[p] * dx[r] + dy[p] * dy[r])) * A;
          }
        }
      const Eigen::Index idx[4] = {node(ei, ej), node(ei + 1, ej), node(ei, ej + 1), node(ei + 1, ej + 1)};
      for (int p = 0; p < 4; ++p) {
        if (idx[p] < 0) continue;
        sys.F.segment(idx[p] * K, K) += load[p];
        for (int r = 0; r < 4; ++r) {
          if (idx[r] < 0) continue;
          const Eigen::MatrixXd& B = blocks[static_cast<std::size_t>(p * 4 + r)];
          for (Eigen::Index i = 0; i < K; ++i)
            for (Eigen::Index j = 0; j < K; ++j)
              if (B(i, j) != 0.0) trip.emplace_back(static_cast<int>(idx[p] * K + i), static_cast<int>(idx[r] * K + j), B(i, j));
        }
      }
    }
  sys.K.resize(interior * K, interior * K);
  sys.K.setFromTriplets(trip.begin(), trip.end());
  return sys;
}

CoupledSolution solve_coupled(const CoupledSystem& system) {
  const auto K = static_cast<Eigen::Index>(system.blocks);
  const Eigen::Index dof = system.dof();
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper, BlockJacobi> cg;
  cg.preconditioner().set_block_size(K);
  cg.setTolerance(1e-12);
  cg.setMaxIterations(10 * dof);
  cg.compute(system.K);
  if (cg.preconditioner().info() != Eigen::Success)
    throw NumericalError("coupled system has an indefinite diagonal block");
  const Eigen::VectorXd u = cg.solve(system.F);
  if (cg.info() != Eigen::Success)
    throw NumericalError("coupled CG did not converge within " + std::to_string(10 * dof) +
                         " iterations; the truncated operator may be indefinite");
  CoupledSolution sol;
  sol.spatial_dim = system.spatial_dim;
  sol.cells = system.cells;
  sol.iterations = static_cast<int>(cg.iterations());
  sol.relative_residual = cg.error();
  const Eigen::Index nodes = system.spatial_dim == 1 ? system.cells + 1
                                                    : static_cast<Eigen::Index>(system.cells + 1) * (system.cells + 1);
  sol.u = Eigen::MatrixXd::Zero(nodes, K);
  const auto inner = interior_nodes(system.spatial_dim, system.cells);
  for (std::size_t a = 0; a < inner.size(); ++a)
    for (Eigen::Index i = 0; i < K; ++i) sol.u(inner[a], i) = u[static_cast<Eigen::Index>(a) * K + i];
  return sol;
}

CoupledSolution sga_fem_coupled(const Mesh1D& mesh, const SpectralField& field, const GalerkinTensor& G,
                                bool energy) {
  return solve_coupled(assemble_coupled(mesh, field, G, energy));
}

CoupledSolution sga_fem_coupled(const Mesh2D& mesh, const SpectralField& field, const GalerkinTensor& G,
                                bool energy) {
  return solve_coupled(assemble_coupled(mesh, field, G, energy));
}

Eigen::VectorXd pack_interior(const CoupledSolution& sol) {
  const Eigen::Index K = sol.u.cols();
  const auto inner = interior_nodes(sol.spatial_dim, sol.cells);
  Eigen::VectorXd u(static_cast<Eigen::Index>(inner.size()) * K);
  for (std::size_t a = 0; a < inner.size(); ++a)
    for (Eigen::Index i = 0; i < K; ++i) u[static_cast<Eigen::Index>(a) * K + i] = sol.u(inner[a], i);
  return u;
}

double discrete_energy(const CoupledSystem& system, const Eigen::VectorXd& u) {
  if (u.size() != system.dof()) throw InvalidArgument("discrete_energy: size mismatch");
  return 0.5 * u.dot(system.K * u) - system.F.dot(u);
}

double lanczos_min_eigenvalue(const Eigen::SparseMatrix<double>& A, int steps, std::uint64_t seed) {
  const Eigen::Index n = A.rows();
  if (n == 0 || A.cols() != n) throw InvalidArgument("Lanczos needs a non-empty square matrix");
  const int m = static_cast<int>(std::min<Eigen::Index>(steps, n));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd V(n, m);
  Eigen::VectorXd v = Eigen::VectorXd::NullaryExpr(n, [&]() { return u(rng); });
  v.normalize();
  std::vector<double> alpha, beta;
  int k = 0;
  for (; k < m; ++k) {
    V.col(k) = v;
    Eigen::VectorXd w = A * v;
    alpha.push_back(v.dot(w));
    // full reorthogonalisation
    for (int pass = 0; pass < 2; ++pass) w -= V.leftCols(k + 1) * (V.leftCols(k + 1).transpose() * w);
    const double b = w.norm();
    if (k + 1 == m || b < 1e-14 * std::abs(alpha.back())) {
      ++k;
      break;
    }
    beta.push_back(b);
    v = w / b;
  }
  Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), k);
  Eigen::VectorXd sub = Eigen::VectorXd::Zero(std::max(k - 1, 0));
  for (int i = 0; i + 1 < k; ++i) sub[i] = beta[static_cast<std::size_t>(i)];
  if (k == 1) return diag[0];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

namespace {
constexpr char kSolutionMagic[5] = "SGCS";
}

void write_coupled_solution(std::ostream& os, const CoupledSolution& sol) {
  detail::write_magic(os, kSolutionMagic);
  detail::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(sol.spatial_dim));
  detail::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(sol.cells));
  detail::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(sol.u.cols()));
  detail::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(sol.u.rows()));
  for (Eigen::Index k = 0; k < sol.u.cols(); ++k)
    for (Eigen::Index a = 0; a < sol.u.rows(); ++a) detail::write_le<double>(os, sol.u(a, k));
  if (!os) throw IoError("failed to write coupled solution");
}

CoupledSolution read_coupled_solution(std::istream& is) {
  detail::expect_magic(is, kSolutionMagic);
  const auto dim = detail::read_le<std::uint32_t>(is);
  const auto cells = detail::read_le<std::uint32_t>(is);
  const auto blocks = detail::read_le<std::uint32_t>(is);
  const auto nodes = detail::read_le<std::uint32_t>(is);
  const std::uint64_t expected = dim == 1 ? cells + 1ull : (cells + 1ull) * (cells + 1ull);
  if ((dim != 1 && dim != 2) || cells < 2 || blocks == 0 || nodes != expected)
    throw IoError("bad coupled solution header");
  CoupledSolution sol;
  sol.spatial_dim = static_cast<int>(dim);
  sol.cells = static_cast<int>(cells);
  sol.u.resize(nodes, blocks);
  for (Eigen::Index k = 0; k < sol.u.cols(); ++k)
    for (Eigen::Index a = 0; a < sol.u.rows(); ++a) sol.u(a, k) = detail::read_le<double>(is);
  return sol;
}

// ---------------------------------------------------------------------------

namespace {

template <class Solve>
void stream_samples(const FieldModel& model, std::size_t n_mc, std::uint64_t seed, const PathwiseSink& sink,
                    Solve&& solve) {
  GermSampler sampler(std::vector<PolyFamily>(static_cast<std::size_t>(model.stochastic_dim()), model.family()), seed);
  PathwiseSolution out;
  out.y.resize(static_cast<std::size_t>(model.stochastic_dim()));
  for (std::size_t m = 0; m < n_mc; ++m) {
    sampler.next(out.y);
    out.index = m;
    out.nodal = solve(out.y);
    sink(out);
  }
}

}  // namespace

void mc_pathwise_reference(const FieldModel& model, const Mesh1D& mesh, std::size_t n_mc, std::uint64_t seed,
                           const PathwiseSink& sink) {
  if (model.spatial_dim() != 1) throw InvalidArgument("1-D mesh given for a 2-D field model");
  stream_samples(model, n_mc, seed, sink, [&](const std::vector<double>& y) {
    auto a = [&](double x) { return model.sample(y, std::span<const double>(&x, 1)).a; };
    auto f = [&](double x) { return model.sample(y, std::span<const double>(&x, 1)).f; };
    return fem_pathwise(mesh, a, f);
  });
}

void mc_pathwise_reference(const FieldModel& model, const Mesh2D& mesh, std::size_t n_mc, std::uint64_t seed,
                           const PathwiseSink& sink) {
  if (model.spatial_dim() != 2) throw InvalidArgument("2-D mesh given for a 1-D field model");
  stream_samples(model, n_mc, seed, sink, [&](const std::vector<double>& y) {
    auto a = [&](double x1, double x2) {
      const double x[2] = {x1, x2};
      return model.sample(y, x).a;
    };
    auto f = [&](double x1, double x2) {
      const double x[2] = {x1, x2};
      return model.sample(y, x).f;
    };
    return fem_pathwise(mesh, a, f);
  });
}

}  // namespace sgnet
