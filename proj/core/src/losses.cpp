#include "sgnet/losses.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sgnet/error.hpp"
#include "sgnet/sobol.hpp"

namespace sgnet {

std::string_view to_string(LossKind kind) { return kind == LossKind::Galerkin ? "galerkin" : "ritz"; }

LossKind parse_loss(std::string_view name) {
  if (name == "galerkin" || name == "strong") return LossKind::Galerkin;
  if (name == "ritz") return LossKind::Ritz;
  throw InvalidArgument("unknown method '" + std::string(name) + "'");
}

Eigen::MatrixXd canonical_order(const Eigen::MatrixXd& X) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(X.cols()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index r = 0; r < X.rows(); ++r) {
      if (X(r, a) < X(r, b)) return true;
      if (X(r, b) < X(r, a)) return false;
    }
    return false;
  });
  Eigen::MatrixXd sorted(X.rows(), X.cols());
  for (std::size_t l = 0; l < order.size(); ++l) sorted.col(static_cast<Eigen::Index>(l)) = X.col(order[l]);
  return sorted;
}

FieldBatch sample_field(const SpectralField& field, const Eigen::MatrixXd& X, bool energy) {
  const int d = field.spatial_dim();
  if (X.rows() != d) throw InvalidArgument("sample_field: point dimension mismatch");
  const auto K = static_cast<Eigen::Index>(field.size());
  const Eigen::Index n = X.cols();
  FieldBatch out;
  out.a.resize(n, K);
  out.f.resize(n, K);
  out.grad_a.assign(static_cast<std::size_t>(d), Eigen::MatrixXd(n, K));
  SpectralSample s;
  for (Eigen::Index l = 0; l < n; ++l) {
    const std::span<const double> x(X.col(l).data(), static_cast<std::size_t>(d));
    if (energy) field.evaluate_energy(x, s);
    else field.evaluate(x, s);
    for (Eigen::Index k = 0; k < K; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      out.a(l, k) = s.a[kk];
      out.f(l, k) = s.f[kk];
      for (int m = 0; m < d; ++m)
        out.grad_a[static_cast<std::size_t>(m)](l, k) = s.grad_a[kk * static_cast<std::size_t>(d) + static_cast<std::size_t>(m)];
    }
  }
  return out;
}

namespace {

double sum_squares(const Eigen::MatrixXd& R) {
  double total = 0.0;
  for (Eigen::Index l = 0; l < R.rows(); ++l)
    for (Eigen::Index k = 0; k < R.cols(); ++k) total += R(l, k) * R(l, k);
  return total;
}

bool all_zero(const Eigen::MatrixXd& M, Eigen::Index col) {
  for (Eigen::Index l = 0; l < M.rows(); ++l)
    if (M(l, col) != 0.0) return false;
  return true;
}

}  // namespace

LossAssembler::LossAssembler(const SpectralField& field, const GalerkinTensor& G) : field_(field), G_(G) {
  if (G.dim() != field.size())
    throw InvalidArgument("Galerkin tensor dimension " + std::to_string(G.dim()) +
                          " does not match the field basis size " + std::to_string(field.size()));
  const auto K = static_cast<Eigen::Index>(G.dim());
  slices_.reserve(G.dim());
  for (std::size_t i = 0; i < G.dim(); ++i) {
    Eigen::MatrixXd S(K, K);
    for (Eigen::Index j = 0; j < K; ++j)
      for (Eigen::Index k = 0; k < K; ++k)
        S(j, k) = G(i, static_cast<std::size_t>(j), static_cast<std::size_t>(k));
    slices_.push_back(std::move(S));
  }
}

Eigen::MatrixXd LossAssembler::operator_matrix(std::span<const double> x, bool energy) const {
  SpectralSample s;
  if (energy) field_.evaluate_energy(x, s);
  else field_.evaluate(x, s);
  const auto K = static_cast<Eigen::Index>(G_.dim());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(K, K);
  for (std::size_t i = 0; i < G_.dim(); ++i)
    if (s.a[i] != 0.0) A += s.a[i] * slices_[i];
  return A;
}

std::vector<Eigen::MatrixXd> LossAssembler::operator_gradient(std::span<const double> x) const {
  SpectralSample s;
  field_.evaluate(x, s);
  const auto K = static_cast<Eigen::Index>(G_.dim());
  const auto d = static_cast<std::size_t>(field_.spatial_dim());
  std::vector<Eigen::MatrixXd> B(d, Eigen::MatrixXd::Zero(K, K));
  for (std::size_t i = 0; i < G_.dim(); ++i)
    for (std::size_t m = 0; m < d; ++m)
      if (s.grad_a[i * d + m] != 0.0) B[m] += s.grad_a[i * d + m] * slices_[i];
  return B;
}

void LossAssembler::check(const BranchedModel& model, const Eigen::MatrixXd& X) const {
  if (static_cast<std::size_t>(model.branch_count()) != G_.dim())
    throw InvalidArgument("network has " + std::to_string(model.branch_count()) +
                          " branches, the spectral system has " + std::to_string(G_.dim()));
  if (model.input_dim() != field_.spatial_dim() || X.rows() != field_.spatial_dim())
    throw InvalidArgument("spatial dimension mismatch between field, network and batch");
  if (X.cols() == 0) throw InvalidArgument("empty batch");
}

// R(l,k) = sum_j A_jk(x_l) dU_j(x_l) + B_jk(x_l).grad U_j(x_l) + f_k(x_l)
double LossAssembler::strong_core(const BranchedModel& model, const Eigen::MatrixXd& Xs, BatchEval& ev,
                                  BatchAdjoint* adj) const {
  model.evaluate(Xs, 2, ev);
  const FieldBatch fb = sample_field(field_, Xs, false);
  const bool constant = field_.spatially_constant_diffusion();
  const std::size_t d = fb.grad_a.size();
  const Eigen::Index n = Xs.cols();
  const auto K = static_cast<Eigen::Index>(G_.dim());

  const Eigen::MatrixXd lapT = ev.lap.transpose();
  std::vector<Eigen::MatrixXd> gradT(d);
  for (std::size_t m = 0; m < d; ++m) gradT[m] = ev.grad[m].transpose();

  Eigen::MatrixXd R = fb.f;
  for (Eigen::Index i = 0; i < K; ++i) {
    const auto& S = slices_[static_cast<std::size_t>(i)];
    if (!all_zero(fb.a, i)) R.noalias() += fb.a.col(i).asDiagonal() * (lapT * S);
    if (constant) continue;
    for (std::size_t m = 0; m < d; ++m)
      if (!all_zero(fb.grad_a[m], i)) R.noalias() += fb.grad_a[m].col(i).asDiagonal() * (gradT[m] * S);
  }
  const double scale = 1.0 / (static_cast<double>(n) * static_cast<double>(K));
  const double risk = scale * sum_squares(R);
  if (!std::isfinite(risk)) throw NumericalError("strong risk is not finite");

  if (adj != nullptr) {
    const Eigen::MatrixXd Rb = 2.0 * scale * R;
    Eigen::MatrixXd lapB = Eigen::MatrixXd::Zero(n, K);
    std::vector<Eigen::MatrixXd> gradB(d, Eigen::MatrixXd::Zero(n, K));
    for (Eigen::Index i = 0; i < K; ++i) {
      const bool a_nonzero = !all_zero(fb.a, i);
      bool any_grad = false;
      if (!constant)
        for (std::size_t m = 0; m < d; ++m) any_grad = any_grad || !all_zero(fb.grad_a[m], i);
      if (!a_nonzero && !any_grad) continue;
      const Eigen::MatrixXd RS = Rb * slices_[static_cast<std::size_t>(i)];
      if (a_nonzero) lapB.noalias() += fb.a.col(i).asDiagonal() * RS;
      if (!any_grad) continue;
      for (std::size_t m = 0; m < d; ++m) gradB[m].noalias() += fb.grad_a[m].col(i).asDiagonal() * RS;
    }
    adj->U = Eigen::MatrixXd::Zero(K, n);
    adj->lap = lapB.transpose();
    adj->grad.resize(d);
    for (std::size_t m = 0; m < d; ++m) adj->grad[m] = gradB[m].transpose();
  }
  return risk;
}

// (1/n) sum_l [ 1/2 sum_ij A_ij grad U_i . grad U_j - sum_k f_k U_k ]
double LossAssembler::ritz_core(const BranchedModel& model, const Eigen::MatrixXd& Xs, BatchEval& ev,
                                BatchAdjoint* adj) const {
  model.evaluate(Xs, 1, ev);
  const FieldBatch fb = sample_field(field_, Xs, true);
  const std::size_t d = fb.grad_a.size();
  const Eigen::Index n = Xs.cols();
  const auto K = static_cast<Eigen::Index>(G_.dim());

  std::vector<Eigen::MatrixXd> gradT(d), Y(d, Eigen::MatrixXd::Zero(n, K));
  for (std::size_t m = 0; m < d; ++m) gradT[m] = ev.grad[m].transpose();
  for (Eigen::Index i = 0; i < K; ++i) {
    if (all_zero(fb.a, i)) continue;
    for (std::size_t m = 0; m < d; ++m)
      Y[m].noalias() += fb.a.col(i).asDiagonal() * (gradT[m] * slices_[static_cast<std::size_t>(i)]);
  }
  const Eigen::MatrixXd UT = ev.U.transpose();
  double total = 0.0;
  for (Eigen::Index l = 0; l < n; ++l) {
    double quad = 0.0, lin = 0.0;
    for (Eigen::Index k = 0; k < K; ++k) {
      for (std::size_t m = 0; m < d; ++m) quad += gradT[m](l, k) * Y[m](l, k);
      lin += fb.f(l, k) * UT(l, k);
    }
    total += 0.5 * quad - lin;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  const double risk = inv_n * total;
  if (!std::isfinite(risk)) throw NumericalError("Ritz risk is not finite");

  if (adj != nullptr) {
    adj->U = -inv_n * fb.f.transpose();
    adj->grad.resize(d);
    for (std::size_t m = 0; m < d; ++m) adj->grad[m] = inv_n * Y[m].transpose();
    adj->lap.resize(0, 0);
  }
  return risk;
}

double LossAssembler::strong_risk_value(const BranchedModel& model, const Eigen::MatrixXd& X) const {
  check(model, X);
  BatchEval ev;
  return strong_core(model, canonical_order(X), ev, nullptr);
}

RiskResult LossAssembler::strong_risk(const MultiBranchNet& net, const Eigen::MatrixXd& X) const {
  check(net, X);
  BatchEval ev;
  BatchAdjoint adj;
  RiskResult out;
  out.risk = strong_core(net, canonical_order(X), ev, &adj);
  out.grad = net.param_grad(ev, adj);
  return out;
}

double LossAssembler::ritz_risk_value(const BranchedModel& model, const Eigen::MatrixXd& X) const {
  check(model, X);
  BatchEval ev;
  return ritz_core(model, canonical_order(X), ev, nullptr);
}

RiskResult LossAssembler::ritz_risk(const MultiBranchNet& net, const Eigen::MatrixXd& X) const {
  check(net, X);
  BatchEval ev;
  BatchAdjoint adj;
  RiskResult out;
  out.risk = ritz_core(net, canonical_order(X), ev, &adj);
  out.grad = net.param_grad(ev, adj);
  return out;
}

RiskResult LossAssembler::risk(LossKind kind, const MultiBranchNet& net, const Eigen::MatrixXd& X) const {
  return kind == LossKind::Galerkin ? strong_risk(net, X) : ritz_risk(net, X);
}

// ---------------------------------------------------------------------------

ValidationSet::ValidationSet(const SpectralField& field, Eigen::MatrixXd points, std::size_t samples,
                             std::uint64_t seed)
    : points_(std::move(points)) {
  if (samples == 0) throw InvalidArgument("validation needs at least one sample");
  if (points_.rows() != field.spatial_dim() || points_.cols() == 0)
    throw InvalidArgument("validation points do not match the field's spatial dimension");
  const OrderedBasis& basis = field.basis();
  const auto K = static_cast<Eigen::Index>(basis.size());
  basis_values_.resize(static_cast<Eigen::Index>(samples), K);
  GermSampler sampler(basis.families(), seed);
  std::vector<double> y(static_cast<std::size_t>(basis.stochastic_dim()));
  std::vector<double> p(basis.size());
  for (Eigen::Index s = 0; s < basis_values_.rows(); ++s) {
    sampler.next(y);
    basis.eval_all(y, p);
    for (Eigen::Index k = 0; k < K; ++k) basis_values_(s, k) = p[static_cast<std::size_t>(k)];
  }
  coeffs_ = sample_field(field, points_, false);
}

Eigen::MatrixXd ValidationSet::default_points(int spatial_dim) {
  if (spatial_dim == 1) {
    SobolStream stream(1, 1);
    return stream.batch(128);
  }
  if (spatial_dim == 2) {
    const int side = 32;
    Eigen::MatrixXd X(2, side * side);
    for (int i = 0; i < side; ++i)
      for (int j = 0; j < side; ++j) {
        X(0, i * side + j) = (i + 0.5) / side;
        X(1, i * side + j) = (j + 0.5) / side;
      }
    return X;
  }
  throw InvalidArgument("validation points exist for 1-D and 2-D domains only");
}

ValidationResult ValidationSet::evaluate(const BranchedModel& model) const {
  const auto K = basis_values_.cols();
  if (model.branch_count() != K || model.input_dim() != points_.rows())
    throw InvalidArgument("validation: model does not match the spectral system");
  BatchEval ev;
  model.evaluate(points_, 2, ev);
  const std::size_t d = coeffs_.grad_a.size();
  const Eigen::Index S = basis_values_.rows();
  const Eigen::Index L = points_.cols();
  const Eigen::Index chunk = 256;

  double sum = 0.0, sum_sq = 0.0;
  for (Eigen::Index s0 = 0; s0 < S; s0 += chunk) {
    const Eigen::Index rows = std::min(chunk, S - s0);
    const auto P = basis_values_.middleRows(s0, rows);
    // pathwise reconstructions, rows x L
    const Eigen::MatrixXd a = P * coeffs_.a.transpose();
    Eigen::MatrixXd R = P * coeffs_.f.transpose();
    R.array() += a.array() * (P * ev.lap).array();
    for (std::size_t m = 0; m < d; ++m)
      R.array() += (P * coeffs_.grad_a[m].transpose()).array() * (P * ev.grad[m]).array();
    for (Eigen::Index r = 0; r < rows; ++r) {
      double path = 0.0;
      for (Eigen::Index l = 0; l < L; ++l) path += R(r, l) * R(r, l);
      path /= static_cast<double>(L);
      sum += path;
      sum_sq += path * path;
    }
  }
  ValidationResult out;
  const double Sd = static_cast<double>(S);
  out.error = sum / Sd;
  const double var = S > 1 ? std::max(0.0, (sum_sq - Sd * out.error * out.error) / (Sd - 1.0)) : 0.0;
  out.std_error = std::sqrt(var / Sd);
  return out;
}

}  // namespace sgnet
