#include "sgnet/net.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <random>

#include "binary_io.hpp"
#include "sgnet/error.hpp"

namespace sgnet {

namespace {

std::atomic<std::uint64_t> g_next_net_id{1};

constexpr char kCheckpointMagic[5] = "SGNC";
constexpr std::uint32_t kCheckpointVersion = 1;

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double ez = std::exp(z);
  return ez / (1.0 + ez);
}

}  // namespace

std::string_view to_string(Activation act) {
  switch (act) {
    case Activation::Swish: return "swish";
    case Activation::Sigmoid: return "sigmoid";
    case Activation::Linear: return "linear";
    case Activation::Relu: return "relu";
  }
  return "?";
}

Activation parse_activation(std::string_view name) {
  if (name == "swish") return Activation::Swish;
  if (name == "sigmoid") return Activation::Sigmoid;
  if (name == "linear") return Activation::Linear;
  if (name == "relu") return Activation::Relu;
  throw InvalidArgument("unknown activation '" + std::string(name) + "'");
}

bool is_twice_differentiable(Activation act) { return act != Activation::Relu; }

ActivationDerivs activation_derivs(Activation act, double z) {
  ActivationDerivs d;
  switch (act) {
    case Activation::Linear:
      d.f = z;
      d.d1 = 1.0;
      break;
    case Activation::Relu:
      d.f = z > 0.0 ? z : 0.0;
      d.d1 = z > 0.0 ? 1.0 : 0.0;
      break;
    case Activation::Sigmoid:
    case Activation::Swish: {
      const double s = sigmoid(z);
      const double s1 = s * (1.0 - s);
      const double s2 = s1 * (1.0 - 2.0 * s);
      const double s3 = s1 * (1.0 - 6.0 * s + 6.0 * s * s);
      if (act == Activation::Sigmoid) {
        d = {s, s1, s2, s3};
      } else {
        d.f = z * s;
        d.d1 = s + z * s1;
        d.d2 = 2.0 * s1 + z * s2;
        d.d3 = 3.0 * s2 + z * s3;
      }
      break;
    }
  }
  return d;
}

// ---------------------------------------------------------------------------

std::size_t BranchSpec::param_count() const {
  std::size_t count = 0;
  int in = input_dim;
  for (std::size_t l = 0; l < layer_count(); ++l) {
    const int out = l < hidden_widths.size() ? hidden_widths[l] : 1;
    count += static_cast<std::size_t>(out) * static_cast<std::size_t>(in + 1);
    in = out;
  }
  return count;
}

void BranchSpec::validate() const {
  if (input_dim != 1 && input_dim != 2)
    throw InvalidArgument("branch input dimension must be 1 or 2");
  for (int w : hidden_widths)
    if (w <= 0) throw InvalidArgument("hidden widths must be positive");
  if (activations.size() != layer_count())
    throw InvalidArgument("expected " + std::to_string(layer_count()) + " activations, got " +
                          std::to_string(activations.size()));
}

BranchSpec make_branch_spec(int input_dim, std::vector<int> widths, Activation first,
                            Activation hidden) {
  BranchSpec spec;
  spec.input_dim = input_dim;
  spec.hidden_widths = std::move(widths);
  for (std::size_t l = 0; l < spec.hidden_widths.size(); ++l)
    spec.activations.push_back(l == 0 ? first : hidden);
  spec.activations.push_back(Activation::Linear);
  return spec;
}

std::vector<BranchSpec> replicate_spec(const BranchSpec& spec, int branches) {
  if (branches < 1) throw InvalidArgument("branch count must be positive");
  return std::vector<BranchSpec>(static_cast<std::size_t>(branches), spec);
}

// ---------------------------------------------------------------------------

Enforcer::Enforcer(int dim) : dim_(dim) {
  if (dim != 1 && dim != 2) throw InvalidArgument("enforcer dimension must be 1 or 2");
}

double Enforcer::value(std::span<const double> x) const {
  double e = 1.0;
  for (int m = 0; m < dim_; ++m) e *= x[static_cast<std::size_t>(m)] * (1.0 - x[static_cast<std::size_t>(m)]);
  return e;
}

void Enforcer::evaluate(const Eigen::MatrixXd& X, Eigen::RowVectorXd& e, Eigen::MatrixXd& grad,
                        Eigen::RowVectorXd& lap) const {
  const Eigen::Index n = X.cols();
  e.resize(n);
  grad.resize(dim_, n);
  lap.resize(n);
  for (Eigen::Index l = 0; l < n; ++l) {
    if (dim_ == 1) {
      const double x = X(0, l);
      e[l] = x * (1.0 - x);
      grad(0, l) = 1.0 - 2.0 * x;
      lap[l] = -2.0;
    } else {
      const double x1 = X(0, l), x2 = X(1, l);
      const double e1 = x1 * (1.0 - x1), e2 = x2 * (1.0 - x2);
      e[l] = e1 * e2;
      grad(0, l) = (1.0 - 2.0 * x1) * e2;
      grad(1, l) = e1 * (1.0 - 2.0 * x2);
      lap[l] = -2.0 * (e1 + e2);
    }
  }
}

// ---------------------------------------------------------------------------

FunctionModel::FunctionModel(int branches, int input_dim, BranchFn fn)
    : branches_(branches), input_dim_(input_dim), fn_(std::move(fn)) {
  if (branches < 1) throw InvalidArgument("FunctionModel: branch count must be positive");
  if (input_dim != 1 && input_dim != 2) throw InvalidArgument("FunctionModel: bad input dimension");
}

void FunctionModel::evaluate(const Eigen::MatrixXd& X, int order, BatchEval& out) const {
  if (X.rows() != input_dim_) throw InvalidArgument("FunctionModel: point dimension mismatch");
  const Eigen::Index n = X.cols();
  out.order = order;
  out.tape.reset();
  out.U.resize(branches_, n);
  out.grad.assign(order >= 1 ? static_cast<std::size_t>(input_dim_) : 0, Eigen::MatrixXd(branches_, n));
  out.lap.resize(order >= 2 ? branches_ : 0, order >= 2 ? n : 0);
  double g[2];
  for (Eigen::Index l = 0; l < n; ++l) {
    const double* x = X.col(l).data();
    for (int k = 0; k < branches_; ++k) {
      double u = 0.0, lap = 0.0;
      fn_(k, std::span<const double>(x, static_cast<std::size_t>(input_dim_)), u,
          std::span<double>(g, static_cast<std::size_t>(input_dim_)), lap);
      out.U(k, l) = u;
      if (order >= 1)
        for (int m = 0; m < input_dim_; ++m) out.grad[static_cast<std::size_t>(m)](k, l) = g[m];
      if (order >= 2) out.lap(k, l) = lap;
    }
  }
}

// ---------------------------------------------------------------------------

struct LayerTape {
  Eigen::MatrixXd h;                // layer input
  std::vector<Eigen::MatrixXd> g;   // input gradient streams
  std::vector<Eigen::MatrixXd> q;   // input Hessian-diagonal streams
  Eigen::MatrixXd s;                // pre-activation
  std::vector<Eigen::MatrixXd> t;   // W g_m
  std::vector<Eigen::MatrixXd> r;   // W q_m
};

struct NetTape {
  std::uint64_t net_id = 0;
  std::uint64_t version = 0;
  int order = 0;
  Eigen::RowVectorXd e, lap_e;
  Eigen::MatrixXd grad_e;
  std::vector<std::vector<LayerTape>> layers;
};

namespace {

// Elementwise f, f', f'', f''' of a pre-activation block; only the first
// `count` outputs are filled.
void apply_activation(Activation act, const Eigen::MatrixXd& s, int count, Eigen::MatrixXd* out) {
  for (int c = 0; c < count; ++c) out[c].resize(s.rows(), s.cols());
  const Eigen::Index size = s.size();
  const double* src = s.data();
  for (Eigen::Index i = 0; i < size; ++i) {
    const ActivationDerivs d = activation_derivs(act, src[i]);
    out[0].data()[i] = d.f;
    if (count > 1) out[1].data()[i] = d.d1;
    if (count > 2) out[2].data()[i] = d.d2;
    if (count > 3) out[3].data()[i] = d.d3;
  }
}

}  // namespace

MultiBranchNet::MultiBranchNet(std::vector<BranchSpec> specs, std::uint64_t seed)
    : specs_(std::move(specs)),
      enforcer_(specs_.empty() ? 1 : specs_.front().input_dim),
      id_(g_next_net_id.fetch_add(1)) {
  layout();
  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < specs_.size(); ++k) {
    const BranchSpec& spec = specs_[k];
    int in = spec.input_dim;
    for (std::size_t l = 0; l < spec.layer_count(); ++l) {
      const int out = l < spec.hidden_widths.size() ? spec.hidden_widths[l] : 1;
      const double bound = std::sqrt(6.0 / static_cast<double>(in + out));
      const std::size_t off = layer_offsets_[k][l];
      const std::size_t nw = static_cast<std::size_t>(in) * static_cast<std::size_t>(out);
      for (std::size_t i = 0; i < nw; ++i) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        params_[static_cast<Eigen::Index>(off + i)] = bound * (2.0 * u - 1.0);
      }
      for (int i = 0; i < out; ++i) params_[static_cast<Eigen::Index>(off + nw + static_cast<std::size_t>(i))] = 0.0;
      in = out;
    }
  }
}

MultiBranchNet::MultiBranchNet(std::vector<BranchSpec> specs, Eigen::VectorXd params)
    : specs_(std::move(specs)),
      enforcer_(specs_.empty() ? 1 : specs_.front().input_dim),
      id_(g_next_net_id.fetch_add(1)) {
  layout();
  if (params.size() != params_.size()) throw IoError("checkpoint parameter count mismatch");
  params_ = std::move(params);
}

MultiBranchNet::MultiBranchNet(const MultiBranchNet& other)
    : specs_(other.specs_),
      enforcer_(other.enforcer_),
      params_(other.params_),
      branch_offsets_(other.branch_offsets_),
      layer_offsets_(other.layer_offsets_),
      id_(g_next_net_id.fetch_add(1)) {}

MultiBranchNet& MultiBranchNet::operator=(const MultiBranchNet& other) {
  if (this != &other) {
    specs_ = other.specs_;
    enforcer_ = other.enforcer_;
    params_ = other.params_;
    branch_offsets_ = other.branch_offsets_;
    layer_offsets_ = other.layer_offsets_;
    id_ = g_next_net_id.fetch_add(1);
    version_ = 0;
  }
  return *this;
}

void MultiBranchNet::layout() {
  if (specs_.empty()) throw InvalidArgument("network needs at least one branch");
  const int dim = specs_.front().input_dim;
  std::size_t total = 0;
  branch_offsets_.clear();
  layer_offsets_.clear();
  for (const BranchSpec& spec : specs_) {
    spec.validate();
    if (spec.input_dim != dim) throw InvalidArgument("all branches must share the input dimension");
    branch_offsets_.push_back(total);
    std::vector<std::size_t> offs;
    int in = spec.input_dim;
    for (std::size_t l = 0; l < spec.layer_count(); ++l) {
      const int out = l < spec.hidden_widths.size() ? spec.hidden_widths[l] : 1;
      offs.push_back(total);
      total += static_cast<std::size_t>(out) * static_cast<std::size_t>(in + 1);
      in = out;
    }
    layer_offsets_.push_back(std::move(offs));
  }
  params_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(total));
}

std::size_t MultiBranchNet::layer_offset(int k, int layer) const {
  return layer_offsets_.at(static_cast<std::size_t>(k)).at(static_cast<std::size_t>(layer));
}

Eigen::VectorXd& MultiBranchNet::mutable_parameters() {
  ++version_;
  return params_;
}

void MultiBranchNet::set_parameters(const Eigen::VectorXd& theta) {
  if (theta.size() != params_.size()) throw InvalidArgument("parameter vector size mismatch");
  params_ = theta;
  ++version_;
}

void MultiBranchNet::evaluate(const Eigen::MatrixXd& X, int order, BatchEval& out) const {
  if (order < 0 || order > 2) throw InvalidArgument("evaluation order must be 0, 1 or 2");
  const int d = enforcer_.dim();
  if (X.rows() != d) throw InvalidArgument("point dimension does not match the network input");
  if (order == 2)
    for (const BranchSpec& spec : specs_)
      for (Activation act : spec.activations)
        if (!is_twice_differentiable(act))
          throw InvalidArgument("order-2 evaluation needs twice-differentiable activations, found " +
                                std::string(to_string(act)));

  const Eigen::Index n = X.cols();
  const int branches = branch_count();
  auto tape = std::make_shared<NetTape>();
  tape->net_id = id_;
  tape->version = version_;
  tape->order = order;
  enforcer_.evaluate(X, tape->e, tape->grad_e, tape->lap_e);
  tape->layers.resize(static_cast<std::size_t>(branches));

  out.order = order;
  out.U.resize(branches, n);
  out.grad.assign(order >= 1 ? static_cast<std::size_t>(d) : 0, Eigen::MatrixXd(branches, n));
  out.lap.resize(order >= 2 ? branches : 0, order >= 2 ? n : 0);

  const auto dims = static_cast<std::size_t>(d);
  Eigen::MatrixXd act[4];
  for (int k = 0; k < branches; ++k) {
    const BranchSpec& spec = specs_[static_cast<std::size_t>(k)];
    auto& layers = tape->layers[static_cast<std::size_t>(k)];
    layers.resize(spec.layer_count());

    Eigen::MatrixXd h = X;
    std::vector<Eigen::MatrixXd> g, q;
    if (order >= 1) {
      g.assign(dims, Eigen::MatrixXd::Zero(d, n));
      for (int m = 0; m < d; ++m) g[static_cast<std::size_t>(m)].row(m).setOnes();
    }
    if (order >= 2) q.assign(dims, Eigen::MatrixXd::Zero(d, n));

    int in = d;
    for (std::size_t l = 0; l < spec.layer_count(); ++l) {
      const int width = l < spec.hidden_widths.size() ? spec.hidden_widths[l] : 1;
      const std::size_t off = layer_offsets_[static_cast<std::size_t>(k)][l];
      Eigen::Map<const Eigen::MatrixXd> W(params_.data() + off, width, in);
      Eigen::Map<const Eigen::VectorXd> b(params_.data() + off + static_cast<std::size_t>(width * in), width);
      LayerTape& lt = layers[l];
      lt.s.noalias() = W * h;
      lt.s.colwise() += b;
      lt.t.resize(g.size());
      lt.r.resize(q.size());
      for (std::size_t m = 0; m < g.size(); ++m) lt.t[m].noalias() = W * g[m];
      for (std::size_t m = 0; m < q.size(); ++m) lt.r[m].noalias() = W * q[m];
      apply_activation(spec.activations[l], lt.s, order + 1, act);

      lt.h = std::move(h);
      lt.g = std::move(g);
      lt.q = std::move(q);
      h = act[0];
      g.assign(lt.t.size(), Eigen::MatrixXd());
      for (std::size_t m = 0; m < lt.t.size(); ++m) g[m] = act[1].cwiseProduct(lt.t[m]);
      q.assign(lt.r.size(), Eigen::MatrixXd());
      for (std::size_t m = 0; m < lt.r.size(); ++m)
        q[m] = act[2].cwiseProduct(lt.t[m].cwiseProduct(lt.t[m])) + act[1].cwiseProduct(lt.r[m]);
      in = width;
    }

    // enforcer product rule on the scalar branch output N (1 x n)
    const Eigen::RowVectorXd N = h.row(0);
    out.U.row(k) = tape->e.cwiseProduct(N);
    if (order >= 1)
      for (int m = 0; m < d; ++m) {
        const auto mm = static_cast<std::size_t>(m);
        out.grad[mm].row(k) = tape->grad_e.row(m).cwiseProduct(N) + tape->e.cwiseProduct(g[mm].row(0));
      }
    if (order >= 2) {
      Eigen::RowVectorXd lap = tape->lap_e.cwiseProduct(N);
      for (int m = 0; m < d; ++m) {
        const auto mm = static_cast<std::size_t>(m);
        lap += 2.0 * tape->grad_e.row(m).cwiseProduct(g[mm].row(0)) + tape->e.cwiseProduct(q[mm].row(0));
      }
      out.lap.row(k) = lap;
    }
  }
  out.tape = std::move(tape);
}

BatchEval MultiBranchNet::evaluate_point(std::span<const double> x, int order) const {
  Eigen::MatrixXd X(static_cast<Eigen::Index>(x.size()), 1);
  for (std::size_t i = 0; i < x.size(); ++i) X(static_cast<Eigen::Index>(i), 0) = x[i];
  BatchEval out;
  evaluate(X, order, out);
  return out;
}

Eigen::VectorXd MultiBranchNet::param_grad(const BatchEval& eval, const BatchAdjoint& adj) const {
  const NetTape* tape = eval.tape.get();
  if (tape == nullptr || tape->net_id != id_)
    throw InvalidArgument("tape mismatch: evaluation record belongs to a different network");
  if (tape->version != version_)
    throw InvalidArgument("tape mismatch: parameters changed since the evaluation");
  const int d = enforcer_.dim();
  const auto dims = static_cast<std::size_t>(d);
  const Eigen::Index n = eval.points();
  const int branches = branch_count();
  const bool has_grad = !adj.grad.empty();
  const bool has_lap = adj.lap.size() > 0;
  if (adj.U.rows() != branches || adj.U.cols() != n)
    throw InvalidArgument("adjoint of U has the wrong shape");
  if (has_grad && (tape->order < 1 || adj.grad.size() != dims))
    throw InvalidArgument("gradient adjoint needs an order >= 1 evaluation");
  if (has_lap && (tape->order < 2 || adj.lap.rows() != branches || adj.lap.cols() != n))
    throw InvalidArgument("Laplacian adjoint needs an order-2 evaluation");
  // The reverse sweep follows the streams the tape recorded.
  const int order = tape->order;

  Eigen::VectorXd grad = Eigen::VectorXd::Zero(params_.size());
  Eigen::MatrixXd act[4];
  for (int k = 0; k < branches; ++k) {
    const BranchSpec& spec = specs_[static_cast<std::size_t>(k)];
    const auto& layers = tape->layers[static_cast<std::size_t>(k)];

    Eigen::MatrixXd Hb = tape->e.cwiseProduct(adj.U.row(k));
    std::vector<Eigen::MatrixXd> Gb(order >= 1 ? dims : 0, Eigen::MatrixXd::Zero(1, n));
    std::vector<Eigen::MatrixXd> Qb(order >= 2 ? dims : 0, Eigen::MatrixXd::Zero(1, n));
    for (int m = 0; m < d && has_grad; ++m) {
      const auto mm = static_cast<std::size_t>(m);
      Hb += tape->grad_e.row(m).cwiseProduct(adj.grad[mm].row(k));
      Gb[mm] = tape->e.cwiseProduct(adj.grad[mm].row(k));
    }
    if (has_lap) {
      Hb += tape->lap_e.cwiseProduct(adj.lap.row(k));
      for (int m = 0; m < d; ++m) {
        const auto mm = static_cast<std::size_t>(m);
        Gb[mm] += 2.0 * tape->grad_e.row(m).cwiseProduct(adj.lap.row(k));
        Qb[mm] = tape->e.cwiseProduct(adj.lap.row(k));
      }
    }

    for (std::size_t l = spec.layer_count(); l-- > 0;) {
      const LayerTape& lt = layers[l];
      const Eigen::Index width = lt.s.rows(), in = lt.h.rows();
      const std::size_t off = layer_offsets_[static_cast<std::size_t>(k)][l];
      apply_activation(spec.activations[l], lt.s, order + 2, act);

      Eigen::MatrixXd sb = Hb.cwiseProduct(act[1]);
      std::vector<Eigen::MatrixXd> tb(Gb.size()), rb(Qb.size());
      for (std::size_t m = 0; m < Gb.size(); ++m) {
        sb += Gb[m].cwiseProduct(act[2]).cwiseProduct(lt.t[m]);
        tb[m] = Gb[m].cwiseProduct(act[1]);
      }
      for (std::size_t m = 0; m < Qb.size(); ++m) {
        const Eigen::MatrixXd tt = lt.t[m].cwiseProduct(lt.t[m]);
        sb += Qb[m].cwiseProduct(act[3].cwiseProduct(tt) + act[2].cwiseProduct(lt.r[m]));
        tb[m] += 2.0 * Qb[m].cwiseProduct(act[2]).cwiseProduct(lt.t[m]);
        rb[m] = Qb[m].cwiseProduct(act[1]);
      }

      Eigen::Map<Eigen::MatrixXd> dW(grad.data() + off, width, in);
      Eigen::Map<Eigen::VectorXd> db(grad.data() + off + static_cast<std::size_t>(width * in), width);
      dW.noalias() = sb * lt.h.transpose();
      for (std::size_t m = 0; m < tb.size(); ++m) dW.noalias() += tb[m] * lt.g[m].transpose();
      for (std::size_t m = 0; m < rb.size(); ++m) dW.noalias() += rb[m] * lt.q[m].transpose();
      db = sb.rowwise().sum();

      if (l == 0) break;
      Eigen::Map<const Eigen::MatrixXd> W(params_.data() + off, width, in);
      Hb.noalias() = W.transpose() * sb;
      for (std::size_t m = 0; m < Gb.size(); ++m) Gb[m].noalias() = W.transpose() * tb[m];
      for (std::size_t m = 0; m < Qb.size(); ++m) Qb[m].noalias() = W.transpose() * rb[m];
    }
  }
  return grad;
}

// ---------------------------------------------------------------------------

void MultiBranchNet::save(std::ostream& os) const {
  detail::write_magic(os, kCheckpointMagic);
  detail::write_le<std::uint32_t>(os, kCheckpointVersion);
  detail::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(specs_.size()));
  for (const BranchSpec& spec : specs_) {
    detail::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(spec.input_dim));
    detail::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(spec.hidden_widths.size()));
    for (int w : spec.hidden_widths) detail::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(w));
    for (Activation a : spec.activations) detail::write_le<std::uint8_t>(os, static_cast<std::uint8_t>(a));
  }
  detail::write_le<std::uint64_t>(os, static_cast<std::uint64_t>(params_.size()));
  for (Eigen::Index i = 0; i < params_.size(); ++i) detail::write_le<double>(os, params_[i]);
  if (!os) throw IoError("failed to write network checkpoint");
}

MultiBranchNet MultiBranchNet::load(std::istream& is) {
  detail::expect_magic(is, kCheckpointMagic);
  const auto version = detail::read_le<std::uint32_t>(is);
  if (version != kCheckpointVersion)
    throw IoError("unsupported checkpoint version " + std::to_string(version));
  const auto branches = detail::read_le<std::uint32_t>(is);
  if (branches == 0 || branches > 100000) throw IoError("implausible branch count in checkpoint");
  std::vector<BranchSpec> specs(branches);
  for (BranchSpec& spec : specs) {
    spec.input_dim = static_cast<int>(detail::read_le<std::uint32_t>(is));
    const auto hidden = detail::read_le<std::uint32_t>(is);
    if (hidden > 1000) throw IoError("implausible layer count in checkpoint");
    for (std::uint32_t l = 0; l < hidden; ++l)
      spec.hidden_widths.push_back(static_cast<int>(detail::read_le<std::uint32_t>(is)));
    for (std::uint32_t l = 0; l <= hidden; ++l) {
      const auto a = detail::read_le<std::uint8_t>(is);
      if (a > static_cast<std::uint8_t>(Activation::Relu)) throw IoError("bad activation code in checkpoint");
      spec.activations.push_back(static_cast<Activation>(a));
    }
  }
  const auto count = detail::read_le<std::uint64_t>(is);
  std::size_t expected = 0;
  for (const BranchSpec& spec : specs) expected += spec.param_count();
  if (count != expected) throw IoError("checkpoint parameter count mismatch");
  Eigen::VectorXd params(static_cast<Eigen::Index>(count));
  for (Eigen::Index i = 0; i < params.size(); ++i) params[i] = detail::read_le<double>(is);
  try {
    return MultiBranchNet(std::move(specs), std::move(params));
  } catch (const InvalidArgument& e) {
    throw IoError(std::string("invalid checkpoint: ") + e.what());
  }
}

void MultiBranchNet::save(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  save(os);
}

MultiBranchNet MultiBranchNet::load_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path + "'");
  return load(is);
}

}  // namespace sgnet
