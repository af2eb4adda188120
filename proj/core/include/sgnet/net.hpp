#pragma once

// Multi-branch feedforward network U_k(x) = e(x) N_k(x) with exact input
// derivatives up to the Laplacian and reverse-mode parameter gradients.

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sgnet {

/// ReLU is accepted for order <= 1 only; it exists to exercise the C^2 check.
enum class Activation : std::uint8_t { Swish = 0, Sigmoid = 1, Linear = 2, Relu = 3 };

std::string_view to_string(Activation act);
Activation parse_activation(std::string_view name);
bool is_twice_differentiable(Activation act);

/// Scalar activation value and derivatives f, f', f'', f'''.
struct ActivationDerivs {
  double f = 0.0, d1 = 0.0, d2 = 0.0, d3 = 0.0;
};
ActivationDerivs activation_derivs(Activation act, double z);

struct BranchSpec {
  int input_dim = 1;
  std::vector<int> hidden_widths;
  /// One per layer including the output layer.
  std::vector<Activation> activations;

  std::size_t layer_count() const { return hidden_widths.size() + 1; }
  std::size_t param_count() const;
  void validate() const;
};

/// Convenience: all hidden layers use `hidden`, the first uses `first`, output linear.
BranchSpec make_branch_spec(int input_dim, std::vector<int> widths, Activation first,
                            Activation hidden);

/// e(x) = prod_m x_m (1 - x_m) on the unit box, in 1 or 2 dimensions.
class Enforcer {
 public:
  explicit Enforcer(int dim);

  int dim() const { return dim_; }
  double value(std::span<const double> x) const;
  /// Fills e (1 x n), grad (d x n), lap (1 x n) for points X (d x n).
  void evaluate(const Eigen::MatrixXd& X, Eigen::RowVectorXd& e, Eigen::MatrixXd& grad,
                Eigen::RowVectorXd& lap) const;

 private:
  int dim_;
};

struct NetTape;

/// Per-batch evaluation, rows are branches and columns batch points.
struct BatchEval {
  int order = 0;
  Eigen::MatrixXd U;
  /// grad[m](k, l) = d U_k / d x_m at point l.
  std::vector<Eigen::MatrixXd> grad;
  Eigen::MatrixXd lap;
  std::shared_ptr<const NetTape> tape;

  Eigen::Index branches() const { return U.rows(); }
  Eigen::Index points() const { return U.cols(); }
};

/// Adjoints of a scalar w.r.t. the BatchEval entries (same shapes; unused ones empty).
struct BatchAdjoint {
  Eigen::MatrixXd U;
  std::vector<Eigen::MatrixXd> grad;
  Eigen::MatrixXd lap;
};

/// Anything that yields branch values and input derivatives on a batch.
class BranchedModel {
 public:
  virtual ~BranchedModel() = default;
  virtual int branch_count() const = 0;
  virtual int input_dim() const = 0;
  /// X is d x n.
  virtual void evaluate(const Eigen::MatrixXd& X, int order, BatchEval& out) const = 0;
};

/// Closed-form branches, used for exact-solution checks and references.
class FunctionModel final : public BranchedModel {
 public:
  /// fn(k, x, u, grad, lap); grad has input_dim entries.
  using BranchFn = std::function<void(int k, std::span<const double> x, double& u,
                                      std::span<double> grad, double& lap)>;

  FunctionModel(int branches, int input_dim, BranchFn fn);

  int branch_count() const override { return branches_; }
  int input_dim() const override { return input_dim_; }
  void evaluate(const Eigen::MatrixXd& X, int order, BatchEval& out) const override;

 private:
  int branches_;
  int input_dim_;
  BranchFn fn_;
};

class MultiBranchNet final : public BranchedModel {
 public:
  /// Glorot-uniform weights, zero biases, deterministic in `seed`.
  MultiBranchNet(std::vector<BranchSpec> specs, std::uint64_t seed);

  MultiBranchNet(const MultiBranchNet& other);
  MultiBranchNet& operator=(const MultiBranchNet& other);
  MultiBranchNet(MultiBranchNet&&) noexcept = default;
  MultiBranchNet& operator=(MultiBranchNet&&) noexcept = default;

  int branch_count() const override { return static_cast<int>(specs_.size()); }
  int input_dim() const override { return enforcer_.dim(); }
  const std::vector<BranchSpec>& specs() const { return specs_; }
  const Enforcer& enforcer() const { return enforcer_; }

  std::size_t param_count() const { return static_cast<std::size_t>(params_.size()); }
  std::size_t branch_offset(int k) const { return branch_offsets_.at(static_cast<std::size_t>(k)); }
  /// Offset of W (out x in, column-major) of a layer; b follows W.
  std::size_t layer_offset(int k, int layer) const;

  const Eigen::VectorXd& parameters() const { return params_; }
  /// Mutable access bumps the version, invalidating outstanding tapes.
  Eigen::VectorXd& mutable_parameters();
  void set_parameters(const Eigen::VectorXd& theta);

  std::uint64_t id() const { return id_; }
  std::uint64_t version() const { return version_; }

  void evaluate(const Eigen::MatrixXd& X, int order, BatchEval& out) const override;
  /// Single point convenience.
  BatchEval evaluate_point(std::span<const double> x, int order) const;

  /// Reverse sweep: gradient of the scalar whose adjoints are `adj`.
  Eigen::VectorXd param_grad(const BatchEval& eval, const BatchAdjoint& adj) const;

  void save(std::ostream& os) const;
  static MultiBranchNet load(std::istream& is);
  void save(const std::string& path) const;
  static MultiBranchNet load_file(const std::string& path);

 private:
  MultiBranchNet(std::vector<BranchSpec> specs, Eigen::VectorXd params);
  void layout();

  std::vector<BranchSpec> specs_;
  Enforcer enforcer_;
  Eigen::VectorXd params_;
  std::vector<std::size_t> branch_offsets_;
  std::vector<std::vector<std::size_t>> layer_offsets_;
  std::uint64_t id_;
  std::uint64_t version_ = 0;
};

/// Identical BranchSpec for every branch.
std::vector<BranchSpec> replicate_spec(const BranchSpec& spec, int branches);

}  // namespace sgnet
