#pragma once

// Orthonormal polynomial chaos machinery: univariate families, graded
// lexicographic multi-indices, Gauss rules and the Galerkin triple-product
// tensor.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sgnet {

enum class PolyFamily : std::uint8_t {
  HermiteProbabilist = 0,  ///< orthonormal w.r.t. N(0,1)
  LegendreUniform = 1,     ///< orthonormal w.r.t. U[-1,1]
};

std::string_view to_string(PolyFamily family);
/// Accepts "hermite" or "legendre" (case sensitive).
PolyFamily parse_family(std::string_view name);

/// k-th orthonormal polynomial of `family` at y.
double eval_univariate(PolyFamily family, int k, double y);

/// Values p_0(y) .. p_{out.size()-1}(y) in one recurrence sweep.
void eval_univariate_all(PolyFamily family, double y, std::span<double> out);

double factorial(int n);
double log_factorial(int n);

using MultiIndex = std::vector<int>;

int total_degree(const MultiIndex& nu);

/// Graded lexicographic order: total degree first, then the first differing
/// entry. Throws InvalidArgument on length mismatch.
bool graded_lex_less(const MultiIndex& lhs, const MultiIndex& rhs);

/// Number of multi-indices of length N with total degree <= P, i.e.
/// (N+P)!/(N!P!). Throws InvalidArgument beyond the enumeration limits.
std::size_t basis_dim(int N, int P);

/// Largest basis the library will enumerate.
inline constexpr std::size_t kMaxBasisSize = 200000;
inline constexpr int kMaxStochasticDim = 64;

/// All multi-indices with |nu| <= P in graded lexicographic order.
std::vector<MultiIndex> enumerate_indices(int N, int P);

/// Truncated tensor-product chaos basis p_0 .. p_M.
class OrderedBasis {
 public:
  OrderedBasis(int N, int P, PolyFamily family);
  OrderedBasis(std::vector<PolyFamily> families, int P);

  int stochastic_dim() const { return static_cast<int>(families_.size()); }
  int max_degree() const { return max_degree_; }
  std::size_t size() const { return indices_.size(); }
  PolyFamily family(int n) const { return families_.at(static_cast<std::size_t>(n)); }
  const std::vector<PolyFamily>& families() const { return families_; }
  const MultiIndex& index(std::size_t k) const;
  const std::vector<MultiIndex>& indices() const { return indices_; }

  /// p_k(y); y must have stochastic_dim() entries.
  double eval(std::size_t k, std::span<const double> y) const;

  /// All p_0(y) .. p_M(y); `out` must have size() entries.
  void eval_all(std::span<const double> y, std::span<double> out) const;

 private:
  std::vector<PolyFamily> families_;
  int max_degree_;
  std::vector<MultiIndex> indices_;
};

/// Nodes and weights; weights integrate against a probability measure unless
/// stated otherwise by the constructing function.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }

  template <class F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t q = 0; q < nodes.size(); ++q) sum += weights[q] * f(nodes[q]);
    return sum;
  }
};

/// n-point Gauss rule for the family's probability measure (Golub-Welsch).
QuadratureRule gauss_rule(PolyFamily family, int n);

/// n-point Gauss-Legendre rule on [a,b] with Lebesgue weights.
QuadratureRule gauss_legendre_interval(int n, double a, double b);

/// Composite Gauss-Legendre rule for integrals against the standard normal
/// density, split at `kink` and truncated to [-radius, radius]. Suited for
/// integrands with a single C^0 point.
QuadratureRule split_normal_rule(double kink, double radius = 12.0,
                                 double panel_width = 0.25,
                                 int points_per_panel = 20);

/// Node count used for univariate triple products at max degree P.
int triple_product_nodes(int P);

/// Dense fully symmetric G_ijk = <p_i p_j, p_k>.
class GalerkinTensor {
 public:
  GalerkinTensor() = default;
  explicit GalerkinTensor(std::size_t dim);

  std::size_t dim() const { return dim_; }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return entries_[(i * dim_ + j) * dim_ + k];
  }
  double& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return entries_[(i * dim_ + j) * dim_ + k];
  }
  /// Row-major (i,j,k) storage.
  std::span<const double> entries() const { return entries_; }
  /// Slice G_i.. as a dim x dim row-major matrix.
  std::span<const double> slice(std::size_t i) const {
    return std::span<const double>(entries_).subspan(i * dim_ * dim_, dim_ * dim_);
  }

 private:
  std::size_t dim_ = 0;
  std::vector<double> entries_;
};

GalerkinTensor galerkin_tensor(const OrderedBasis& basis);

/// Binary dump: "SGGT", u32 dim, u8 family code, then little-endian f64 in
/// row-major (i,j,k) order.
void write_tensor(std::ostream& os, const GalerkinTensor& tensor, PolyFamily family);
GalerkinTensor read_tensor(std::istream& is, PolyFamily* family = nullptr);

/// sum_q w_q g(y_q) p_k(y_q). Throws NumericalError if g is non-finite at a node.
double project_1d(const std::function<double(double)>& g, PolyFamily family, int k,
                  const QuadratureRule& rule);

/// Sequential i.i.d. draws from the product germ measure of a basis
/// (standard normal or uniform on [-1,1] per coordinate).
class GermSampler {
 public:
  GermSampler(std::vector<PolyFamily> families, std::uint64_t seed);

  std::size_t dim() const { return families_.size(); }
  void next(std::span<double> y);

 private:
  std::vector<PolyFamily> families_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_;
};

}  // namespace sgnet
