#include "sgnet/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

#include "binary_io.hpp"
#include "sgnet/error.hpp"

namespace sgnet {

std::string_view to_string(PolyFamily family) {
  switch (family) {
    case PolyFamily::HermiteProbabilist: return "hermite";
    case PolyFamily::LegendreUniform: return "legendre";
  }
  return "unknown";
}

PolyFamily parse_family(std::string_view name) {
  if (name == "hermite") return PolyFamily::HermiteProbabilist;
  if (name == "legendre") return PolyFamily::LegendreUniform;
  throw InvalidArgument("unknown polynomial family '" + std::string(name) + "'");
}

void eval_univariate_all(PolyFamily family, double y, std::span<double> out) {
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() == 1) return;
  switch (family) {
    case PolyFamily::HermiteProbabilist: {
      out[1] = y;
      for (std::size_t k = 1; k + 1 < out.size(); ++k) {
        const double kk = static_cast<double>(k);
        out[k + 1] = (y * out[k] - std::sqrt(kk) * out[k - 1]) / std::sqrt(kk + 1.0);
      }
      break;
    }
    case PolyFamily::LegendreUniform: {
      // Classical P_k first, scaled in place afterwards.
      out[1] = y;
      for (std::size_t k = 1; k + 1 < out.size(); ++k) {
        const double kk = static_cast<double>(k);
        out[k + 1] = ((2.0 * kk + 1.0) * y * out[k] - kk * out[k - 1]) / (kk + 1.0);
      }
      for (std::size_t k = 1; k < out.size(); ++k)
        out[k] *= std::sqrt(2.0 * static_cast<double>(k) + 1.0);
      break;
    }
  }
}

double eval_univariate(PolyFamily family, int k, double y) {
  if (k < 0) throw InvalidArgument("polynomial degree must be non-negative");
  if (k == 0) return 1.0;
  std::vector<double> values(static_cast<std::size_t>(k) + 1);
  eval_univariate_all(family, y, values);
  return values.back();
}

double factorial(int n) {
  if (n < 0) throw InvalidArgument("factorial of negative number");
  if (n <= 20) {
    std::uint64_t f = 1;
    for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
    return static_cast<double>(f);
  }
  return std::exp(std::lgamma(static_cast<double>(n) + 1.0));
}

double log_factorial(int n) {
  if (n < 0) throw InvalidArgument("factorial of negative number");
  if (n <= 20) return std::log(factorial(n));
  return std::lgamma(static_cast<double>(n) + 1.0);
}

int total_degree(const MultiIndex& nu) {
  int d = 0;
  for (int v : nu) d += v;
  return d;
}

bool graded_lex_less(const MultiIndex& lhs, const MultiIndex& rhs) {
  if (lhs.size() != rhs.size())
    throw InvalidArgument("graded_lex_less: multi-index length mismatch");
  const int dl = total_degree(lhs);
  const int dr = total_degree(rhs);
  if (dl != dr) return dl < dr;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    if (lhs[i] != rhs[i]) return lhs[i] < rhs[i];
  }
  return false;
}

std::size_t basis_dim(int N, int P) {
  if (N < 1 || N > kMaxStochasticDim)
    throw InvalidArgument("stochastic dimension N=" + std::to_string(N) + " outside [1, " +
                          std::to_string(kMaxStochasticDim) + "]");
  if (P < 0) throw InvalidArgument("polynomial degree P must be non-negative");
  // binom(N+P, min(N,P)) built incrementally; every partial product is itself a
  // binomial coefficient, so the division is exact.
  const int r = std::min(N, P);
  std::uint64_t value = 1;
  for (int i = 1; i <= r; ++i) {
    const std::uint64_t num = static_cast<std::uint64_t>(N + P - r + i);
    if (value > std::numeric_limits<std::uint64_t>::max() / num)
      throw InvalidArgument("basis dimension overflows");
    value = value * num / static_cast<std::uint64_t>(i);
  }
  if (value > kMaxBasisSize)
    throw InvalidArgument("basis dimension " + std::to_string(value) + " exceeds limit " +
                          std::to_string(kMaxBasisSize));
  return static_cast<std::size_t>(value);
}

namespace {

// Fills prefix[pos..] with every tail summing to `remaining`, lexicographically
// ascending (smaller leading entry first), appending each completed index.
void append_compositions(MultiIndex& prefix, std::size_t pos, int remaining,
                         std::vector<MultiIndex>& out) {
  if (pos + 1 == prefix.size()) {
    prefix[pos] = remaining;
    out.push_back(prefix);
    return;
  }
  for (int v = 0; v <= remaining; ++v) {
    prefix[pos] = v;
    append_compositions(prefix, pos + 1, remaining - v, out);
  }
}

}  // namespace

std::vector<MultiIndex> enumerate_indices(int N, int P) {
  const std::size_t count = basis_dim(N, P);
  std::vector<MultiIndex> out;
  out.reserve(count);
  MultiIndex scratch(static_cast<std::size_t>(N), 0);
  for (int degree = 0; degree <= P; ++degree) append_compositions(scratch, 0, degree, out);
  return out;
}

OrderedBasis::OrderedBasis(int N, int P, PolyFamily family)
    : OrderedBasis(std::vector<PolyFamily>(static_cast<std::size_t>(std::max(N, 0)), family), P) {}

OrderedBasis::OrderedBasis(std::vector<PolyFamily> families, int P)
    : families_(std::move(families)), max_degree_(P) {
  indices_ = enumerate_indices(static_cast<int>(families_.size()), P);
}

const MultiIndex& OrderedBasis::index(std::size_t k) const {
  if (k >= indices_.size())
    throw InvalidArgument("basis index " + std::to_string(k) + " out of range");
  return indices_[k];
}

double OrderedBasis::eval(std::size_t k, std::span<const double> y) const {
  const MultiIndex& nu = index(k);
  if (y.size() != families_.size()) throw InvalidArgument("eval: point dimension mismatch");
  double value = 1.0;
  for (std::size_t n = 0; n < nu.size(); ++n) value *= eval_univariate(families_[n], nu[n], y[n]);
  return value;
}

void OrderedBasis::eval_all(std::span<const double> y, std::span<double> out) const {
  if (y.size() != families_.size()) throw InvalidArgument("eval_all: point dimension mismatch");
  if (out.size() != indices_.size()) throw InvalidArgument("eval_all: output size mismatch");
  const std::size_t N = families_.size();
  const std::size_t stride = static_cast<std::size_t>(max_degree_) + 1;
  std::vector<double> table(N * stride);
  for (std::size_t n = 0; n < N; ++n)
    eval_univariate_all(families_[n], y[n], std::span<double>(table).subspan(n * stride, stride));
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    const MultiIndex& nu = indices_[k];
    double value = 1.0;
    for (std::size_t n = 0; n < N; ++n) value *= table[n * stride + static_cast<std::size_t>(nu[n])];
    out[k] = value;
  }
}

QuadratureRule gauss_rule(PolyFamily family, int n) {
  if (n < 1) throw InvalidArgument("gauss_rule: node count must be positive");
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) {
    const double kk = static_cast<double>(k);
    sub[k - 1] = family == PolyFamily::HermiteProbabilist ? std::sqrt(kk)
                                                          : kk / std::sqrt(4.0 * kk * kk - 1.0);
  }
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  if (n == 1) {
    rule.nodes[0] = 0.0;
    rule.weights[0] = 1.0;
    return rule;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
    throw NumericalError("gauss_rule: Jacobi eigen-solve failed for n=" + std::to_string(n));
  // Newton polish on p_n, then Christoffel weights 1 / sum_k p_k(x)^2; the
  // eigenvector weights are only absolutely accurate and fail in the tails.
  auto jacobi = [&](int k) { return k == 0 ? 0.0 : sub[k - 1]; };
  auto beta = [&](int k) {
    const double kk = static_cast<double>(k);
    return family == PolyFamily::HermiteProbabilist ? std::sqrt(kk)
                                                    : kk / std::sqrt(4.0 * kk * kk - 1.0);
  };
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    double x = solver.eigenvalues()[i];
    double christoffel = 0.0;
    for (int iter = 0; iter < 3; ++iter) {
      double p_prev = 0.0, p = 1.0, d_prev = 0.0, d = 0.0;
      christoffel = 1.0;
      for (int k = 0; k < n; ++k) {
        const double b_next = k + 1 < n ? jacobi(k + 1) : beta(n);
        const double p_next = (x * p - jacobi(k) * p_prev) / b_next;
        const double d_next = (p + x * d - jacobi(k) * d_prev) / b_next;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
        if (k + 1 < n) christoffel += p * p;
      }
      if (d != 0.0 && iter < 2) x -= p / d;
    }
    rule.nodes[static_cast<std::size_t>(i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = 1.0 / christoffel;
    total += 1.0 / christoffel;
  }
  // Both measures are symmetric; pin the rule to exact symmetry.
  for (int i = 0; i < n / 2; ++i) {
    const auto a = static_cast<std::size_t>(i);
    const auto b = static_cast<std::size_t>(n - 1 - i);
    const double x = 0.5 * (rule.nodes[b] - rule.nodes[a]);
    const double w = 0.5 * (rule.weights[a] + rule.weights[b]);
    rule.nodes[a] = -x;
    rule.nodes[b] = x;
    rule.weights[a] = w;
    rule.weights[b] = w;
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  for (double& w : rule.weights) w /= total;
  return rule;
}

QuadratureRule gauss_legendre_interval(int n, double a, double b) {
  QuadratureRule rule = gauss_rule(PolyFamily::LegendreUniform, n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    rule.nodes[q] = mid + half * rule.nodes[q];
    // probability weights on [-1,1] carry the density 1/2
    rule.weights[q] *= 2.0 * half;
  }
  return rule;
}

QuadratureRule split_normal_rule(double kink, double radius, double panel_width,
                                 int points_per_panel) {
  if (!(radius > 0.0) || !(panel_width > 0.0) || points_per_panel < 1)
    throw InvalidArgument("split_normal_rule: invalid parameters");
  const QuadratureRule ref = gauss_rule(PolyFamily::LegendreUniform, points_per_panel);
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * M_PI);
  QuadratureRule rule;
  auto add_interval = [&](double lo, double hi) {
    if (!(hi > lo)) return;
    const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / panel_width)));
    const double h = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
      const double a = lo + p * h;
      const double mid = a + 0.5 * h;
      for (std::size_t q = 0; q < ref.size(); ++q) {
        const double y = mid + 0.5 * h * ref.nodes[q];
        rule.nodes.push_back(y);
        rule.weights.push_back(ref.weights[q] * h * inv_sqrt_2pi * std::exp(-0.5 * y * y));
      }
    }
  };
  const double split = std::clamp(kink, -radius, radius);
  add_interval(-radius, split);
  add_interval(split, radius);
  return rule;
}

int triple_product_nodes(int P) { return (3 * P + 1 + 1) / 2 + 2; }

GalerkinTensor::GalerkinTensor(std::size_t dim) : dim_(dim), entries_(dim * dim * dim, 0.0) {}

GalerkinTensor galerkin_tensor(const OrderedBasis& basis) {
  const std::size_t N = static_cast<std::size_t>(basis.stochastic_dim());
  const std::size_t P1 = static_cast<std::size_t>(basis.max_degree()) + 1;
  const std::size_t dim = basis.size();

  // Univariate triple products per dimension, filled symmetrically from the
  // sorted (a <= b <= c) representative so permuted entries are bitwise equal.
  std::vector<std::vector<double>> triple(N, std::vector<double>(P1 * P1 * P1, 0.0));
  for (std::size_t n = 0; n < N; ++n) {
    const PolyFamily fam = basis.family(static_cast<int>(n));
    bool duplicate = false;
    for (std::size_t m = 0; m < n; ++m) {
      if (basis.family(static_cast<int>(m)) == fam) {
        triple[n] = triple[m];
        duplicate = true;
        break;
      }
    }
    if (duplicate) continue;
    const QuadratureRule rule = gauss_rule(fam, triple_product_nodes(basis.max_degree()));
    std::vector<double> values(rule.size() * P1);
    for (std::size_t q = 0; q < rule.size(); ++q)
      eval_univariate_all(fam, rule.nodes[q], std::span<double>(values).subspan(q * P1, P1));
    auto& g = triple[n];
    for (std::size_t a = 0; a < P1; ++a)
      for (std::size_t b = a; b < P1; ++b)
        for (std::size_t c = b; c < P1; ++c) {
          double sum = 0.0;
          for (std::size_t q = 0; q < rule.size(); ++q)
            sum += rule.weights[q] * values[q * P1 + a] * values[q * P1 + b] * values[q * P1 + c];
          const std::size_t perms[6][3] = {{a, b, c}, {a, c, b}, {b, a, c},
                                           {b, c, a}, {c, a, b}, {c, b, a}};
          for (const auto& p : perms) g[(p[0] * P1 + p[1]) * P1 + p[2]] = sum;
        }
  }

  GalerkinTensor G(dim);
  const auto& idx = basis.indices();
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = i; j < dim; ++j)
      for (std::size_t k = j; k < dim; ++k) {
        double value = 1.0;
        for (std::size_t n = 0; n < N; ++n) {
          const auto a = static_cast<std::size_t>(idx[i][n]);
          const auto b = static_cast<std::size_t>(idx[j][n]);
          const auto c = static_cast<std::size_t>(idx[k][n]);
          value *= triple[n][(a * P1 + b) * P1 + c];
        }
        G(i, j, k) = value;
        G(i, k, j) = value;
        G(j, i, k) = value;
        G(j, k, i) = value;
        G(k, i, j) = value;
        G(k, j, i) = value;
      }
  return G;
}

void write_tensor(std::ostream& os, const GalerkinTensor& tensor, PolyFamily family) {
  detail::write_magic(os, "SGGT");
  detail::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(tensor.dim()));
  detail::write_le<std::uint8_t>(os, static_cast<std::uint8_t>(family));
  for (double v : tensor.entries()) detail::write_le<double>(os, v);
  if (!os) throw IoError("write_tensor: stream failure");
}

GalerkinTensor read_tensor(std::istream& is, PolyFamily* family) {
  detail::expect_magic(is, "SGGT");
  const auto dim = detail::read_le<std::uint32_t>(is);
  const auto code = detail::read_le<std::uint8_t>(is);
  if (code > 1) throw IoError("read_tensor: unknown family code");
  if (family) *family = static_cast<PolyFamily>(code);
  GalerkinTensor tensor(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      for (std::size_t k = 0; k < dim; ++k) tensor(i, j, k) = detail::read_le<double>(is);
  return tensor;
}

double project_1d(const std::function<double(double)>& g, PolyFamily family, int k,
                  const QuadratureRule& rule) {
  if (k < 0) throw InvalidArgument("project_1d: negative degree");
  std::vector<double> p(static_cast<std::size_t>(k) + 1);
  double sum = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double gv = g(rule.nodes[q]);
    if (!std::isfinite(gv))
      throw NumericalError("project_1d: non-finite integrand at node " +
                           std::to_string(rule.nodes[q]));
    eval_univariate_all(family, rule.nodes[q], p);
    sum += rule.weights[q] * gv * p.back();
  }
  return sum;
}

GermSampler::GermSampler(std::vector<PolyFamily> families, std::uint64_t seed)
    : families_(std::move(families)), rng_(seed) {}

void GermSampler::next(std::span<double> y) {
  if (y.size() != families_.size()) throw InvalidArgument("GermSampler: dimension mismatch");
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (families_[i] == PolyFamily::HermiteProbabilist) {
      y[i] = normal_(rng_);
    } else {
      y[i] = 2.0 * (static_cast<double>(rng_() >> 11) * 0x1.0p-53) - 1.0;
    }
  }
}

}  // namespace sgnet
