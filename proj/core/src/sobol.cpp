#include "sgnet/sobol.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "sgnet/error.hpp"

namespace sgnet {

namespace {

struct Primitive {
  int degree;
  std::uint32_t a;
  std::array<std::uint32_t, 5> m;
};

// Dimensions 2..8 of new-joe-kuo-6.21201; dimension 1 is van der Corput.
constexpr std::array<Primitive, kMaxSobolDim - 1> kPrimitives = {{
    {1, 0, {1, 0, 0, 0, 0}},
    {2, 1, {1, 3, 0, 0, 0}},
    {3, 1, {1, 3, 1, 0, 0}},
    {3, 2, {1, 1, 1, 0, 0}},
    {4, 1, {1, 1, 3, 3, 0}},
    {4, 4, {1, 3, 5, 13, 0}},
    {5, 2, {1, 1, 5, 5, 17}},
}};

}  // namespace

SobolStream::SobolStream(int dim, std::uint64_t skip) : dim_(dim) {
  if (dim < 1 || dim > kMaxSobolDim)
    throw InvalidArgument("Sobol dimension must be in [1, " + std::to_string(kMaxSobolDim) + "]");
  directions_.resize(static_cast<std::size_t>(dim));
  for (int j = 0; j < 32; ++j) directions_[0][static_cast<std::size_t>(j)] = 1u << (31 - j);
  for (int d = 1; d < dim; ++d) {
    const Primitive& p = kPrimitives[static_cast<std::size_t>(d - 1)];
    auto& v = directions_[static_cast<std::size_t>(d)];
    const int s = p.degree;
    for (int j = 0; j < s; ++j) v[static_cast<std::size_t>(j)] = p.m[static_cast<std::size_t>(j)] << (31 - j);
    for (int j = s; j < 32; ++j) {
      std::uint32_t value = v[static_cast<std::size_t>(j - s)] ^ (v[static_cast<std::size_t>(j - s)] >> s);
      for (int k = 1; k < s; ++k)
        if ((p.a >> (s - 1 - k)) & 1u) value ^= v[static_cast<std::size_t>(j - k)];
      v[static_cast<std::size_t>(j)] = value;
    }
  }
  seek(skip);
}

void SobolStream::seek(std::uint64_t index) {
  if (index >= (std::uint64_t{1} << 32)) throw InvalidArgument("Sobol index exceeds 2^32");
  index_ = index;
  state_.assign(static_cast<std::size_t>(dim_), 0u);
  const std::uint64_t gray = index ^ (index >> 1);
  for (int j = 0; j < 32; ++j)
    if ((gray >> j) & 1u)
      for (int d = 0; d < dim_; ++d)
        state_[static_cast<std::size_t>(d)] ^= directions_[static_cast<std::size_t>(d)][static_cast<std::size_t>(j)];
}

void SobolStream::next(std::span<double> out) {
  if (out.size() != static_cast<std::size_t>(dim_)) throw InvalidArgument("Sobol dimension mismatch");
  if (index_ >= (std::uint64_t{1} << 32) - 1) throw InvalidArgument("Sobol stream exhausted");
  for (int d = 0; d < dim_; ++d)
    out[static_cast<std::size_t>(d)] = static_cast<double>(state_[static_cast<std::size_t>(d)]) * 0x1.0p-32;
  // x_{i+1} = x_i xor v_c, c = position of the lowest zero bit of i
  const int c = std::countr_one(index_);
  for (int d = 0; d < dim_; ++d)
    state_[static_cast<std::size_t>(d)] ^= directions_[static_cast<std::size_t>(d)][static_cast<std::size_t>(c)];
  ++index_;
}

Eigen::MatrixXd SobolStream::batch(std::size_t n, std::span<const double> lo, std::span<const double> hi) {
  if (lo.size() != static_cast<std::size_t>(dim_) || hi.size() != static_cast<std::size_t>(dim_))
    throw InvalidArgument("Sobol batch: box dimension mismatch");
  if (n == 0) throw InvalidArgument("Sobol batch: n must be positive");
  Eigen::MatrixXd X(dim_, static_cast<Eigen::Index>(n));
  for (Eigen::Index l = 0; l < X.cols(); ++l) {
    next(std::span<double>(X.col(l).data(), static_cast<std::size_t>(dim_)));
    for (int d = 0; d < dim_; ++d) {
      const auto dd = static_cast<std::size_t>(d);
      X(d, l) = lo[dd] + (hi[dd] - lo[dd]) * X(d, l);
    }
  }
  return X;
}

Eigen::MatrixXd SobolStream::batch(std::size_t n) {
  const std::vector<double> lo(static_cast<std::size_t>(dim_), 0.0), hi(static_cast<std::size_t>(dim_), 1.0);
  return batch(n, lo, hi);
}

double star_discrepancy_1d(std::vector<double> points) {
  if (points.empty()) throw InvalidArgument("star discrepancy of an empty set");
  std::sort(points.begin(), points.end());
  const double n = static_cast<double>(points.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    worst = std::max(worst, std::abs(points[i] - (2.0 * static_cast<double>(i) + 1.0) / (2.0 * n)));
  return 1.0 / (2.0 * n) + worst;
}

}  // namespace sgnet
