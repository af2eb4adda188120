#pragma once

// Unscrambled Sobol sequence (Joe-Kuo direction numbers, Gray-code order).

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace sgnet {

inline constexpr int kMaxSobolDim = 8;

class SobolStream {
 public:
  /// Starts at index `skip`; skip >= 1 drops the origin.
  explicit SobolStream(int dim, std::uint64_t skip = 1);

  int dim() const { return dim_; }
  std::uint64_t cursor() const { return index_; }

  /// Next point in [0,1)^d.
  void next(std::span<double> out);

  /// Next n points mapped affinely into the box [lo, hi]; result is d x n.
  Eigen::MatrixXd batch(std::size_t n, std::span<const double> lo, std::span<const double> hi);
  /// Unit box convenience.
  Eigen::MatrixXd batch(std::size_t n);

 private:
  void seek(std::uint64_t index);

  int dim_;
  std::uint64_t index_ = 0;
  std::vector<std::array<std::uint32_t, 32>> directions_;
  std::vector<std::uint32_t> state_;
};

/// Exact star discrepancy of a one-dimensional point set.
double star_discrepancy_1d(std::vector<double> points);

}  // namespace sgnet
