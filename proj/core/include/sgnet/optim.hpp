#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace sgnet {

struct AdamHyper {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  std::uint64_t t = 0;

  explicit AdamState(Eigen::Index size = 0)
      : m(Eigen::VectorXd::Zero(size)), v(Eigen::VectorXd::Zero(size)) {}
};

/// One bias-corrected Adam update in place. Throws NumericalError on a
/// non-finite gradient, leaving theta and state untouched.
void adam_step(Eigen::VectorXd& theta, const Eigen::VectorXd& grad, AdamState& state, double lr,
               const AdamHyper& hyper = {});

/// lr0 * gamma^floor(step / interval).
double decayed_learning_rate(double lr0, double gamma, std::uint64_t interval, std::uint64_t step);

}  // namespace sgnet
