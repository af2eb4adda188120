#include "sgnet/optim.hpp"

#include <cmath>
#include <string>

#include "sgnet/error.hpp"

namespace sgnet {

void adam_step(Eigen::VectorXd& theta, const Eigen::VectorXd& grad, AdamState& state, double lr,
               const AdamHyper& hyper) {
  if (grad.size() != theta.size() || state.m.size() != theta.size() || state.v.size() != theta.size())
    throw InvalidArgument("adam_step: dimension mismatch");
  for (Eigen::Index i = 0; i < grad.size(); ++i)
    if (!std::isfinite(grad[i]))
      throw NumericalError("adam_step: non-finite gradient entry at index " + std::to_string(i));
  ++state.t;
  const double t = static_cast<double>(state.t);
  const double c1 = 1.0 - std::pow(hyper.beta1, t);
  const double c2 = 1.0 - std::pow(hyper.beta2, t);
  for (Eigen::Index i = 0; i < grad.size(); ++i) {
    const double g = grad[i];
    state.m[i] = hyper.beta1 * state.m[i] + (1.0 - hyper.beta1) * g;
    state.v[i] = hyper.beta2 * state.v[i] + (1.0 - hyper.beta2) * g * g;
    theta[i] -= lr * (state.m[i] / c1) / (std::sqrt(state.v[i] / c2) + hyper.eps);
  }
}

double decayed_learning_rate(double lr0, double gamma, std::uint64_t interval, std::uint64_t step) {
  if (interval == 0) throw InvalidArgument("learning-rate decay interval must be positive");
  return lr0 * std::pow(gamma, static_cast<double>(step / interval));
}

}  // namespace sgnet
