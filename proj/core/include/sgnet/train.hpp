#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sgnet/losses.hpp"
#include "sgnet/net.hpp"

namespace sgnet {

struct TrainConfig {
  std::size_t batch_size = 512;
  std::size_t steps_per_epoch = 50;
  std::size_t max_epochs = 5000;
  double lr0 = 1e-3;
  double gamma = 0.97;
  std::uint64_t decay_interval = 200;
  /// Epochs without improvement before stopping.
  std::size_t patience = 50;
  /// Strong loss only.
  double risk_threshold = 1e-7;
  std::size_t validation_interval = 10;
  std::uint64_t seed_sobol = 1;
  /// 0 disables checkpoints.
  std::size_t checkpoint_interval = 0;
  std::string checkpoint_dir;
  /// Empty disables the history CSV.
  std::string history_path;

  void validate() const;
};

struct EpochRecord {
  std::size_t epoch = 0;
  double risk = 0.0;
  double lr = 0.0;
  std::optional<double> validation;
  double seconds = 0.0;
};

struct TrainResult {
  std::vector<EpochRecord> history;
  std::size_t epochs = 0;
  double final_risk = 0.0;
  /// NaN when no validation set was supplied.
  double final_validation = 0.0;
  double seconds = 0.0;
  std::string stop_reason;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

/// Trains `net` in place and leaves the final parameters in it. Throws
/// TrainingAborted when the risk or its gradient becomes non-finite.
TrainResult train(MultiBranchNet& net, LossKind kind, const LossAssembler& loss,
                  const TrainConfig& config, const ValidationSet* validation = nullptr,
                  const EpochCallback& on_epoch = {});

}  // namespace sgnet
