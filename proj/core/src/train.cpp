#include "sgnet/train.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "sgnet/error.hpp"
#include "sgnet/optim.hpp"
#include "sgnet/sobol.hpp"

namespace sgnet {

void TrainConfig::validate() const {
  if (batch_size == 0) throw InvalidArgument("batch_size must be positive");
  if (steps_per_epoch == 0) throw InvalidArgument("steps_per_epoch must be positive");
  if (max_epochs == 0) throw InvalidArgument("max_epochs must be positive");
  if (!(lr0 > 0.0)) throw InvalidArgument("initial learning rate must be positive");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw InvalidArgument("decay factor must lie in (0, 1]");
  if (decay_interval == 0) throw InvalidArgument("decay interval must be positive");
  if (!(risk_threshold >= 0.0)) throw InvalidArgument("risk threshold must be non-negative");
  if (validation_interval == 0) throw InvalidArgument("validation interval must be positive");
}

namespace {

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

class HistoryWriter {
 public:
  explicit HistoryWriter(const std::string& path) {
    if (path.empty()) return;
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    os_.open(path);
    if (!os_) throw IoError("cannot write training history '" + path + "'");
    os_ << "epoch,risk,lr,validation_error,seconds\n";
  }

  void write(const EpochRecord& r) {
    if (!os_.is_open()) return;
    os_ << r.epoch << ',' << format_double(r.risk) << ',' << format_double(r.lr) << ','
        << (r.validation ? format_double(*r.validation) : std::string()) << ','
        << format_double(r.seconds) << '\n';
    os_.flush();
    if (!os_) throw IoError("failed writing training history");
  }

 private:
  std::ofstream os_;
};

}  // namespace

TrainResult train(MultiBranchNet& net, LossKind kind, const LossAssembler& loss,
                  const TrainConfig& config, const ValidationSet* validation,
                  const EpochCallback& on_epoch) {
  config.validate();
  const int d = net.input_dim();
  SobolStream stream(d, config.seed_sobol);
  AdamState adam(static_cast<Eigen::Index>(net.param_count()));
  HistoryWriter history(config.history_path);
  if (config.checkpoint_interval > 0) {
    if (config.checkpoint_dir.empty()) throw InvalidArgument("checkpoint interval set without a directory");
    std::filesystem::create_directories(config.checkpoint_dir);
  }

  TrainResult result;
  result.final_validation = std::numeric_limits<double>::quiet_NaN();
  double best_risk = std::numeric_limits<double>::infinity();
  double best_validation = std::numeric_limits<double>::infinity();
  std::size_t best_risk_epoch = 0, best_validation_epoch = 0;
  std::uint64_t step = 0;
  const auto start = std::chrono::steady_clock::now();

  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    double risk_sum = 0.0;
    double lr = config.lr0;
    for (std::size_t s = 0; s < config.steps_per_epoch; ++s, ++step) {
      lr = decayed_learning_rate(config.lr0, config.gamma, config.decay_interval, step);
      const Eigen::MatrixXd X = stream.batch(config.batch_size);
      RiskResult r;
      try {
        r = loss.risk(kind, net, X);
      } catch (const NumericalError& e) {
        throw TrainingAborted(std::string(e.what()) + " in epoch " + std::to_string(epoch), epoch);
      }
      if (!std::isfinite(r.risk))
        throw TrainingAborted("non-finite risk in epoch " + std::to_string(epoch), epoch);
      Eigen::VectorXd theta = net.parameters();
      try {
        adam_step(theta, r.grad, adam, lr);
      } catch (const NumericalError& e) {
        throw TrainingAborted(std::string(e.what()) + " in epoch " + std::to_string(epoch), epoch);
      }
      net.set_parameters(theta);
      risk_sum += r.risk;
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.risk = risk_sum / static_cast<double>(config.steps_per_epoch);
    rec.lr = lr;
    if (validation != nullptr && (epoch - 1) % config.validation_interval == 0) {
      const double v = validation->evaluate(net).error;
      if (!std::isfinite(v))
        throw TrainingAborted("non-finite validation error in epoch " + std::to_string(epoch), epoch);
      rec.validation = v;
      if (v < best_validation) {
        best_validation = v;
        best_validation_epoch = epoch;
      }
    }
    if (rec.risk < best_risk) {
      best_risk = rec.risk;
      best_risk_epoch = epoch;
    }
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.history.push_back(rec);
    history.write(rec);
    if (on_epoch) on_epoch(rec);

    if (config.checkpoint_interval > 0 && epoch % config.checkpoint_interval == 0) {
      std::ostringstream name;
      name << "epoch_" << std::setw(6) << std::setfill('0') << epoch << ".sgnc";
      net.save((std::filesystem::path(config.checkpoint_dir) / name.str()).string());
    }

    const bool risk_stalled = epoch - best_risk_epoch >= config.patience;
    if (kind == LossKind::Galerkin) {
      if (rec.risk < config.risk_threshold) {
        result.stop_reason = "risk below threshold";
        break;
      }
      if (risk_stalled) {
        result.stop_reason = "risk stopped decreasing";
        break;
      }
    } else {
      const bool validation_stalled =
          validation == nullptr || epoch - best_validation_epoch >= config.patience;
      if (risk_stalled && validation_stalled) {
        result.stop_reason = "risk and validation error stopped decreasing";
        break;
      }
    }
  }
  if (result.stop_reason.empty()) result.stop_reason = "epoch limit reached";

  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  result.epochs = result.history.size();
  result.final_risk = result.history.back().risk;
  if (validation != nullptr) result.final_validation = validation->evaluate(net).error;
  return result;
}

}  // namespace sgnet
