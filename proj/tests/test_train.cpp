#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <limits>

#include "sgnet/error.hpp"
#include "sgnet/optim.hpp"
#include "sgnet/sobol.hpp"
#include "sgnet/train.hpp"

namespace sgnet {
namespace {

struct Exp1 {
  OrderedBasis basis;
  std::unique_ptr<SpectralField> field;
  GalerkinTensor G;
  std::unique_ptr<LossAssembler> loss;
};

Exp1 exp1(int P) {
  auto model = make_field_model(ExperimentKind::Exp1, 1);
  OrderedBasis basis(1, P, model->family());
  auto field = make_spectral_field(model, basis);
  auto G = galerkin_tensor(basis);
  Exp1 s{basis, std::move(field), std::move(G), nullptr};
  s.loss = std::make_unique<LossAssembler>(*s.field, s.G);
  return s;
}

MultiBranchNet net_for(const OrderedBasis& basis, int width, int depth, std::uint64_t seed) {
  return MultiBranchNet(
      replicate_spec(make_branch_spec(1, std::vector<int>(static_cast<std::size_t>(depth), width), Activation::Swish,
                                      Activation::Swish),
                     static_cast<int>(basis.size())),
      seed);
}

TrainConfig quick(std::size_t epochs) {
  TrainConfig c;
  c.batch_size = 64;
  c.steps_per_epoch = 10;
  c.max_epochs = epochs;
  c.lr0 = 1e-2;
  c.patience = 1000;
  c.risk_threshold = 0.0;
  return c;
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("sgnet_train_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

TEST(Train, SinglePoissonReachesThreshold) {
  // Pilot: 7 epochs at these settings; frozen as a 2000-epoch bound.
  auto s = exp1(0);
  auto net = net_for(s.basis, 10, 2, 1);
  TrainConfig c;
  c.batch_size = 128;
  c.lr0 = 1e-2;
  c.max_epochs = 2000;
  c.patience = 2000;
  c.risk_threshold = 1e-6;
  const auto r = train(net, LossKind::Galerkin, *s.loss, c);
  EXPECT_EQ(r.stop_reason, "risk below threshold");
  EXPECT_LT(r.final_risk, 1e-6);
  EXPECT_LE(r.epochs, 2000u);
}

TEST(Train, ZeroPatienceStopsAfterFirstEpoch) {
  auto s = exp1(2);
  for (auto kind : {LossKind::Galerkin, LossKind::Ritz}) {
    auto net = net_for(s.basis, 4, 1, 2);
    auto c = quick(100);
    c.patience = 0;
    const auto r = train(net, kind, *s.loss, c);
    EXPECT_EQ(r.epochs, 1u);
    EXPECT_EQ(r.history.size(), 1u);
  }
}

TEST(Train, IdenticalRunsGiveIdenticalHistories) {
  auto s = exp1(3);
  ValidationSet val(*s.field, ValidationSet::default_points(1), 200, 5);
  std::vector<TrainResult> results;
  std::vector<Eigen::VectorXd> params;
  for (int run = 0; run < 2; ++run) {
    auto net = net_for(s.basis, 6, 2, 9);
    auto c = quick(6);
    c.validation_interval = 2;
    results.push_back(train(net, LossKind::Ritz, *s.loss, c, &val));
    params.push_back(net.parameters());
  }
  ASSERT_EQ(results[0].history.size(), results[1].history.size());
  for (std::size_t e = 0; e < results[0].history.size(); ++e) {
    const auto& a = results[0].history[e];
    const auto& b = results[1].history[e];
    EXPECT_EQ(a.risk, b.risk);
    EXPECT_EQ(a.lr, b.lr);
    EXPECT_EQ(a.validation, b.validation);
  }
  EXPECT_EQ(params[0], params[1]);
  EXPECT_EQ(results[0].final_validation, results[1].final_validation);
}

TEST(Train, ValidationScheduleAndLearningRate) {
  auto s = exp1(1);
  ValidationSet val(*s.field, ValidationSet::default_points(1), 50, 5);
  auto net = net_for(s.basis, 4, 1, 3);
  auto c = quick(12);
  c.validation_interval = 5;
  c.decay_interval = 15;
  c.gamma = 0.5;
  const auto r = train(net, LossKind::Galerkin, *s.loss, c, &val);
  ASSERT_EQ(r.history.size(), 12u);
  for (const auto& rec : r.history) {
    EXPECT_EQ(rec.validation.has_value(), (rec.epoch - 1) % 5 == 0) << rec.epoch;
    const std::uint64_t last_step = rec.epoch * c.steps_per_epoch - 1;
    EXPECT_EQ(rec.lr, decayed_learning_rate(c.lr0, c.gamma, c.decay_interval, last_step));
  }
  EXPECT_EQ(r.stop_reason, "epoch limit reached");
  EXPECT_TRUE(std::isfinite(r.final_validation));

  auto bare = net_for(s.basis, 4, 1, 3);
  EXPECT_TRUE(std::isnan(train(bare, LossKind::Galerkin, *s.loss, quick(1)).final_validation));
}

TEST(Train, HistoryCsvAndCheckpoints) {
  auto s = exp1(1);
  const auto dir = scratch("io");
  auto net = net_for(s.basis, 4, 1, 4);
  auto c = quick(4);
  c.history_path = (dir / "history.csv").string();
  c.checkpoint_interval = 2;
  c.checkpoint_dir = (dir / "ckpt").string();
  const auto r = train(net, LossKind::Galerkin, *s.loss, c);

  std::ifstream in(c.history_path);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "epoch,risk,lr,validation_error,seconds");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(line.substr(0, line.find(',')), std::to_string(rows));
  }
  EXPECT_EQ(rows, 4);
  EXPECT_TRUE(std::filesystem::exists(dir / "ckpt" / "epoch_000002.sgnc"));
  const auto last = MultiBranchNet::load_file((dir / "ckpt" / "epoch_000004.sgnc").string());
  EXPECT_EQ(last.parameters(), net.parameters());
  EXPECT_FALSE(std::filesystem::exists(dir / "ckpt" / "epoch_000003.sgnc"));
  EXPECT_EQ(r.epochs, 4u);
  std::filesystem::remove_all(dir);
}

TEST(Train, NonFiniteRiskAborts) {
  auto s = exp1(1);
  auto net = net_for(s.basis, 4, 1, 5);
  Eigen::VectorXd theta = net.parameters();
  theta[0] = std::numeric_limits<double>::quiet_NaN();
  net.set_parameters(theta);
  try {
    train(net, LossKind::Galerkin, *s.loss, quick(3));
    FAIL() << "expected TrainingAborted";
  } catch (const TrainingAborted& e) {
    EXPECT_EQ(e.epoch(), 1u);
  }
}

TEST(Train, ConfigValidation) {
  auto s = exp1(0);
  auto net = net_for(s.basis, 4, 1, 5);
  auto c = quick(1);
  c.batch_size = 0;
  EXPECT_THROW(train(net, LossKind::Galerkin, *s.loss, c), InvalidArgument);
  c = quick(1);
  c.gamma = 1.5;
  EXPECT_THROW(train(net, LossKind::Galerkin, *s.loss, c), InvalidArgument);
  c = quick(1);
  c.checkpoint_interval = 1;
  EXPECT_THROW(train(net, LossKind::Galerkin, *s.loss, c), InvalidArgument);
}

TEST(RitzProperties, FullBatchDescentIsMonotone) {
  auto s = exp1(3);
  SobolStream stream(1);
  const Eigen::MatrixXd X = stream.batch(1024);
  auto net = net_for(s.basis, 8, 2, 6);
  const double initial = s.loss->ritz_risk(net, X).risk;
  double previous = initial;
  for (int step = 0; step < 100; ++step) {
    const auto r = s.loss->ritz_risk(net, X);
    EXPECT_LE(r.risk, previous + 1e-15) << step;
    previous = r.risk;
    Eigen::VectorXd theta = net.parameters();
    theta -= 1e-3 * r.grad;
    net.set_parameters(theta);
  }
  EXPECT_LT(previous, initial);
}

TEST(RitzProperties, TrainedEnergyIsNegativeOnFreshBatch) {
  auto s = exp1(2);
  auto net = net_for(s.basis, 8, 2, 7);
  train(net, LossKind::Ritz, *s.loss, quick(20));
  SobolStream fresh(1, 100001);
  EXPECT_LT(s.loss->ritz_risk_value(net, fresh.batch(10000)), 0.0);
}

}  // namespace
}  // namespace sgnet
