#include <benchmark/benchmark.h>

#include "sgnet/net.hpp"
#include "sgnet/sobol.hpp"

namespace {

sgnet::MultiBranchNet make_net(int branches, int width, int depth) {
  const auto spec = sgnet::make_branch_spec(1, std::vector<int>(static_cast<std::size_t>(depth), width),
                                            sgnet::Activation::Swish, sgnet::Activation::Swish);
  return sgnet::MultiBranchNet(sgnet::replicate_spec(spec, branches), 1);
}

void BM_Forward(benchmark::State& state) {
  const auto net = make_net(11, 30, 3);
  const int order = static_cast<int>(state.range(0));
  sgnet::SobolStream stream(1);
  const Eigen::MatrixXd X = stream.batch(256);
  sgnet::BatchEval ev;
  for (auto _ : state) {
    net.evaluate(X, order, ev);
    benchmark::DoNotOptimize(ev.U.data());
  }
  state.SetItemsProcessed(state.iterations() * X.cols());
}
BENCHMARK(BM_Forward)->Arg(0)->Arg(1)->Arg(2);

void BM_ParamGrad(benchmark::State& state) {
  const auto net = make_net(11, 30, 3);
  sgnet::SobolStream stream(1);
  const Eigen::MatrixXd X = stream.batch(256);
  sgnet::BatchEval ev;
  net.evaluate(X, 2, ev);
  sgnet::BatchAdjoint adj;
  adj.U = Eigen::MatrixXd::Ones(ev.U.rows(), ev.U.cols());
  adj.grad = {Eigen::MatrixXd::Ones(ev.U.rows(), ev.U.cols())};
  adj.lap = Eigen::MatrixXd::Ones(ev.U.rows(), ev.U.cols());
  for (auto _ : state) {
    auto g = net.param_grad(ev, adj);
    benchmark::DoNotOptimize(g.data());
  }
}
BENCHMARK(BM_ParamGrad);

}  // namespace
