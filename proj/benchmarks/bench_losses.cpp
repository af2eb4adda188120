#include <benchmark/benchmark.h>

#include "sgnet/losses.hpp"
#include "sgnet/sobol.hpp"

namespace {

struct Setup {
  std::unique_ptr<sgnet::SpectralField> field;
  sgnet::GalerkinTensor G;
  std::unique_ptr<sgnet::LossAssembler> loss;
  sgnet::MultiBranchNet net;
  Eigen::MatrixXd X;
};

Setup make(sgnet::ExperimentKind kind, int N, int P) {
  const auto model = sgnet::make_field_model(kind, N);
  const sgnet::OrderedBasis basis(N, P, model->family());
  Setup s{sgnet::make_spectral_field(model, basis), sgnet::galerkin_tensor(basis), nullptr,
          sgnet::MultiBranchNet(sgnet::replicate_spec(sgnet::make_branch_spec(model->spatial_dim(), {30, 30, 30},
                                                                              sgnet::Activation::Swish,
                                                                              sgnet::Activation::Swish),
                                                      static_cast<int>(basis.size())),
                                1),
          {}};
  s.loss = std::make_unique<sgnet::LossAssembler>(*s.field, s.G);
  sgnet::SobolStream stream(model->spatial_dim());
  s.X = stream.batch(256);
  return s;
}

void BM_Risk(benchmark::State& state, sgnet::ExperimentKind kind, int N, int P, sgnet::LossKind loss) {
  auto s = make(kind, N, P);
  for (auto _ : state) {
    auto r = s.loss->risk(loss, s.net, s.X);
    benchmark::DoNotOptimize(r.grad.data());
  }
  state.SetItemsProcessed(state.iterations() * s.X.cols());
}

BENCHMARK_CAPTURE(BM_Risk, exp1_P10_strong, sgnet::ExperimentKind::Exp1, 1, 10, sgnet::LossKind::Galerkin)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Risk, exp1_P10_ritz, sgnet::ExperimentKind::Exp1, 1, 10, sgnet::LossKind::Ritz)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Risk, exp3_N2P2_ritz, sgnet::ExperimentKind::Exp3, 2, 2, sgnet::LossKind::Ritz)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Risk, exp2_N2P1_strong, sgnet::ExperimentKind::Exp2, 2, 1, sgnet::LossKind::Galerkin)
    ->Unit(benchmark::kMillisecond);

}  // namespace
