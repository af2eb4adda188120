#include <benchmark/benchmark.h>

#include "sgnet/spectral.hpp"

namespace {

void BM_GalerkinTensor(benchmark::State& state) {
  const sgnet::OrderedBasis basis(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)),
                                  sgnet::PolyFamily::HermiteProbabilist);
  for (auto _ : state) {
    auto G = sgnet::galerkin_tensor(basis);
    benchmark::DoNotOptimize(G.entries().data());
  }
  state.counters["M+1"] = static_cast<double>(basis.size());
}
BENCHMARK(BM_GalerkinTensor)->Args({1, 10})->Args({1, 20})->Args({2, 4})->Args({3, 4})->Unit(benchmark::kMillisecond);

void BM_EvalAll(benchmark::State& state) {
  const sgnet::OrderedBasis basis(3, 7, sgnet::PolyFamily::LegendreUniform);
  std::vector<double> y = {0.3, -0.2, 0.7}, out(basis.size());
  for (auto _ : state) {
    basis.eval_all(y, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_EvalAll);

}  // namespace
