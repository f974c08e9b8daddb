#include "conecons/classical_consensus.hpp"
#include "conecons/quantum_channel.hpp"
#include "conecons/random.hpp"

#include <benchmark/benchmark.h>

namespace {

Eigen::MatrixXd positive_matrix(Eigen::Index n) {
  conecons::Rng rng = conecons::make_rng(42);
  return conecons::random_stochastic_matrix(n, rng);
}

void BM_DiameterParallel(benchmark::State& state) {
  const Eigen::MatrixXd a = positive_matrix(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(conecons::projective_diameter(a));
}

void BM_DiameterSerial(benchmark::State& state) {
  const Eigen::MatrixXd a = positive_matrix(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(conecons::reference::projective_diameter(a));
}

conecons::KrausMap kraus(Eigen::Index n) {
  conecons::Rng rng = conecons::make_rng(7);
  return conecons::random_kraus_map(n, 3, rng);
}

void BM_EstimateRParallel(benchmark::State& state) {
  const conecons::KrausMap phi = kraus(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(conecons::estimate_R(phi, 2000, 1));
}

void BM_EstimateRSerial(benchmark::State& state) {
  const conecons::KrausMap phi = kraus(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(conecons::reference::estimate_R(phi, 2000, 1));
}

}  // namespace

BENCHMARK(BM_DiameterParallel)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_DiameterSerial)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_EstimateRParallel)->Arg(2)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EstimateRSerial)->Arg(2)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
