#include <benchmark/benchmark.h>

#include <cmath>

#include "jostkit/kirchhoff.hpp"
#include "jostkit/scattering.hpp"
#include "jostkit/smallk.hpp"

using namespace jostkit;

namespace {

const KirchhoffExample& example() {
  static const KirchhoffExample ex(KirchhoffExample::exceptional_gamma());
  return ex;
}

void BM_JostField(benchmark::State& state) {
  const PotentialModel pot = example().potential();
  const double k = static_cast<double>(state.range(0)) / 10.0;
  for (auto _ : state) benchmark::DoNotOptimize(jost_field(pot, k).steps());
}
BENCHMARK(BM_JostField)->Arg(1)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_ZeroEnergyBundle(benchmark::State& state) {
  const PotentialModel pot = example().potential();
  for (auto _ : state) benchmark::DoNotOptimize(zero_energy_bundle(pot).a);
}
BENCHMARK(BM_ZeroEnergyBundle)->Unit(benchmark::kMillisecond);

void BM_ExceptionalReport(benchmark::State& state) {
  const PotentialModel pot = example().potential();
  const BoundaryCondition bc = example().boundary();
  for (auto _ : state) benchmark::DoNotOptimize(analyze(pot, bc).mu);
}
BENCHMARK(BM_ExceptionalReport)->Unit(benchmark::kMillisecond);

void BM_SGrid(benchmark::State& state) {
  const PotentialModel pot = example().potential();
  const BoundaryCondition bc = example().boundary();
  std::vector<double> ks(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < ks.size(); ++i) ks[i] = 1e-3 * std::pow(3000.0, static_cast<double>(i) / (ks.size() - 1));
  for (auto _ : state) benchmark::DoNotOptimize(s_grid(pot, bc, ks).size());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SGrid)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_ZeroEigenStructure(benchmark::State& state) {
  const PotentialModel pot = example().potential();
  const ComplexMatrix J0 = jost_zero(zero_energy_bundle(pot), example().boundary());
  for (auto _ : state) benchmark::DoNotOptimize(zero_eigen_structure(J0).mu);
}
BENCHMARK(BM_ZeroEigenStructure);

}  // namespace

BENCHMARK_MAIN();
