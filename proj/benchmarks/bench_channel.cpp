// Hot-path timings: channel setup, one interaction through each route,
// trajectory stepping with estimators, and the heavier audit constructions.
// The argument is 2l, so 40 means a 41-dimensional gyroscope.

#include <benchmark/benchmark.h>

#include "gyrosim/channel.hpp"
#include "gyrosim/coherence.hpp"
#include "gyrosim/density_matrix.hpp"
#include "gyrosim/povm.hpp"
#include "gyrosim/spin_algebra.hpp"
#include "gyrosim/spin_system.hpp"
#include "gyrosim/types.hpp"

namespace {

using namespace gyrosim;

ChannelConfig config_for(int two_ell, ChannelVariant variant) {
  return ChannelConfig::at_special_tau(SpinSystem(two_ell), 0.5, variant);
}

Matrix tilted_density(const SpinSystem& sys) {
  return DensityMatrix::pure(coherent_state(sys, 2.0)).matrix();
}

void BM_ChannelSetup(benchmark::State& state) {
  const ChannelConfig cfg =
      config_for(static_cast<int>(state.range(0)), ChannelVariant::kUnitary);
  for (auto _ : state) {
    Channel ch(cfg);
    benchmark::DoNotOptimize(ch);
  }
}

void BM_ApplyClosedForm(benchmark::State& state) {
  const ChannelConfig cfg =
      config_for(static_cast<int>(state.range(0)), ChannelVariant::kClosedForm);
  const Channel ch(cfg);
  Matrix rho = tilted_density(cfg.sys);
  for (auto _ : state) {
    rho = ch.apply(rho);
    benchmark::DoNotOptimize(rho.data());
  }
}

void BM_ApplyUnitary(benchmark::State& state) {
  const ChannelConfig cfg =
      config_for(static_cast<int>(state.range(0)), ChannelVariant::kUnitary);
  const Channel ch(cfg);
  Matrix rho = tilted_density(cfg.sys);
  for (auto _ : state) {
    rho = ch.apply(rho);
    benchmark::DoNotOptimize(rho.data());
  }
}

void BM_ApplyMeasurementFrame(benchmark::State& state) {
  const ChannelConfig cfg = config_for(static_cast<int>(state.range(0)),
                                       ChannelVariant::kRotatedMeasurement);
  const Channel ch(cfg);
  Matrix rho = tilted_density(cfg.sys);
  for (auto _ : state) {
    rho = ch.apply(rho);
    benchmark::DoNotOptimize(rho.data());
  }
}

// Full trajectory step: channel application plus Bloch and purity readouts.
void BM_TrajectorySteps(benchmark::State& state) {
  const ChannelConfig cfg =
      config_for(static_cast<int>(state.range(0)), ChannelVariant::kClosedForm);
  const DensityMatrix rho0 =
      DensityMatrix::pure(coherent_state(cfg.sys, kPi - 0.2));
  constexpr int kSteps = 10;
  for (auto _ : state) {
    const Trajectory traj = iterate_channel(rho0, kSteps, cfg);
    benchmark::DoNotOptimize(traj.records.back().purity);
  }
  state.SetItemsProcessed(state.iterations() * kSteps);
}

void BM_ChoiMatrix(benchmark::State& state) {
  const ChannelConfig cfg =
      config_for(static_cast<int>(state.range(0)), ChannelVariant::kUnitary);
  for (auto _ : state) {
    const ChoiResult choi = choi_matrix(cfg);
    benchmark::DoNotOptimize(choi.min_eigenvalue);
  }
}

void BM_InducedPovm(benchmark::State& state) {
  const ChannelConfig cfg =
      config_for(static_cast<int>(state.range(0)), ChannelVariant::kUnitary);
  const Eigen::Vector3d u(0.6, 0.0, 0.8);
  for (auto _ : state) {
    const PovmPair pair = induced_povm_general(u, cfg);
    benchmark::DoNotOptimize(pair.lambda_plus.data());
  }
}

void BM_ResidualChi(benchmark::State& state) {
  const ChannelConfig cfg = config_for(static_cast<int>(state.range(0)),
                                       ChannelVariant::kRotatedMeasurement);
  for (auto _ : state) {
    const ChiResidual res = residual_chi(kPi / 3.0, 0.0, cfg);
    benchmark::DoNotOptimize(res.trace_norm_updated);
  }
}

}  // namespace

BENCHMARK(BM_ChannelSetup)->Arg(20)->Arg(40)->Arg(80)
    ->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ApplyClosedForm)->Arg(20)->Arg(40)->Arg(80)
    ->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ApplyUnitary)->Arg(20)->Arg(40)->Arg(80)
    ->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ApplyMeasurementFrame)->Arg(20)->Arg(40)->Arg(80)
    ->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_TrajectorySteps)->Arg(40)->Arg(80)
    ->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ChoiMatrix)->Arg(4)->Arg(10)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_InducedPovm)->Arg(20)->Arg(40)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ResidualChi)->Arg(40)->Arg(80)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
