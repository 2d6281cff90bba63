// Copyright 2026 The qdc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <qdc/grape.hpp>
#include <qdc/problems.hpp>
#include <qdc/sse.hpp>

#include <benchmark/benchmark.h>

namespace {

using namespace qdc;

ProblemBundle qubit() {
  return build_noisy_qubit(0.005, 1.0, 10.0, axis_state(PauliAxis::x), axis_state(PauliAxis::y));
}

ControlSchedule random_schedule(Eigen::Index n_controls, const TimeGrid& grid) {
  return seed_schedules(standard_seed_families()[0], 1, n_controls, grid, 3).front();
}

void BM_SseBatchQubit(benchmark::State& state) {
  const ProblemBundle b = qubit();
  const TimeGrid grid(1.0, 128, 128);
  const ControlSchedule u = random_schedule(2, grid);
  const int n = static_cast<int>(state.range(0));
  std::uint64_t iteration = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_batch(b.control, u, b.cost, {n, 1, iteration++, 1}));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_SseBatchQubit)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_SseBatchChain(benchmark::State& state) {
  const int n_qubits = static_cast<int>(state.range(0));
  const ProblemBundle b = build_spin_chain(n_qubits, 0.01, 1.0, 10.0);
  const TimeGrid grid(1.0, 100, 10);
  const ControlSchedule u = random_schedule(b.control.n_controls(), grid);
  std::uint64_t iteration = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_batch(b.control, u, b.cost, {20, 1, iteration++, 1}));
  }
}
BENCHMARK(BM_SseBatchChain)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_LindbladRk4(benchmark::State& state) {
  const ProblemBundle b = qubit();
  const TimeGrid grid(1.0, static_cast<int>(state.range(0)), 8);
  const ControlSchedule u = random_schedule(2, grid);
  const DensityMatrix rho0 = DensityMatrix::pure(b.control.initial);
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate_lindblad(*b.lindblad, u, rho0, grid));
  }
}
BENCHMARK(BM_LindbladRk4)->Arg(256)->Arg(4096)->Unit(benchmark::kMicrosecond);

void BM_GrapeGradient(benchmark::State& state) {
  const ProblemBundle b = qubit();
  const TimeGrid grid(1.0, 128, 128);
  const ControlSchedule u = random_schedule(2, grid);
  const DensityMatrix rho0 = DensityMatrix::pure(b.control.initial);
  const CMatrix target = b.cost.target.projector().entries();
  for (auto _ : state) {
    const ForwardBackward fb = forward_backward(*b.lindblad, u, rho0, target);
    benchmark::DoNotOptimize(grape_gradient(*b.lindblad, u, fb, b.cost.q, b.cost.r));
  }
}
BENCHMARK(BM_GrapeGradient)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
