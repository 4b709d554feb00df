#include <benchmark/benchmark.h>

#include "intersim/engine.hpp"
#include "intersim/policy.hpp"
#include "intersim/vehicle.hpp"

namespace {

using namespace intersim;

const VehicleParams kP;
const IntersectionGeometry kG;
constexpr double kDt = 0.1;

void BM_EtaClosedForm(benchmark::State& state) {
  double d = 0.0;
  for (auto _ : state) {
    d += 1.0;
    if (d > 300.0) d = 0.0;
    benchmark::DoNotOptimize(eta_over(d, 7.5, kP));
  }
}
BENCHMARK(BM_EtaClosedForm);

void BM_CarFollowing(benchmark::State& state) {
  VehicleState follower;
  follower.front_pos = 100.0;
  follower.speed = 12.0;
  const LeaderView leader{140.0, 11.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        car_following_accel(follower, leader, std::nullopt, kP, kDt));
  }
}
BENCHMARK(BM_CarFollowing);

void BM_V2VDecisionRound(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<VehicleSnapshot> world;
  for (int i = 0; i < n; ++i) {
    const double pos = 4000.0 - 35.0 * static_cast<double>(i / 4 + 1);
    world.push_back({i, kAllDirections[i % 4], pos, 10.0, 0.0, false});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(v2v_decision(world, kG, kP, 0.0, 0.1, kDt));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_V2VDecisionRound)->Arg(16)->Arg(128)->Arg(512);

void BM_SaturatedTick(benchmark::State& state) {
  const bool v2v = state.range(0) != 0;
  ScenarioConfig cfg;
  cfg.mean_interarrival = {3.0, 3.0, 3.0, 3.0};
  cfg.spawn_window = 3600.0;
  cfg.drain_cap = 14400.0;
  cfg.policy = v2v ? PolicyKind::V2V : PolicyKind::Light;
  Simulation sim(cfg);
  while (sim.now() < 300.0) sim.tick();  // warm up into saturation
  for (auto _ : state) {
    sim.tick();
  }
  state.counters["vehicles"] = static_cast<double>(sim.on_road());
}
BENCHMARK(BM_SaturatedTick)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_ShortScenario(benchmark::State& state) {
  ScenarioConfig cfg;
  cfg.mean_interarrival = {10.0, 10.0, 10.0, 10.0};
  cfg.spawn_window = 60.0;
  cfg.policy = PolicyKind::V2V;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run(cfg));
  }
  state.SetLabel("60 s window, v2v");
}
BENCHMARK(BM_ShortScenario)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
