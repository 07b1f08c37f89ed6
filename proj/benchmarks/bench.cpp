#include <benchmark/benchmark.h>

#include "cvr/builtin.hpp"
#include "cvr/routing.hpp"
#include "cvr/v2x.hpp"
#include "cvr/world.hpp"

using namespace cvr;

namespace {

// Square grid of n x n nodes with edges both ways.
RoadNetwork grid(int n) {
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  auto id = [](int x, int y) { return "n" + std::to_string(x) + "_" + std::to_string(y); };
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) nodes.push_back({id(x, y), 100.0 * x, 100.0 * y});
  }
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      const double speed = 10.0 + (x * 7 + y * 3) % 17;
      if (x + 1 < n) {
        edges.push_back({id(x, y) + "e", id(x, y), id(x + 1, y), 100, speed, 1});
        edges.push_back({id(x + 1, y) + "w", id(x + 1, y), id(x, y), 100, speed, 1});
      }
      if (y + 1 < n) {
        edges.push_back({id(x, y) + "n", id(x, y), id(x, y + 1), 100, speed, 1});
        edges.push_back({id(x, y + 1) + "s", id(x, y + 1), id(x, y), 100, speed, 1});
      }
    }
  }
  return build_network(std::move(nodes), std::move(edges));
}

void BM_ShortestPath(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  RoadNetwork net = grid(n);
  const NodeIndex from = 0;
  const NodeIndex to = net.node_count() - 1;
  for (auto _ : state) benchmark::DoNotOptimize(shortest_path(net, from, to));
  state.SetLabel(std::to_string(net.edge_count()) + " edges");
}
BENCHMARK(BM_ShortestPath)->Arg(8)->Arg(16)->Arg(32);

World loaded_junction(std::size_t vehicles) {
  DemandGenerator gen{vehicles, 0.8, static_cast<double>(vehicles) / 2, "O", "D"};
  World w = make_world(builtin_network("junction"), generate_demand(gen, 1), TrafficParams{}, 1);
  for (int step = 0; step < 250; ++step) {
    spawn_step(w, w.time);
    advance_world(w);
  }
  return w;
}

void BM_AdvanceWorld(benchmark::State& state) {
  const World start = loaded_junction(static_cast<std::size_t>(state.range(0)));
  World w = start;
  for (auto _ : state) {
    if (w.vehicles.size() < start.vehicles.size() / 2) {
      state.PauseTiming();
      w = start;
      state.ResumeTiming();
    }
    advance_world(w);
  }
  state.SetLabel(std::to_string(start.vehicles.size()) + " vehicles");
}
BENCHMARK(BM_AdvanceWorld)->Arg(200)->Arg(400);

void BM_Broadcast(benchmark::State& state) {
  const World w = loaded_junction(static_cast<std::size_t>(state.range(0)));
  V2xLayer v2x(CommConfig{});
  v2x.begin_step(w);
  const VehicleId sender = w.vehicles.begin()->first;
  for (auto _ : state) {
    benchmark::DoNotOptimize(v2x.originate(w, sender, MessageKind::Beacon));
  }
  state.SetLabel(std::to_string(w.vehicles.size()) + " vehicles");
}
BENCHMARK(BM_Broadcast)->Arg(200)->Arg(400);

void BM_BeaconStep(benchmark::State& state) {
  const World w = loaded_junction(400);
  V2xLayer v2x(CommConfig{});
  v2x.begin_step(w);
  double t = w.time;
  for (auto _ : state) {
    v2x.beacon_step(w, t);
    v2x.relay_step(w, {});
    t += 1.0;
  }
}
BENCHMARK(BM_BeaconStep);

}  // namespace

BENCHMARK_MAIN();
