#include <benchmark/benchmark.h>

#include "coopex/maze_world.hpp"
#include "coopex/sim_engine.hpp"
#include "coopex/task_graph.hpp"

namespace {

void BM_GenerateMaze(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(coopex::Maze::generate(n, seed++));
  }
}
BENCHMARK(BM_GenerateMaze)->Arg(50)->Arg(100)->Arg(400);

void BM_ExploreFresh(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const coopex::Maze maze = coopex::Maze::generate(n, 7);
  const coopex::ProgramGraph graph = coopex::ProgramGraph::builtin("g40");
  const coopex::TargetMap targets = coopex::TargetMap::place(maze, graph, 0.3, 11);
  int task = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(coopex::explore(maze, targets, task % graph.size(), std::nullopt,
                                             n * n, 1.0, 4e-4));
    ++task;
  }
}
BENCHMARK(BM_ExploreFresh)->Arg(100)->Arg(400);

void BM_RunG18(benchmark::State& state) {
  coopex::RunConfig config;
  config.graph.name = "g18";
  config.maze_size = 100;
  for (auto _ : state) {
    config.seed++;
    benchmark::DoNotOptimize(coopex::run_simulation(config));
  }
}
BENCHMARK(BM_RunG18);

void BM_RunG40(benchmark::State& state) {
  coopex::RunConfig config;
  config.graph.name = "g40";
  config.maze_size = 100;
  for (auto _ : state) {
    config.seed++;
    benchmark::DoNotOptimize(coopex::run_simulation(config));
  }
}
BENCHMARK(BM_RunG40);

}  // namespace

BENCHMARK_MAIN();
