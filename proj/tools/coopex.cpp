#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "coopex/errors.hpp"
#include "coopex/exp_harness.hpp"
#include "coopex/maze_world.hpp"
#include "coopex/rng.hpp"
#include "coopex/sim_engine.hpp"
#include "coopex/task_graph.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

int run_single(const std::string& config_path, std::optional<std::uint64_t> seed,
               const std::string& out_dir) {
  coopex::RunConfig config = coopex::parse_config_file(config_path);
  if (seed) config.seed = *seed;
  const coopex::SimReport report = coopex::run_simulation(config);

  fs::create_directories(out_dir);
  const fs::path trace_path = fs::path(out_dir) / "trace.csv";
  const fs::path report_path = fs::path(out_dir) / "report.csv";
  {
    std::ofstream out(trace_path);
    if (!out) throw coopex::IoError("cannot write " + trace_path.string());
    coopex::write_trace_csv(out, report.trace);
  }
  {
    std::ofstream out(report_path);
    if (!out) throw coopex::IoError("cannot write " + report_path.string());
    coopex::write_report_csv(out, report, config);
  }
  int accomplished = 0;
  for (const auto& a : report.agents) accomplished += a.accomplished;
  std::cout << "run " << config.run_id << " seed=" << config.seed
            << ": makespan=" << coopex::format_double(report.makespan)
            << "s accomplished=" << accomplished << " failed=" << report.failed_tasks
            << " queries=" << report.queries_used << "\n"
            << "wrote " << trace_path.string() << " and " << report_path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coopex - cooperative multi-agent task exploration simulator"};
  app.require_subcommand(1);

  std::string out_dir = "out";
  const char* env_out = std::getenv("COOPEX_OUT");
  if (env_out != nullptr && *env_out != '\0') out_dir = env_out;

  // run
  auto* run = app.add_subcommand("run", "Execute one configured simulation run");
  std::string config_path;
  std::optional<std::uint64_t> seed_override;
  std::string run_out = out_dir;
  run->add_option("--config", config_path, "Run configuration (JSON)")->required();
  run->add_option("--seed", seed_override, "Override the config seed");
  run->add_option("--out", run_out, "Output directory")->envname("COOPEX_OUT");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Run a named experiment preset");
  std::string preset;
  int replications = 0;
  bool full_scale = false;
  std::uint64_t base_seed = 1;
  std::string exp_out = out_dir;
  experiment->add_option("preset", preset, "Preset name or config path")->required();
  experiment->add_option("--replications", replications, "Runs per sweep point (default 20)");
  experiment->add_flag("--full-scale", full_scale, "Use the 400x400 maze instead of 100x100");
  experiment->add_option("--seed", base_seed, "Base seed for the replication schedule");
  experiment->add_option("--out", exp_out, "Output directory")->envname("COOPEX_OUT");

  // graph export
  auto* graph = app.add_subcommand("graph", "Graph utilities");
  auto* graph_export = graph->add_subcommand("export", "Write a builtin graph as an edge list");
  std::string graph_name;
  std::string graph_out;
  graph_export->add_option("name", graph_name, "g40 or g18")->required();
  graph_export->add_option("--out", graph_out, "Output path")->required();

  // maze dump
  auto* maze = app.add_subcommand("maze", "Maze utilities");
  auto* maze_dump = maze->add_subcommand("dump", "Print a generated maze as text");
  int maze_size = 20;
  std::uint64_t maze_seed = 1;
  std::string maze_out;
  maze_dump->add_option("--size", maze_size, "Grid size N (10..400)")->required();
  maze_dump->add_option("--seed", maze_seed, "Maze seed")->required();
  maze_dump->add_option("--out", maze_out, "Write to a file instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return run_single(config_path, seed_override, run_out);
    if (*experiment) {
      const coopex::ExperimentResult result =
          coopex::run_experiment(preset, replications, full_scale, exp_out, base_seed);
      std::cout << "preset " << result.preset << ": " << result.rows.size()
                << " aggregate rows, " << result.files_written.size() << " files under "
                << (fs::path(exp_out) / result.preset).string() << "\n";
      return 0;
    }
    if (*graph_export) {
      const coopex::ProgramGraph g = coopex::ProgramGraph::builtin(graph_name);
      g.save_file(graph_out);
      std::cout << "wrote " << graph_out << " (" << g.size() << " tasks, " << g.edge_count()
                << " edges)\n";
      return 0;
    }
    if (*maze_dump) {
      const coopex::Maze m = coopex::Maze::generate(maze_size, maze_seed);
      if (maze_out.empty()) {
        std::cout << m.dump();
      } else {
        std::ofstream out(maze_out);
        if (!out) throw coopex::IoError("cannot write " + maze_out);
        out << m.dump();
      }
      return 0;
    }
  } catch (const coopex::IoError& e) {
    std::cerr << "coopex: I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const coopex::Error& e) {
    std::cerr << "coopex: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "coopex: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
