#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "coopex/sim_engine.hpp"

namespace coopex {

/// Parses the canonical JSON run configuration (see README for the schema).
/// Unknown keys are rejected. Throws ParseError for malformed text and
/// SchemaError for unknown keys or out-of-range values.
RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// One aggregate statistic: a metric at a sweep point, averaged over seeds.
struct AggregateRow {
  std::string preset;
  std::string sweep;
  std::string metric;
  double mean = 0.0;
  double stddev = 0.0;
  int n = 0;
};

inline constexpr const char* kAggregateCsvHeader = "preset,sweep,metric,mean,stddev,n";

struct ExperimentResult {
  std::string preset;
  std::vector<AggregateRow> rows;
  std::vector<std::string> files_written;
};

/// Named experiment presets, one per reproduced table/figure.
std::vector<std::string> preset_names();
bool is_preset(const std::string& name);

/// Runs a preset (or a config file treated as a single-point sweep):
/// replications runs per sweep point with seeds base_seed + k, one report
/// CSV per run, one aggregate CSV per preset, plot-data files for figure
/// presets. Deterministic: identical inputs give byte-identical files.
ExperimentResult run_experiment(const std::string& preset_or_path, int replications,
                                bool full_scale, const std::string& out_dir,
                                std::uint64_t base_seed);

/// Renders the plot data behind a figure preset's aggregate CSV as a
/// whitespace-separated columnar file with a header comment. Returns the
/// paths written (none for table presets).
std::vector<std::string> emit_plot_data(const std::string& aggregate_csv_path);

/// Parsed-back view of one run report CSV (the independent pass used for
/// aggregation, so aggregates match the files exactly).
struct ParsedRunReport {
  std::vector<AgentReport> agents;
  double system_expl_mean = 0.0;
  double wt = 0.0;
  std::map<std::string, double> detail;  // makespan, total_processing, ...
};

ParsedRunReport parse_report_csv(const std::string& path);

}  // namespace coopex
