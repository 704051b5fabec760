#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "coopex/oracle_budget.hpp"
#include "coopex/task_graph.hpp"
#include "coopex/timing.hpp"

namespace coopex {

struct GraphSpec {
  enum class Kind { builtin, random, file };
  Kind kind = Kind::builtin;
  std::string name = "g18";  // builtin
  int tasks = 40;            // random
  int layers = 10;
  double density = 0.33;
  std::string path;  // file
};

struct BudgetConfig {
  BudgetMode mode = BudgetMode::shared;
  BudgetPolicy policy;
  int total = 20;
  int query_cost = 1;
};

struct DynamicConfig {
  bool enabled = false;
  double interval = 50.0;
  double p_expire = 0.0;
  int max_epochs = 0;
};

/// Everything that determines a run. Bit-identical configs give
/// bit-identical traces and reports.
struct RunConfig {
  GraphSpec graph;
  int agents = 5;
  std::vector<double> speeds;  // empty -> all 1.0
  int maze_size = 100;
  BudgetConfig budget;
  double collision_rate = 0.3;
  double complex_rate = 0.2;
  int step_cap = 0;  // 0 -> ceil(N^2 / 2)
  bool cooperative = true;
  DynamicConfig dynamic;
  TimingConfig timing;
  std::vector<double> rewards;                    // explicit task rewards, empty -> seeded
  std::optional<std::vector<int>> complex_tasks;  // pinned complex ids, absent -> seeded by rate
  std::uint64_t seed = 1;
  std::string run_id = "run";

  double speed_of(int agent) const {
    return speeds.empty() ? 1.0 : speeds.at(static_cast<std::size_t>(agent));
  }
  int effective_step_cap() const {
    return step_cap > 0 ? step_cap : (maze_size * maze_size + 1) / 2;
  }
};

/// Throws ConfigInvalid with a field-level message.
void validate_config(const RunConfig& config);

enum class EventKind { dispatch, explore_done, soln_check, task_done, epoch_advance };

const char* to_string(EventKind k);

/// One event-trace row. Events are processed (and traced) in (time, seq)
/// order; seq is unique per run.
struct TraceRow {
  double time = 0.0;
  long seq = 0;
  EventKind kind = EventKind::dispatch;
  int agent = -1;  // -1 prints empty (epoch rows)
  int task = -1;

  // explore_done
  bool found = false;
  bool lookup = false;
  bool hinted = false;
  int steps = 0;
  int queries = 0;
  double duration = 0.0;

  // soln_check
  int check = -1;  // -1 none, else Verdict
  double reward = 0.0;

  // task_done
  int inference_count = 0;

  // epoch_advance
  std::vector<int> expired;

  std::string detail_string() const;
  std::string csv_line() const;
};

inline constexpr const char* kTraceCsvHeader = "time,seq,kind,agent,task,detail";
inline constexpr const char* kReportCsvHeader =
    "run_id,seed,agent,speed,budget,assigned,accomplished,expl_mean,twt,queries";

struct AgentReport {
  int agent = 0;
  double speed = 1.0;
  int budget_allocated = 0;
  int assigned = 0;      // |λ|
  int accomplished = 0;  // |μ|
  double expl_mean = 0.0;
  double twt = 0.0;
  int queries = 0;
  double busy = 0.0;
  double idle = 0.0;
};

struct SimReport {
  double makespan = 0.0;          // time of last successful validation
  double horizon = 0.0;           // time of last event
  double total_processing = 0.0;  // Σ busy over agents
  double system_expl_mean = 0.0;  // pooled over every dispatched assignment
  double wt = 0.0;                // mean of per-agent TWT
  double fresh_expl_mean = 0.0;   // successful explorations only
  int fresh_count = 0;
  double lookup_expl_mean = 0.0;  // knowledge-answered assignments
  int lookup_count = 0;
  int failed_tasks = 0;
  double total_reward = 0.0;
  int queries_used = 0;
  int budget_allocated = 0;
  int budget_remaining = 0;
  std::vector<AgentReport> agents;
  std::vector<TraceRow> trace;
  std::uint64_t trace_hash = 0;
};

/// Resolved per-run world, exposed so tests and tools can inspect the exact
/// graph/placement a config produces.
struct WorldSetup {
  ProgramGraph graph;
  std::vector<double> speeds;
  std::vector<int> budget_allocations;  // per agent (shared mode: pool under agent 0)
};

ProgramGraph resolve_graph(const RunConfig& config);

/// Runs the discrete-event loop to completion and computes all metrics.
/// Deterministic: identical configs produce identical traces and reports.
SimReport run_simulation(const RunConfig& config);

/// Derives the metrics block of a SimReport by replaying a trace against
/// the graph it came from. run_simulation reports through this same path.
SimReport compute_metrics(const std::vector<TraceRow>& trace, const ProgramGraph& graph,
                          const RunConfig& config,
                          const std::vector<int>& budget_allocations);

std::uint64_t trace_hash(const std::vector<TraceRow>& trace);

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace);
void write_report_csv(std::ostream& out, const SimReport& report, const RunConfig& config);

/// Fixed-width decimal used for every floating-point field in CSV output.
std::string format_double(double v);

}  // namespace coopex
