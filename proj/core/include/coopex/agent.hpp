#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "coopex/maze_world.hpp"
#include "coopex/oracle_budget.hpp"
#include "coopex/timing.hpp"

namespace coopex {

/// Per-agent state: speed multiplier and the knowledge set K, a map from
/// task to the solution (and epoch) it was validated against.
struct AgentState {
  int id = 0;
  double speed = 1.0;
  std::map<int, Solution> knowledge;
  int queries_used = 0;
};

/// Result of one knowledge_gain call. solution absent means the budget ran
/// out with the step cap still unbeaten (the null outcome).
struct ExplorationOutcome {
  int task = -1;
  std::optional<Solution> solution;
  std::vector<std::pair<int, Solution>> inference;
  double duration = 0.0;  // virtual seconds, all attempts included
  int steps = 0;          // cells inspected, all attempts included
  int queries = 0;
  bool from_lookup = false;
  bool hinted = false;
};

/// Returns the stored solution iff its epoch matches the task's current
/// epoch; a stale entry is evicted and reported absent so the caller
/// re-explores.
std::optional<Solution> lookup_knowledge(AgentState& agent, int task, int current_epoch);

/// Inserts (task, solution) unless an entry with a newer epoch is already
/// present.
void merge_knowledge(std::map<int, Solution>& knowledge, int task, const Solution& solution);

/// The per-agent exploration procedure:
///   1. answer from knowledge when a current-epoch entry exists
///      (duration = lookup_time, no exploration);
///   2. otherwise, when strictly fewer unaccomplished tasks remain than the
///      agent's applicable budget, query the oracle up front and explore
///      with the hint;
///   3. otherwise explore; after a failed attempt, while budget remains,
///      buy a (narrower) hint and explore again;
///   4. budget exhausted without a find -> null outcome.
ExplorationOutcome knowledge_gain(AgentState& agent, int task, BudgetLedger& ledger,
                                  const Maze& maze, const TargetMap& targets,
                                  const TimingConfig& timing, int step_cap,
                                  int unaccomplished, double now);

/// Cooperative broadcast: every entry of from's knowledge is merged into
/// every other agent's, newer epoch winning on conflict.
void share_knowledge(const AgentState& from, std::vector<AgentState>& all_agents);

}  // namespace coopex
