#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "coopex/agent.hpp"
#include "coopex/maze_world.hpp"
#include "coopex/task_graph.hpp"

namespace coopex {

/// λ bookkeeping: which tasks each agent ever received, plus per-(task,
/// epoch) ownership so disjointness can be enforced.
class Assignment {
 public:
  explicit Assignment(int agent_count);

  /// Records task -> agent at the given epoch. A task may be owned by at
  /// most one agent per epoch.
  void add(int agent, int task, int epoch, double dispatch_time);

  std::optional<int> owner(int task, int epoch) const;
  double dispatch_time(int task, int epoch) const;
  /// Distinct tasks ever assigned to this agent (|λ|).
  int distinct_assigned(int agent) const;
  const std::vector<int>& tasks_of(int agent) const;
  int agent_count() const { return static_cast<int>(tasks_.size()); }

 private:
  std::vector<std::vector<int>> tasks_;
  std::map<std::pair<int, int>, std::pair<int, double>> by_task_epoch_;
};

/// Ready tasks ordered by reward descending (ties by ascending id),
/// truncated to the top n_e when more are ready than agents are free.
std::vector<int> get_avail_tasks(const ProgramGraph& graph, const TaskStatus& status,
                                 int n_e);

/// Pairs the k-th task with the k-th idle agent, marking tasks assigned.
/// Returns the (task, agent) pairs. Throws NoIdleAgent when more tasks than
/// idle agents are passed (scheduler bug by contract).
std::vector<std::pair<int, int>> task_assignment(const std::vector<int>& tasks,
                                                 const std::vector<int>& idle_agents,
                                                 Assignment& assignment, TaskStatus& status,
                                                 const TargetMap& targets, double now);

enum class Verdict { ok, wrong, stale };

const char* to_string(Verdict v);

struct ValidationRecord {
  int task = -1;
  int agent = -1;
  Solution solution;
  Verdict verdict = Verdict::wrong;
  double reward_granted = 0.0;
  double time = 0.0;
};

/// Validates a returned solution against the ground truth for the current
/// epoch. On success the task reward is granted and dependencies update; a
/// solution from an expired epoch is refused and flagged stale. Throws
/// NotAssigned when the task was not dispatched to this agent this epoch.
ValidationRecord handle_soln_check(int task, const Solution& solution, int agent,
                                   const TargetMap& targets, TaskStatus& status,
                                   const Assignment& assignment, double now);

/// Merges the completed task's solution and any inference pairs into the
/// agent's knowledge set, broadcasting to the other agents when cooperative
/// mode is on.
void handle_task_done(int task, const Solution& solution,
                      const std::vector<std::pair<int, Solution>>& inference, int agent,
                      std::vector<AgentState>& agents, bool cooperative);

}  // namespace coopex
