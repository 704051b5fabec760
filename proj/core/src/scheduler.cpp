#include "coopex/scheduler.hpp"

#include <algorithm>

#include "coopex/errors.hpp"

namespace coopex {

Assignment::Assignment(int agent_count) : tasks_(static_cast<std::size_t>(agent_count)) {}

void Assignment::add(int agent, int task, int epoch, double dispatch_time) {
  const auto key = std::make_pair(task, epoch);
  if (by_task_epoch_.count(key) != 0)
    throw NoIdleAgent("task " + std::to_string(task) + " already owned this epoch");
  by_task_epoch_[key] = {agent, dispatch_time};
  auto& mine = tasks_.at(static_cast<std::size_t>(agent));
  if (std::find(mine.begin(), mine.end(), task) == mine.end()) mine.push_back(task);
}

std::optional<int> Assignment::owner(int task, int epoch) const {
  const auto it = by_task_epoch_.find({task, epoch});
  if (it == by_task_epoch_.end()) return std::nullopt;
  return it->second.first;
}

double Assignment::dispatch_time(int task, int epoch) const {
  return by_task_epoch_.at({task, epoch}).second;
}

int Assignment::distinct_assigned(int agent) const {
  return static_cast<int>(tasks_.at(static_cast<std::size_t>(agent)).size());
}

const std::vector<int>& Assignment::tasks_of(int agent) const {
  return tasks_.at(static_cast<std::size_t>(agent));
}

std::vector<int> get_avail_tasks(const ProgramGraph& graph, const TaskStatus& status, int n_e) {
  if (n_e <= 0) return {};
  auto [tasks, rewards] = get_independent_tasks(graph, status);
  std::vector<std::size_t> order(tasks.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  // Reward descending, ties by ascending task id.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (rewards[a] != rewards[b]) return rewards[a] > rewards[b];
    return tasks[a] < tasks[b];
  });
  std::vector<int> out;
  out.reserve(std::min<std::size_t>(order.size(), static_cast<std::size_t>(n_e)));
  for (std::size_t i = 0; i < order.size() && i < static_cast<std::size_t>(n_e); ++i)
    out.push_back(tasks[order[i]]);
  return out;
}

std::vector<std::pair<int, int>> task_assignment(const std::vector<int>& tasks,
                                                 const std::vector<int>& idle_agents,
                                                 Assignment& assignment, TaskStatus& status,
                                                 const TargetMap& targets, double now) {
  if (tasks.size() > idle_agents.size())
    throw NoIdleAgent("dispatching " + std::to_string(tasks.size()) + " tasks to " +
                      std::to_string(idle_agents.size()) + " idle agents");
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(tasks.size());
  for (std::size_t k = 0; k < tasks.size(); ++k) {
    const int task = tasks[k];
    const int agent = idle_agents[k];
    status.mark_assigned(task);
    assignment.add(agent, task, targets.epoch(task), now);
    pairs.emplace_back(task, agent);
  }
  return pairs;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::ok: return "ok";
    case Verdict::wrong: return "wrong";
    case Verdict::stale: return "stale";
  }
  return "?";
}

ValidationRecord handle_soln_check(int task, const Solution& solution, int agent,
                                   const TargetMap& targets, TaskStatus& status,
                                   const Assignment& assignment, double now) {
  if (assignment.owner(task, solution.epoch) != agent &&
      assignment.owner(task, targets.epoch(task)) != agent)
    throw NotAssigned("task " + std::to_string(task) + " was not dispatched to agent " +
                      std::to_string(agent));
  ValidationRecord rec;
  rec.task = task;
  rec.agent = agent;
  rec.solution = solution;
  rec.time = now;
  if (solution.epoch != targets.epoch(task)) {
    rec.verdict = Verdict::stale;
  } else if (solution.cell != targets.target_cell(task)) {
    rec.verdict = Verdict::wrong;
  } else {
    rec.verdict = Verdict::ok;
    rec.reward_granted = status.graph().task(task).reward;
    update_dependencies(status, task, now);
  }
  return rec;
}

void handle_task_done(int task, const Solution& solution,
                      const std::vector<std::pair<int, Solution>>& inference, int agent,
                      std::vector<AgentState>& agents, bool cooperative) {
  AgentState& owner = agents.at(static_cast<std::size_t>(agent));
  merge_knowledge(owner.knowledge, task, solution);
  for (const auto& [t, s] : inference) merge_knowledge(owner.knowledge, t, s);
  if (cooperative) share_knowledge(owner, agents);
}

}  // namespace coopex
