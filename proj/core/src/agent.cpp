#include "coopex/agent.hpp"

namespace coopex {

std::optional<Solution> lookup_knowledge(AgentState& agent, int task, int current_epoch) {
  const auto it = agent.knowledge.find(task);
  if (it == agent.knowledge.end()) return std::nullopt;
  if (it->second.epoch != current_epoch) {
    agent.knowledge.erase(it);  // stale entry, force re-exploration
    return std::nullopt;
  }
  return it->second;
}

void merge_knowledge(std::map<int, Solution>& knowledge, int task, const Solution& solution) {
  const auto it = knowledge.find(task);
  if (it == knowledge.end() || it->second.epoch < solution.epoch) knowledge[task] = solution;
}

ExplorationOutcome knowledge_gain(AgentState& agent, int task, BudgetLedger& ledger,
                                  const Maze& maze, const TargetMap& targets,
                                  const TimingConfig& timing, int step_cap,
                                  int unaccomplished, double now) {
  ExplorationOutcome out;
  out.task = task;

  if (const auto known = lookup_knowledge(agent, task, targets.epoch(task))) {
    out.solution = known;
    out.duration = timing.lookup_time;
    out.from_lookup = true;
    return out;
  }

  std::optional<Hint> hint;
  if (direct_query_shortcut(unaccomplished, ledger.balance(agent.id)) &&
      ledger.can_query(agent.id)) {
    hint = ask_help_from_oracle(task, agent.id, ledger, targets, std::nullopt, now);
    ++out.queries;
  }

  for (;;) {
    const auto [result, duration] =
        explore(maze, targets, task, hint, step_cap, agent.speed, timing.step_time);
    out.duration += duration;
    out.steps += result.steps;
    if (result.solution) {
      out.solution = result.solution;
      out.inference = result.inference;
      break;
    }
    if (!ledger.can_query(agent.id)) break;  // null outcome
    hint = ask_help_from_oracle(task, agent.id, ledger, targets, hint, now);
    ++out.queries;
  }

  out.hinted = hint.has_value();
  out.duration += timing.query_latency * out.queries;
  agent.queries_used += out.queries;
  return out;
}

void share_knowledge(const AgentState& from, std::vector<AgentState>& all_agents) {
  for (AgentState& other : all_agents) {
    if (other.id == from.id) continue;
    for (const auto& [task, solution] : from.knowledge)
      merge_knowledge(other.knowledge, task, solution);
  }
}

}  // namespace coopex
