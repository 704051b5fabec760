#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coopex/maze_world.hpp"

namespace coopex {

enum class BudgetMode { shared, per_agent };

enum class BudgetPolicyKind {
  equal,
  favor_fast,
  favor_slow,
  explicit_shares,
  scenario1,
  scenario2,
  scenario3,
  scenario4,
  scenario5,
};

struct BudgetPolicy {
  BudgetPolicyKind kind = BudgetPolicyKind::equal;
  std::vector<int> shares;  // used by explicit_shares
};

BudgetPolicyKind budget_policy_from_string(const std::string& name);  // SchemaError
const char* to_string(BudgetPolicyKind kind);

/// Splits a total budget over agents. equal gives floor(total/n) each with
/// the remainder going slowest-first; the scenario policies apply the five
/// fixed split patterns by ascending speed rank (5 agents); favor_fast /
/// favor_slow use the scenario5 / scenario1 pattern for 5 agents and
/// rank-proportional weights otherwise. Throws SharesMismatch when explicit
/// shares do not sum to total (or a scenario policy gets != 5 agents).
std::vector<int> allocate_budgets(const BudgetPolicy& policy, int total,
                                  const std::vector<double>& speeds);

/// Query budget with single-writer discipline: every oracle query deducts
/// query_cost from the applicable balance (one shared pool, or the asking
/// agent's allocation).
class BudgetLedger {
 public:
  static BudgetLedger shared_pool(int total, int query_cost = 1);
  static BudgetLedger per_agent(std::vector<int> allocations, int query_cost = 1);

  BudgetMode mode() const { return mode_; }
  int query_cost() const { return cost_; }

  /// Balance applicable to this agent's queries.
  int balance(int agent) const;
  /// The amount originally allocated to this agent (the pool total in
  /// shared mode).
  int allocation(int agent) const;
  bool can_query(int agent) const { return balance(agent) >= cost_; }
  void consume(int agent);  // throws BudgetExhausted

  int allocated_total() const { return allocated_; }
  int consumed_total() const { return consumed_; }
  int remaining_total() const;

 private:
  BudgetMode mode_ = BudgetMode::shared;
  int cost_ = 1;
  int pool_ = 0;
  std::vector<int> balances_;
  std::vector<int> allocations_;
  int allocated_ = 0;
  int consumed_ = 0;
};

/// True when exploration should be skipped in favor of an immediate oracle
/// query: strictly fewer unaccomplished tasks than remaining budget (and at
/// least one task left to do).
bool direct_query_shortcut(int unaccomplished, int remaining_budget);

/// Charges one query and returns a hint for the task: first hint is the
/// maze quadrant holding the target (area <= ceil(N^2/4)); each repeat
/// narrows to the quadrant of the previous region (area <= 1/4 of it).
/// Throws BudgetExhausted when the applicable balance is short.
Hint ask_help_from_oracle(int task, int agent, BudgetLedger& ledger,
                          const TargetMap& targets, const std::optional<Hint>& prior,
                          double now);

/// Region construction, exposed for tests.
HintRegion first_hint_region(int maze_size, int target_row, int target_col);
HintRegion narrowed_hint_region(const HintRegion& prev, int target_row, int target_col);

}  // namespace coopex
