#include "coopex/oracle_budget.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "coopex/errors.hpp"

namespace coopex {

BudgetPolicyKind budget_policy_from_string(const std::string& name) {
  if (name == "equal") return BudgetPolicyKind::equal;
  if (name == "favor-fast") return BudgetPolicyKind::favor_fast;
  if (name == "favor-slow") return BudgetPolicyKind::favor_slow;
  if (name == "explicit") return BudgetPolicyKind::explicit_shares;
  if (name == "scenario1") return BudgetPolicyKind::scenario1;
  if (name == "scenario2") return BudgetPolicyKind::scenario2;
  if (name == "scenario3") return BudgetPolicyKind::scenario3;
  if (name == "scenario4") return BudgetPolicyKind::scenario4;
  if (name == "scenario5") return BudgetPolicyKind::scenario5;
  throw SchemaError("unknown budget policy \"" + name + "\"");
}

const char* to_string(BudgetPolicyKind kind) {
  switch (kind) {
    case BudgetPolicyKind::equal: return "equal";
    case BudgetPolicyKind::favor_fast: return "favor-fast";
    case BudgetPolicyKind::favor_slow: return "favor-slow";
    case BudgetPolicyKind::explicit_shares: return "explicit";
    case BudgetPolicyKind::scenario1: return "scenario1";
    case BudgetPolicyKind::scenario2: return "scenario2";
    case BudgetPolicyKind::scenario3: return "scenario3";
    case BudgetPolicyKind::scenario4: return "scenario4";
    case BudgetPolicyKind::scenario5: return "scenario5";
  }
  return "?";
}

namespace {

// Five fixed split patterns, in percent, indexed by ascending speed rank
// (slowest agent first).
const int* scenario_pattern(BudgetPolicyKind kind) {
  static const int s1[5] = {45, 25, 15, 10, 5};
  static const int s2[5] = {30, 25, 20, 15, 10};
  static const int s3[5] = {20, 20, 20, 20, 20};
  static const int s4[5] = {10, 15, 20, 25, 30};
  static const int s5[5] = {5, 10, 15, 25, 45};
  switch (kind) {
    case BudgetPolicyKind::scenario1: return s1;
    case BudgetPolicyKind::scenario2: return s2;
    case BudgetPolicyKind::scenario3: return s3;
    case BudgetPolicyKind::scenario4: return s4;
    case BudgetPolicyKind::scenario5: return s5;
    default: return nullptr;
  }
}

// Agent ids ordered slowest first (ties by id).
std::vector<int> rank_order(const std::vector<double>& speeds) {
  std::vector<int> order(speeds.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return speeds[static_cast<std::size_t>(a)] < speeds[static_cast<std::size_t>(b)];
  });
  return order;
}

// Integer shares proportional to weights, summing exactly to total
// (largest remainder, ties broken by lower rank).
std::vector<int> proportional_shares(int total, const std::vector<double>& weights) {
  const double wsum = std::accumulate(weights.begin(), weights.end(), 0.0);
  const std::size_t n = weights.size();
  std::vector<int> shares(n, 0);
  if (wsum <= 0.0) return shares;
  std::vector<double> frac(n, 0.0);
  int given = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double exact = total * weights[i] / wsum;
    shares[i] = static_cast<int>(std::floor(exact));
    frac[i] = exact - shares[i];
    given += shares[i];
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
  for (int k = 0; k < total - given; ++k) ++shares[order[static_cast<std::size_t>(k) % n]];
  return shares;
}

}  // namespace

std::vector<int> allocate_budgets(const BudgetPolicy& policy, int total,
                                  const std::vector<double>& speeds) {
  const int n = static_cast<int>(speeds.size());
  if (n < 1) throw SharesMismatch("no agents to allocate budget to");
  if (total < 0) throw SharesMismatch("total budget is negative");
  std::vector<int> alloc(static_cast<std::size_t>(n), 0);
  const std::vector<int> by_rank = rank_order(speeds);

  switch (policy.kind) {
    case BudgetPolicyKind::explicit_shares: {
      if (static_cast<int>(policy.shares.size()) != n)
        throw SharesMismatch("explicit shares must list every agent");
      const int sum = std::accumulate(policy.shares.begin(), policy.shares.end(), 0);
      if (sum != total)
        throw SharesMismatch("explicit shares sum to " + std::to_string(sum) + ", expected " +
                             std::to_string(total));
      for (int v : policy.shares)
        if (v < 0) throw SharesMismatch("explicit share is negative");
      return policy.shares;
    }
    case BudgetPolicyKind::equal: {
      const int base = total / n;
      const int rem = total % n;
      for (int r = 0; r < n; ++r)
        alloc[static_cast<std::size_t>(by_rank[static_cast<std::size_t>(r)])] =
            base + (r < rem ? 1 : 0);
      return alloc;
    }
    default: break;
  }

  BudgetPolicyKind kind = policy.kind;
  // favor-fast and favor-slow reuse the end-member scenario patterns when
  // five agents are present, rank-proportional weights otherwise.
  if (kind == BudgetPolicyKind::favor_fast && n == 5) kind = BudgetPolicyKind::scenario5;
  if (kind == BudgetPolicyKind::favor_slow && n == 5) kind = BudgetPolicyKind::scenario1;

  std::vector<double> rank_weights(static_cast<std::size_t>(n), 0.0);
  if (const int* pattern = scenario_pattern(kind)) {
    if (n != 5)
      throw SharesMismatch(std::string(to_string(kind)) + " allocation needs exactly 5 agents");
    for (int r = 0; r < n; ++r) rank_weights[static_cast<std::size_t>(r)] = pattern[r];
  } else if (kind == BudgetPolicyKind::favor_fast) {
    for (int r = 0; r < n; ++r) rank_weights[static_cast<std::size_t>(r)] = r + 1;
  } else {  // favor_slow
    for (int r = 0; r < n; ++r) rank_weights[static_cast<std::size_t>(r)] = n - r;
  }
  const std::vector<int> by_rank_shares = proportional_shares(total, rank_weights);
  for (int r = 0; r < n; ++r)
    alloc[static_cast<std::size_t>(by_rank[static_cast<std::size_t>(r)])] =
        by_rank_shares[static_cast<std::size_t>(r)];
  return alloc;
}

BudgetLedger BudgetLedger::shared_pool(int total, int query_cost) {
  if (total < 0) throw SharesMismatch("shared budget is negative");
  BudgetLedger l;
  l.mode_ = BudgetMode::shared;
  l.cost_ = query_cost;
  l.pool_ = total;
  l.allocated_ = total;
  return l;
}

BudgetLedger BudgetLedger::per_agent(std::vector<int> allocations, int query_cost) {
  BudgetLedger l;
  l.mode_ = BudgetMode::per_agent;
  l.cost_ = query_cost;
  for (int v : allocations)
    if (v < 0) throw SharesMismatch("per-agent allocation is negative");
  l.allocated_ = std::accumulate(allocations.begin(), allocations.end(), 0);
  l.balances_ = allocations;
  l.allocations_ = std::move(allocations);
  return l;
}

int BudgetLedger::balance(int agent) const {
  if (mode_ == BudgetMode::shared) return pool_;
  return balances_.at(static_cast<std::size_t>(agent));
}

int BudgetLedger::allocation(int agent) const {
  if (mode_ == BudgetMode::shared) return allocated_;
  return allocations_.at(static_cast<std::size_t>(agent));
}

void BudgetLedger::consume(int agent) {
  if (!can_query(agent))
    throw BudgetExhausted("agent " + std::to_string(agent) + " has no budget left");
  if (mode_ == BudgetMode::shared)
    pool_ -= cost_;
  else
    balances_.at(static_cast<std::size_t>(agent)) -= cost_;
  consumed_ += cost_;
}

int BudgetLedger::remaining_total() const {
  if (mode_ == BudgetMode::shared) return pool_;
  return std::accumulate(balances_.begin(), balances_.end(), 0);
}

bool direct_query_shortcut(int unaccomplished, int remaining_budget) {
  return unaccomplished > 0 && unaccomplished < remaining_budget;
}

namespace {

// Shrinks [lo, hi) to the half containing x (no-op on unit extent).
void half_toward(int& lo, int& hi, int x) {
  if (hi - lo <= 1) return;
  const int mid = lo + (hi - lo) / 2;
  if (x < mid)
    hi = mid;
  else
    lo = mid;
}

// Trims whole rows/columns from whichever side is farthest from the target
// until the area bound holds. The target always stays inside.
void trim_to_area(HintRegion& r, int tr, int tc, long long bound) {
  while (r.area() > bound) {
    const int top = tr - r.row0;
    const int bottom = r.row1 - 1 - tr;
    const int left = tc - r.col0;
    const int right = r.col1 - 1 - tc;
    const int widest = std::max({top, bottom, left, right});
    if (widest <= 0) break;
    if (bottom == widest)
      --r.row1;
    else if (top == widest)
      ++r.row0;
    else if (right == widest)
      --r.col1;
    else
      ++r.col0;
  }
}

}  // namespace

HintRegion first_hint_region(int maze_size, int target_row, int target_col) {
  HintRegion r{0, 0, maze_size, maze_size};
  half_toward(r.row0, r.row1, target_row);
  half_toward(r.col0, r.col1, target_col);
  const long long cells = static_cast<long long>(maze_size) * maze_size;
  trim_to_area(r, target_row, target_col, (cells + 3) / 4);
  return r;
}

HintRegion narrowed_hint_region(const HintRegion& prev, int target_row, int target_col) {
  HintRegion r = prev;
  half_toward(r.row0, r.row1, target_row);
  half_toward(r.col0, r.col1, target_col);
  trim_to_area(r, target_row, target_col, std::max<long long>(1, prev.area() / 4));
  return r;
}

Hint ask_help_from_oracle(int task, int agent, BudgetLedger& ledger, const TargetMap& targets,
                          const std::optional<Hint>& prior, double now) {
  ledger.consume(agent);
  const int goal = targets.target_cell(task);
  const int r = targets.maze().row_of(goal);
  const int c = targets.maze().col_of(goal);
  Hint hint;
  hint.task = task;
  hint.granted_at = now;
  hint.region = prior ? narrowed_hint_region(prior->region, r, c)
                      : first_hint_region(targets.maze().size(), r, c);
  return hint;
}

}  // namespace coopex
