#include <sstream>

#include "coopex/errors.hpp"
#include "coopex/sim_engine.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace coopex;

namespace {

RunConfig tiny_config() {
  RunConfig c;
  c.graph.kind = GraphSpec::Kind::random;
  c.graph.tasks = 1;
  c.graph.layers = 1;
  c.agents = 1;
  c.maze_size = 10;
  c.step_cap = 10 * 10;
  c.budget.total = 0;
  c.collision_rate = 0.0;
  c.complex_rate = 0.0;
  c.seed = 5;
  return c;
}

std::string report_bytes(const SimReport& report, const RunConfig& config) {
  std::stringstream out;
  write_report_csv(out, report, config);
  return out.str();
}

}  // namespace

TEST_CASE("a single plain task is explored, validated, and accounted") {
  const SimReport report = run_simulation(tiny_config());
  REQUIRE(report.agents.size() == 1);
  CHECK(report.agents[0].assigned == 1);
  CHECK(report.agents[0].accomplished == 1);
  CHECK(report.failed_tasks == 0);
  // Validation and bookkeeping cost nothing: the makespan is the
  // exploration duration itself.
  CHECK(report.makespan == doctest::Approx(report.agents[0].expl_mean));
  CHECK(report.makespan == doctest::Approx(report.total_processing));
  CHECK(report.agents[0].twt == 0.0);
  CHECK(report.horizon == doctest::Approx(report.makespan));
}

TEST_CASE("all-complex tasks with zero budget all fail") {
  RunConfig c;
  c.graph.name = "g18";
  c.maze_size = 20;
  c.budget.total = 0;
  c.complex_tasks = std::vector<int>{0, 1, 2,  3,  4,  5,  6,  7,  8,
                                     9, 10, 11, 12, 13, 14, 15, 16, 17};
  c.seed = 3;
  const SimReport report = run_simulation(c);
  for (const AgentReport& a : report.agents) CHECK(a.accomplished == 0);
  CHECK(report.total_reward == 0.0);
  CHECK(report.failed_tasks >= 1);  // the root fails, its subtree never unblocks
  // With no validation the makespan falls back to the last failed attempt.
  CHECK(report.makespan == doctest::Approx(report.horizon));
  CHECK(report.makespan > 0.0);
}

TEST_CASE("ample budget and a full cap complete g18 exactly") {
  RunConfig c;
  c.graph.name = "g18";
  c.maze_size = 30;
  c.step_cap = 30 * 30;
  c.budget.total = 40;
  c.seed = 11;
  const SimReport report = run_simulation(c);
  int assigned_total = 0;
  for (const AgentReport& a : report.agents) {
    CHECK(a.accomplished == a.assigned);  // μ(i) = λ(i)
    assigned_total += a.assigned;
  }
  CHECK(assigned_total == 18);
  CHECK(report.failed_tasks == 0);

  const ProgramGraph graph = resolve_graph(c);
  const auto check = oracles::check_trace(report.trace, graph);
  for (const auto& msg : check.messages) INFO(msg);
  CHECK(check.violations == 0);
}

TEST_CASE("dependency-blocked idling is charged as waiting time") {
  // Two tasks in a chain, two agents: the second agent can only wait while
  // the root runs. Its TWT is exactly the root's exploration span.
  RunConfig c;
  c.graph.kind = GraphSpec::Kind::random;
  c.graph.tasks = 2;
  c.graph.layers = 2;
  c.graph.density = 1.0;
  c.agents = 2;
  c.maze_size = 12;
  c.budget.total = 0;
  c.collision_rate = 0.0;
  c.complex_rate = 0.0;
  c.step_cap = 12 * 12;
  c.seed = 8;
  const SimReport report = run_simulation(c);
  // Agent 0 frees up first and takes the unlocked task too; agent 1 only waits.
  REQUIRE(report.agents[0].assigned == 2);
  REQUIRE(report.agents[1].assigned == 0);

  double root_done = -1.0;
  for (const TraceRow& row : report.trace)
    if (row.kind == EventKind::explore_done && row.task == 0) root_done = row.time;
  REQUIRE(root_done > 0.0);
  CHECK(report.agents[1].twt == doctest::Approx(root_done));
  CHECK(report.agents[0].twt == 0.0);
  CHECK(report.wt == doctest::Approx(root_done / 2.0));
}

TEST_CASE("busy plus idle covers the horizon for every agent") {
  RunConfig c;
  c.graph.name = "g40";
  c.maze_size = 25;
  c.step_cap = 25 * 25;  // nothing can fail, so the run ends on a validation
  c.complex_rate = 0.0;
  c.seed = 21;
  const SimReport report = run_simulation(c);
  for (const AgentReport& a : report.agents) {
    CHECK(a.busy + a.idle == doctest::Approx(report.horizon));
    CHECK(a.twt <= a.idle + 1e-9);
  }
  CHECK(report.makespan == doctest::Approx(report.horizon));  // run ends on a validation
}

TEST_CASE("independent tasks split evenly across equal agents") {
  RunConfig c;
  c.graph.kind = GraphSpec::Kind::random;
  c.graph.tasks = 12;
  c.graph.layers = 1;  // no dependencies at all
  c.agents = 2;
  c.maze_size = 20;
  c.step_cap = 20 * 20;
  c.budget.total = 0;
  c.collision_rate = 0.0;
  c.complex_rate = 0.0;
  c.seed = 13;
  const SimReport report = run_simulation(c);
  double max_duration = 0.0;
  for (const TraceRow& row : report.trace)
    if (row.kind == EventKind::explore_done) max_duration = std::max(max_duration, row.duration);
  CHECK(report.makespan <= report.total_processing / 2.0 + max_duration);
  CHECK(report.makespan >= report.total_processing / 2.0 - 1e-9);
}

TEST_CASE("trace times never decrease and the trace replays cleanly") {
  RunConfig c;
  c.graph.name = "g40";
  c.maze_size = 40;
  c.budget.total = 10;
  c.seed = 17;
  const SimReport report = run_simulation(c);
  double last = 0.0;
  for (const TraceRow& row : report.trace) {
    CHECK(row.time >= last);
    last = row.time;
  }
  const auto check = oracles::check_trace(report.trace, resolve_graph(c));
  for (const auto& msg : check.messages) INFO(msg);
  CHECK(check.violations == 0);
}

TEST_CASE("identical configs give bit-identical traces and reports") {
  RunConfig c;
  c.graph.name = "g18";
  c.maze_size = 50;
  c.budget.total = 8;
  c.seed = 33;
  const SimReport a = run_simulation(c);
  const SimReport b = run_simulation(c);
  CHECK(a.trace_hash == b.trace_hash);
  CHECK(a.trace.size() == b.trace.size());
  CHECK(report_bytes(a, c) == report_bytes(b, c));

  RunConfig other = c;
  other.seed = 34;
  CHECK(run_simulation(other).trace_hash != a.trace_hash);
}

TEST_CASE("expired solutions are re-explored and re-validated") {
  RunConfig c = tiny_config();
  c.step_cap = 10 * 10;  // the fresh target is always reachable
  c.dynamic.enabled = true;
  c.dynamic.interval = 0.25;
  c.dynamic.p_expire = 1.0;
  c.dynamic.max_epochs = 3;
  const SimReport report = run_simulation(c);

  int expiries = 0, validations = 0;
  for (const TraceRow& row : report.trace) {
    if (row.kind == EventKind::epoch_advance) expiries += static_cast<int>(row.expired.size());
    if (row.kind == EventKind::soln_check && static_cast<Verdict>(row.check) == Verdict::ok)
      ++validations;
  }
  CHECK(expiries >= 1);
  // Each expiry is followed by a fresh validation: once per epoch.
  CHECK(validations == expiries + 1);
  const ProgramGraph graph = resolve_graph(c);
  CHECK(report.total_reward == doctest::Approx(graph.task(0).reward * validations));
  const auto check = oracles::check_trace(report.trace, graph);
  CHECK(check.violations == 0);
}

TEST_CASE("invalid configurations are rejected with field diagnostics") {
  RunConfig c = tiny_config();
  c.agents = 0;
  CHECK_THROWS_AS(run_simulation(c), ConfigInvalid);
  c = tiny_config();
  c.maze_size = 5;
  CHECK_THROWS_AS(run_simulation(c), ConfigInvalid);
  c = tiny_config();
  c.speeds = {1.0, 2.0};
  CHECK_THROWS_AS(run_simulation(c), ConfigInvalid);
  c = tiny_config();
  c.collision_rate = 1.5;
  CHECK_THROWS_AS(run_simulation(c), ConfigInvalid);
}

TEST_CASE("compute_metrics is the engine's own reporting path") {
  RunConfig c;
  c.graph.name = "g18";
  c.maze_size = 25;
  c.seed = 41;
  const SimReport report = run_simulation(c);
  std::vector<int> allocations;
  for (const AgentReport& a : report.agents) allocations.push_back(a.budget_allocated);
  const SimReport again = compute_metrics(report.trace, resolve_graph(c), c, allocations);
  CHECK(again.makespan == doctest::Approx(report.makespan));
  CHECK(again.total_processing == doctest::Approx(report.total_processing));
  CHECK(again.system_expl_mean == doctest::Approx(report.system_expl_mean));
  CHECK(again.wt == doctest::Approx(report.wt));
  CHECK(again.queries_used == report.queries_used);
}
