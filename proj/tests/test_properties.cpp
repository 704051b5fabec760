#include <set>

#include "coopex/rng.hpp"
#include "coopex/sim_engine.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace coopex;

namespace {

// Random but valid run configurations over small worlds.
RunConfig random_config(Rng& rng) {
  RunConfig c;
  c.graph.kind = GraphSpec::Kind::random;
  c.graph.tasks = rng.uniform_int(1, 25);
  c.graph.layers = rng.uniform_int(1, 5);
  c.graph.density = rng.uniform01();
  c.agents = rng.uniform_int(1, 5);
  for (int i = 0; i < c.agents; ++i)
    c.speeds.push_back(static_cast<double>(rng.uniform_int(1, 4)));
  c.maze_size = rng.uniform_int(10, 30);
  c.budget.mode = rng.bernoulli(0.5) ? BudgetMode::shared : BudgetMode::per_agent;
  c.budget.total = rng.uniform_int(0, 30);
  c.collision_rate = rng.uniform01();
  c.complex_rate = rng.uniform01() * 0.5;
  c.cooperative = rng.bernoulli(0.7);
  c.seed = rng.next();
  return c;
}

}  // namespace

TEST_CASE("random runs satisfy the scheduler and accounting invariants") {
  Rng rng(20240809);
  for (int iter = 0; iter < 60; ++iter) {
    const RunConfig config = random_config(rng);
    CAPTURE(iter);
    const SimReport report = run_simulation(config);
    const ProgramGraph graph = resolve_graph(config);

    // Dependency safety, per-epoch ownership, priority respect.
    const auto check = oracles::check_trace(report.trace, graph);
    for (const auto& msg : check.messages) INFO(msg);
    CHECK(check.violations == 0);

    // Budget conservation.
    CHECK(report.budget_allocated ==
          report.budget_remaining + report.queries_used * config.budget.query_cost);
    int agent_queries = 0;
    for (const AgentReport& a : report.agents) agent_queries += a.queries;
    CHECK(agent_queries == report.queries_used);
    CHECK(report.budget_remaining >= 0);

    // Reward conservation: the granted total equals the rewards of the
    // validated tasks, counted once per validation.
    double expected_reward = 0.0;
    int validations = 0;
    for (const TraceRow& row : report.trace) {
      if (row.kind == EventKind::soln_check &&
          static_cast<Verdict>(row.check) == Verdict::ok) {
        expected_reward += graph.task(row.task).reward;
        ++validations;
      }
    }
    CHECK(report.total_reward == doctest::Approx(expected_reward));

    // λ/μ accounting.
    int assigned_total = 0;
    for (const AgentReport& a : report.agents) {
      CHECK(a.accomplished <= a.assigned);
      assigned_total += a.assigned;
      CHECK(a.twt >= 0.0);
      CHECK(a.busy + a.idle == doctest::Approx(report.horizon));
    }
    CHECK(assigned_total <= graph.size());
    CHECK(report.total_processing <= config.agents * report.horizon + 1e-9);
  }
}

TEST_CASE("ample budget with a full cap accomplishes everything") {
  Rng rng(77);
  for (int iter = 0; iter < 40; ++iter) {
    RunConfig config = random_config(rng);
    config.step_cap = config.maze_size * config.maze_size;
    const ProgramGraph graph = resolve_graph(config);
    config.budget.mode = BudgetMode::shared;
    config.budget.total = graph.complex_count();
    CAPTURE(iter);

    const SimReport report = run_simulation(config);
    int assigned_total = 0;
    for (const AgentReport& a : report.agents) {
      CHECK(a.accomplished == a.assigned);  // μ(aᵢ) = λ(aᵢ)
      assigned_total += a.assigned;
    }
    CHECK(assigned_total == graph.size());
    CHECK(report.failed_tasks == 0);
  }
}

TEST_CASE("runs are reproducible bit for bit") {
  Rng rng(31337);
  for (int iter = 0; iter < 8; ++iter) {
    const RunConfig config = random_config(rng);
    const SimReport a = run_simulation(config);
    const SimReport b = run_simulation(config);
    CHECK(a.trace_hash == b.trace_hash);
  }
}

TEST_CASE("knowledge sharing never hurts mean exploration time on g18") {
  // Cooperation dominance, stated as an orderable property over 20 seeds.
  std::vector<double> coop, indiv;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    RunConfig c;
    c.graph.name = "g18";
    c.maze_size = 40;
    c.budget.total = 4;
    c.seed = seed;
    c.cooperative = true;
    coop.push_back(run_simulation(c).system_expl_mean);
    c.cooperative = false;
    indiv.push_back(run_simulation(c).system_expl_mean);
  }
  CHECK(oracles::mean(coop) < oracles::mean(indiv));
}

TEST_CASE("a knowledge lookup is at least ten times cheaper than exploring") {
  RunConfig c;
  c.graph.name = "g40";
  c.maze_size = 100;
  c.collision_rate = 0.4;
  c.seed = 6;
  const SimReport report = run_simulation(c);
  REQUIRE(report.lookup_count > 0);
  REQUIRE(report.fresh_count > 0);
  CHECK(report.lookup_expl_mean * 10.0 <= report.fresh_expl_mean);
}
