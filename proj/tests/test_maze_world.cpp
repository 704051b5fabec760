#include <set>
#include <sstream>

#include "coopex/errors.hpp"
#include "coopex/maze_world.hpp"
#include "coopex/oracle_budget.hpp"
#include "coopex/rng.hpp"
#include "coopex/task_graph.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace coopex;

TEST_CASE("maze generation is deterministic and size-checked") {
  const Maze a = Maze::generate(10, 7);
  const Maze b = Maze::generate(10, 7);
  CHECK(a.dump() == b.dump());
  const Maze c = Maze::generate(10, 8);
  CHECK(a.dump() != c.dump());
  CHECK_THROWS_AS(Maze::generate(5, 1), SizeOutOfRange);
  CHECK_THROWS_AS(Maze::generate(401, 1), SizeOutOfRange);
}

TEST_CASE("every cell is reachable from the entrance") {
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    const Maze m = Maze::generate(10, seed);
    CHECK(oracles::reachable_cells(m) == 100);
  }
  const Maze big = Maze::generate(73, 9);
  CHECK(oracles::reachable_cells(big) == 73 * 73);
}

TEST_CASE("text dump has the expected shape") {
  const int n = 12;
  const Maze m = Maze::generate(n, 3);
  const std::string dump = m.dump();
  std::stringstream ss(dump);
  std::string line;
  int rows = 0;
  while (std::getline(ss, line)) {
    CHECK(line.size() == static_cast<std::size_t>(2 * n + 1));
    for (char ch : line) CHECK((ch == '#' || ch == '.'));
    ++rows;
  }
  CHECK(rows == 2 * n + 1);
  // Border closed, entrance cell open.
  CHECK(dump[0] == '#');
  CHECK(dump.substr(0, 2 * n + 1).find('.') == std::string::npos);
}

TEST_CASE("target dump marks cells") {
  const Maze m = Maze::generate(10, 3);
  const TargetMap targets = TargetMap::explicit_placement(m, {m.cell_index(2, 3)}, {});
  CHECK(m.dump(targets).find("T0") != std::string::npos);
}

TEST_CASE("collision-free placement gives distinct cells") {
  const Maze m = Maze::generate(100, 21);
  const ProgramGraph g = ProgramGraph::builtin("g40");
  const TargetMap targets = TargetMap::place(m, g, 0.0, 5);
  std::set<int> cells;
  for (int t = 0; t < targets.task_count(); ++t) cells.insert(targets.target_cell(t));
  CHECK(cells.size() == 40);
}

TEST_CASE("forced collisions put every task on one cell") {
  const Maze m = Maze::generate(20, 4);
  const ProgramGraph g = ProgramGraph::random(5, 1, 0.0, 2);
  const TargetMap targets = TargetMap::place(m, g, 1.0, 6);
  std::set<int> cells;
  for (int t = 0; t < 5; ++t) cells.insert(targets.target_cell(t));
  CHECK(cells.size() == 1);
  CHECK(targets.tasks_at(targets.target_cell(0)) == std::vector<int>{0, 1, 2, 3, 4});
}

TEST_CASE("collision rate is calibrated (Monte Carlo)") {
  // With rate p, each of tasks 1..m-1 reuses an earlier cell with
  // probability p (fresh draws collide only with ~m/N^2 probability), so the
  // expected shared-cell task count is ~ p * (m - 1) = 11.7.
  const Maze m = Maze::generate(100, 1);
  const ProgramGraph g = ProgramGraph::builtin("g40");
  double total = 0.0;
  const int trials = 1000;
  for (int s = 0; s < trials; ++s) {
    const TargetMap targets = TargetMap::place(m, g, 0.3, static_cast<std::uint64_t>(s));
    std::set<int> seen;
    int shared = 0;
    for (int t = 0; t < 40; ++t) {
      if (!seen.insert(targets.target_cell(t)).second) ++shared;
    }
    total += shared;
  }
  const double mean = total / trials;
  CHECK(mean > 0.3 * 39 * 0.9);
  CHECK(mean < 0.3 * 39 * 1.1);
}

TEST_CASE("exploring the entrance target takes one step") {
  const Maze m = Maze::generate(10, 11);
  const TargetMap targets = TargetMap::explicit_placement(m, {Maze::entrance()}, {});
  const auto [res, duration] = explore(m, targets, 0, std::nullopt, 50, 2.0, 4e-4);
  REQUIRE(res.solution.has_value());
  CHECK(res.steps == 1);
  CHECK(duration == doctest::Approx(4e-4 / 2.0));
}

TEST_CASE("a concealed target exhausts the step cap without a hint") {
  const Maze m = Maze::generate(10, 11);
  const TargetMap targets =
      TargetMap::explicit_placement(m, {m.cell_index(9, 9)}, {true});
  const auto [res, duration] = explore(m, targets, 0, std::nullopt, 50, 1.0, 4e-4);
  CHECK(!res.solution.has_value());
  CHECK(res.steps == 50);
  CHECK(duration == doctest::Approx(50 * 4e-4));
}

TEST_CASE("an uncapped search always finds a plain target") {
  Rng rng(31);
  const Maze m = Maze::generate(30, 13);
  for (int i = 0; i < 20; ++i) {
    const int goal = static_cast<int>(rng.uniform_index(m.cell_count()));
    const TargetMap targets = TargetMap::explicit_placement(m, {goal}, {});
    const auto [res, duration] = explore(m, targets, 0, std::nullopt, 30 * 30, 1.0, 4e-4);
    REQUIRE(res.solution.has_value());
    CHECK(res.solution->cell == goal);
    // Steps equal the independently recomputed discovery position.
    CHECK(res.steps == oracles::bfs_discovery_steps(m, goal));
  }
}

TEST_CASE("a covering hint reveals a complex target and its cellmates") {
  const Maze m = Maze::generate(10, 17);
  const int goal = m.cell_index(7, 6);
  // Task 0 is complex at (7,6); task 1 shares the cell; task 2 elsewhere.
  const TargetMap targets =
      TargetMap::explicit_placement(m, {goal, goal, m.cell_index(1, 1)}, {true, false, false});
  const Hint hint{0, first_hint_region(10, 7, 6), 0.0};
  REQUIRE(hint.region.contains(7, 6));
  const auto [res, duration] = explore(m, targets, 0, hint, 50, 1.0, 4e-4);
  REQUIRE(res.solution.has_value());
  CHECK(res.solution->cell == goal);
  REQUIRE(res.inference.size() == 1);
  CHECK(res.inference[0].first == 1);
  CHECK(res.inference[0].second.cell == goal);
  CHECK(res.steps <= 26);  // never more than the quadrant area

  // Without the hint the same exploration walks straight past the target.
  const auto [blind, d2] = explore(m, targets, 0, std::nullopt, 100, 1.0, 4e-4);
  CHECK(!blind.solution.has_value());
}

TEST_CASE("hinted steps never exceed unhinted steps for the same target") {
  Rng rng(47);
  const Maze m = Maze::generate(24, 19);
  for (int i = 0; i < 40; ++i) {
    const int goal = static_cast<int>(rng.uniform_index(m.cell_count()));
    const TargetMap targets = TargetMap::explicit_placement(m, {goal}, {});
    const int cap = m.cell_count();
    const auto [plain, d1] = explore(m, targets, 0, std::nullopt, cap, 1.0, 4e-4);
    const Hint hint{0, first_hint_region(24, m.row_of(goal), m.col_of(goal)), 0.0};
    const auto [hinted, d2] = explore(m, targets, 0, hint, cap, 1.0, 4e-4);
    REQUIRE(plain.solution.has_value());
    REQUIRE(hinted.solution.has_value());
    CHECK(hinted.steps <= plain.steps);
  }
}

TEST_CASE("exploration duration scales exactly with speed") {
  const Maze m = Maze::generate(15, 23);
  const TargetMap targets = TargetMap::explicit_placement(m, {m.cell_index(11, 4)}, {});
  const auto [r1, d1] = explore(m, targets, 0, std::nullopt, 300, 1.0, 4e-4);
  const auto [r4, d4] = explore(m, targets, 0, std::nullopt, 300, 4.0, 4e-4);
  CHECK(r1.steps == r4.steps);
  CHECK(d4 == doctest::Approx(d1 / 4.0));
}

TEST_CASE("advance_epoch renews only the listed tasks") {
  const Maze m = Maze::generate(20, 29);
  const ProgramGraph g = ProgramGraph::random(6, 2, 0.5, 3);
  TargetMap targets = TargetMap::place(m, g, 0.0, 8);
  const TargetMap before = targets;

  targets.advance_epoch({}, 1);
  for (int t = 0; t < 6; ++t) {
    CHECK(targets.epoch(t) == 0);
    CHECK(targets.target_cell(t) == before.target_cell(t));
  }

  targets.advance_epoch({3}, 2);
  CHECK(targets.epoch(3) == 1);
  for (int t = 0; t < 6; ++t) {
    if (t == 3) continue;
    CHECK(targets.epoch(t) == 0);
    CHECK(targets.target_cell(t) == before.target_cell(t));
  }
}
