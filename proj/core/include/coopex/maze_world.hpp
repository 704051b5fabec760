#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coopex/task_graph.hpp"

namespace coopex {

/// Axis-aligned cell rectangle, rows [row0,row1) x cols [col0,col1).
struct HintRegion {
  int row0 = 0, col0 = 0, row1 = 0, col1 = 0;

  long long area() const {
    return static_cast<long long>(row1 - row0) * static_cast<long long>(col1 - col0);
  }
  bool contains(int r, int c) const {
    return r >= row0 && r < row1 && c >= col0 && c < col1;
  }
};

/// Oracle answer for one task: a region guaranteed to contain its target.
struct Hint {
  int task = -1;
  HintRegion region;
  double granted_at = 0.0;
};

/// Seeded perfect maze on an N x N cell grid. Walls sit between adjacent
/// cells; carving is a recursive backtracker, so every cell is reachable
/// from the entrance (0,0) along exactly one path.
class Maze {
 public:
  static constexpr int kMinSize = 10;
  static constexpr int kMaxSize = 400;

  static Maze generate(int size, std::uint64_t seed);

  int size() const { return n_; }
  int cell_count() const { return n_ * n_; }
  std::uint64_t seed() const { return seed_; }

  int cell_index(int r, int c) const { return r * n_ + c; }
  int row_of(int cell) const { return cell / n_; }
  int col_of(int cell) const { return cell % n_; }
  static constexpr int entrance() { return 0; }  // cell (0,0)

  bool open_between(int cell, int dir) const;  // dir: 0=N 1=E 2=S 3=W
  std::optional<int> neighbor(int cell, int dir) const;

  /// Breadth-first visit order from the entrance with fixed N,E,S,W
  /// expansion; the canonical sweep every exploration follows.
  const std::vector<int>& bfs_order() const { return order_; }
  int bfs_rank(int cell) const { return rank_.at(static_cast<std::size_t>(cell)); }

  /// Debug text render: '#' wall, '.' open cell, 'T<id>' target cell.
  std::string dump() const;
  std::string dump(const class TargetMap& targets) const;

 private:
  Maze() = default;
  void carve(std::uint64_t seed);
  void build_bfs_order();

  int n_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<std::uint8_t> walls_;  // bit d set = wall toward direction d
  std::vector<int> order_;
  std::vector<int> rank_;
};

/// A solved task's answer: the target cell it was found at and the epoch the
/// answer is valid for.
struct Solution {
  int cell = -1;
  int epoch = 0;

  friend bool operator==(const Solution& a, const Solution& b) {
    return a.cell == b.cell && a.epoch == b.epoch;
  }
};

/// Task -> target cell placement with deliberate collisions (several tasks
/// can share one cell, which is what makes inference possible) and a
/// per-task validity epoch.
class TargetMap {
 public:
  /// Draws targets uniformly over cells; with probability collision_rate a
  /// task reuses a cell some earlier task already occupies.
  static TargetMap place(const Maze& maze, const ProgramGraph& graph,
                         double collision_rate, std::uint64_t seed);

  /// Scripted placement for tests and hand-built worlds.
  static TargetMap explicit_placement(const Maze& maze, const std::vector<int>& cells,
                                      const std::vector<bool>& complex_flags);

  int task_count() const { return static_cast<int>(cell_of_.size()); }
  int target_cell(int task) const { return cell_of_.at(static_cast<std::size_t>(task)); }
  int epoch(int task) const { return epoch_of_.at(static_cast<std::size_t>(task)); }
  bool is_complex(int task) const { return complex_of_.at(static_cast<std::size_t>(task)); }
  Solution solution(int task) const { return {target_cell(task), epoch(task)}; }

  /// Tasks whose current target is this cell, ascending.
  std::vector<int> tasks_at(int cell) const;

  /// Dynamic-environment step: the listed tasks get fresh uniform target
  /// cells and epoch+1; solutions citing older epochs become invalid.
  void advance_epoch(const std::vector<int>& tasks, std::uint64_t seed);

  const Maze& maze() const { return *maze_; }

 private:
  const Maze* maze_ = nullptr;
  std::vector<int> cell_of_;
  std::vector<int> epoch_of_;
  std::vector<bool> complex_of_;
};

struct ExploreResult {
  std::optional<Solution> solution;
  int steps = 0;  // distinct cells inspected
  std::vector<std::pair<int, Solution>> inference;  // other tasks at the found cell
};

/// One exploration attempt for a task. The agent walks the maze in canonical
/// breadth-first order; with a hint it only spends inspection effort on
/// cells inside the hint region. A non-complex target is recognized when its
/// cell is inspected; a complex one only when the active hint covers it.
/// Gives up (solution absent) once step_cap cells have been inspected.
/// duration = steps * step_time / speed.
std::pair<ExploreResult, double> explore(const Maze& maze, const TargetMap& targets,
                                         int task, const std::optional<Hint>& hint,
                                         int step_cap, double speed, double step_time);

}  // namespace coopex
