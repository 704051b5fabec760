#include "coopex/maze_world.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <set>

#include "coopex/errors.hpp"
#include "coopex/rng.hpp"

namespace coopex {

namespace {

// Row/col deltas for directions N, E, S, W.
constexpr int kDr[4] = {-1, 0, 1, 0};
constexpr int kDc[4] = {0, 1, 0, -1};
constexpr int kOpposite[4] = {2, 3, 0, 1};

}  // namespace

Maze Maze::generate(int size, std::uint64_t seed) {
  if (size < kMinSize || size > kMaxSize)
    throw SizeOutOfRange("maze size " + std::to_string(size) + " outside [" +
                         std::to_string(kMinSize) + ", " + std::to_string(kMaxSize) + "]");
  Maze m;
  m.n_ = size;
  m.seed_ = seed;
  m.walls_.assign(static_cast<std::size_t>(size) * static_cast<std::size_t>(size), 0x0f);
  m.carve(seed);
  m.build_bfs_order();
  return m;
}

// Iterative recursive-backtracker over all cells: the carved passages form a
// spanning tree, so the maze is perfect.
void Maze::carve(std::uint64_t seed) {
  Rng rng(mix_seed(seed, 0x6d617a65));
  std::vector<bool> visited(walls_.size(), false);
  std::vector<int> stack;
  stack.reserve(walls_.size());
  stack.push_back(entrance());
  visited[entrance()] = true;
  while (!stack.empty()) {
    const int cur = stack.back();
    std::array<int, 4> dirs = {0, 1, 2, 3};
    for (int i = 3; i > 0; --i)
      std::swap(dirs[static_cast<std::size_t>(i)], dirs[rng.uniform_index(static_cast<std::size_t>(i) + 1)]);
    int next = -1, via = -1;
    for (int d : dirs) {
      const int r = row_of(cur) + kDr[d];
      const int c = col_of(cur) + kDc[d];
      if (r < 0 || r >= n_ || c < 0 || c >= n_) continue;
      const int cand = cell_index(r, c);
      if (!visited[static_cast<std::size_t>(cand)]) {
        next = cand;
        via = d;
        break;
      }
    }
    if (next < 0) {
      stack.pop_back();
      continue;
    }
    walls_[static_cast<std::size_t>(cur)] &= static_cast<std::uint8_t>(~(1u << via));
    walls_[static_cast<std::size_t>(next)] &= static_cast<std::uint8_t>(~(1u << kOpposite[via]));
    visited[static_cast<std::size_t>(next)] = true;
    stack.push_back(next);
  }
}

bool Maze::open_between(int cell, int dir) const {
  return (walls_.at(static_cast<std::size_t>(cell)) & (1u << dir)) == 0;
}

std::optional<int> Maze::neighbor(int cell, int dir) const {
  const int r = row_of(cell) + kDr[dir];
  const int c = col_of(cell) + kDc[dir];
  if (r < 0 || r >= n_ || c < 0 || c >= n_) return std::nullopt;
  return cell_index(r, c);
}

void Maze::build_bfs_order() {
  order_.clear();
  order_.reserve(walls_.size());
  rank_.assign(walls_.size(), -1);
  std::deque<int> queue;
  queue.push_back(entrance());
  rank_[entrance()] = 0;
  order_.push_back(entrance());
  while (!queue.empty()) {
    const int cur = queue.front();
    queue.pop_front();
    for (int d = 0; d < 4; ++d) {
      if (!open_between(cur, d)) continue;
      const auto nb = neighbor(cur, d);
      if (!nb || rank_[static_cast<std::size_t>(*nb)] >= 0) continue;
      rank_[static_cast<std::size_t>(*nb)] = static_cast<int>(order_.size());
      order_.push_back(*nb);
      queue.push_back(*nb);
    }
  }
}

namespace {

std::string render(const Maze& m, const TargetMap* targets) {
  const int n = m.size();
  std::string out;
  auto horizontal = [&](int r) {
    std::string line = "#";
    for (int c = 0; c < n; ++c) {
      const int cell = m.cell_index(r, c);
      line += m.open_between(cell, 2) ? "." : "#";
      line += "#";
    }
    out += line;
    out += "\n";
  };
  out.append(static_cast<std::size_t>(2 * n + 1), '#');
  out += "\n";
  for (int r = 0; r < n; ++r) {
    std::string line = "#";
    for (int c = 0; c < n; ++c) {
      const int cell = m.cell_index(r, c);
      std::string glyph = ".";
      if (targets != nullptr) {
        const auto tasks = targets->tasks_at(cell);
        if (!tasks.empty()) {
          glyph = "T" + std::to_string(tasks.front());
          for (std::size_t i = 1; i < tasks.size(); ++i) glyph += "+" + std::to_string(tasks[i]);
        }
      }
      line += glyph;
      line += (c + 1 < n && m.open_between(cell, 1)) ? "." : "#";
    }
    out += line;
    out += "\n";
    if (r + 1 < n) {
      horizontal(r);
    } else {
      out.append(static_cast<std::size_t>(2 * n + 1), '#');
      out += "\n";
    }
  }
  return out;
}

}  // namespace

std::string Maze::dump() const { return render(*this, nullptr); }

std::string Maze::dump(const TargetMap& targets) const { return render(*this, &targets); }

TargetMap TargetMap::place(const Maze& maze, const ProgramGraph& graph, double collision_rate,
                           std::uint64_t seed) {
  Rng rng(mix_seed(seed, 0x74677473));
  TargetMap tm;
  tm.maze_ = &maze;
  const int m = graph.size();
  tm.cell_of_.resize(static_cast<std::size_t>(m));
  tm.epoch_of_.assign(static_cast<std::size_t>(m), 0);
  tm.complex_of_.resize(static_cast<std::size_t>(m));
  std::vector<int> used;
  for (int t = 0; t < m; ++t) {
    int cell;
    if (!used.empty() && rng.bernoulli(collision_rate)) {
      cell = used[rng.uniform_index(used.size())];
    } else {
      cell = static_cast<int>(rng.uniform_index(static_cast<std::size_t>(maze.cell_count())));
    }
    tm.cell_of_[static_cast<std::size_t>(t)] = cell;
    tm.complex_of_[static_cast<std::size_t>(t)] = graph.task(t).complex_task;
    used.push_back(cell);
  }
  return tm;
}

TargetMap TargetMap::explicit_placement(const Maze& maze, const std::vector<int>& cells,
                                        const std::vector<bool>& complex_flags) {
  TargetMap tm;
  tm.maze_ = &maze;
  tm.cell_of_ = cells;
  tm.epoch_of_.assign(cells.size(), 0);
  tm.complex_of_ = complex_flags.empty() ? std::vector<bool>(cells.size(), false) : complex_flags;
  return tm;
}

std::vector<int> TargetMap::tasks_at(int cell) const {
  std::vector<int> out;
  for (int t = 0; t < task_count(); ++t)
    if (cell_of_[static_cast<std::size_t>(t)] == cell) out.push_back(t);
  return out;
}

void TargetMap::advance_epoch(const std::vector<int>& tasks, std::uint64_t seed) {
  Rng rng(mix_seed(seed, 0x65706f63));
  for (int t : tasks) {
    cell_of_.at(static_cast<std::size_t>(t)) =
        static_cast<int>(rng.uniform_index(static_cast<std::size_t>(maze_->cell_count())));
    ++epoch_of_.at(static_cast<std::size_t>(t));
  }
}

std::pair<ExploreResult, double> explore(const Maze& maze, const TargetMap& targets, int task,
                                         const std::optional<Hint>& hint, int step_cap,
                                         double speed, double step_time) {
  const int goal = targets.target_cell(task);
  const int goal_r = maze.row_of(goal);
  const int goal_c = maze.col_of(goal);
  const bool concealed = targets.is_complex(task) &&
                         !(hint && hint->region.contains(goal_r, goal_c));
  ExploreResult res;
  bool found = false;
  int inspected = 0;
  for (int cell : maze.bfs_order()) {
    if (hint && !hint->region.contains(maze.row_of(cell), maze.col_of(cell))) continue;
    ++inspected;
    if (cell == goal && !concealed) {
      found = true;
      break;
    }
    if (inspected >= step_cap) break;
  }
  res.steps = inspected;
  if (found) {
    res.solution = targets.solution(task);
    for (int other : targets.tasks_at(goal))
      if (other != task) res.inference.emplace_back(other, targets.solution(other));
  }
  return {res, inspected * step_time / speed};
}

}  // namespace coopex
