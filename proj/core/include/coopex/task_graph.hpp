#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace coopex {

/// One indivisible task: a priority reward, the tasks it depends on, and a
/// complexity flag (a complex task's target stays concealed during
/// exploration until a hint covers it).
struct Task {
  int id = 0;
  double reward = 1.0;
  std::vector<int> deps;  // sorted, unique, never contains id
  bool complex_task = false;
};

/// Immutable dependency DAG over tasks 0..m-1.
class ProgramGraph {
 public:
  /// Builds a graph from (from, to) precedence edges; "from" must complete
  /// before "to" may start. Throws DanglingEdge for ids outside 0..m-1 and
  /// CyclicGraph when the relation admits no topological order.
  static ProgramGraph from_edges(const std::vector<std::pair<int, int>>& edges,
                                 const std::vector<double>& rewards);

  /// The two fixed benchmark graphs: "g40" (40 tasks, 93 edges) and
  /// "g18" (18 tasks, 36 edges). Throws UnknownGraph otherwise.
  static ProgramGraph builtin(const std::string& name);

  /// Layered banded DAG in the style of g40: edges only between adjacent
  /// layers, band width controlled by density, deterministic in seed.
  /// Out-of-range arguments are clamped with a warning on stderr.
  static ProgramGraph random(int task_count, int layer_count, double density,
                             std::uint64_t seed);

  /// Plain-text edge-list exchange format: "m <count>", one "u v" line per
  /// edge, optional "r <id> <reward>" and "c <id>" lines.
  static ProgramGraph load(std::istream& in);
  static ProgramGraph load_file(const std::string& path);
  void save(std::ostream& out) const;
  void save_file(const std::string& path) const;

  int size() const { return static_cast<int>(tasks_.size()); }
  int edge_count() const { return edge_count_; }
  const Task& task(int id) const { return tasks_.at(static_cast<std::size_t>(id)); }
  const std::vector<Task>& tasks() const { return tasks_; }
  const std::vector<int>& dependents(int id) const {
    return dependents_.at(static_cast<std::size_t>(id));
  }

  bool has_explicit_rewards() const { return explicit_rewards_; }
  bool has_explicit_complexity() const { return explicit_complexity_; }

  void set_rewards(const std::vector<double>& rewards);
  /// Default reward model: integers drawn uniformly from [1, 100].
  void randomize_rewards(std::uint64_t seed);
  void set_complex(const std::vector<int>& task_ids);
  /// Marks each task complex independently with probability rate.
  void randomize_complex(double rate, std::uint64_t seed);
  int complex_count() const;

 private:
  void finalize();  // validates ids/deps, rejects cycles, builds reverse edges

  std::vector<Task> tasks_;
  std::vector<std::vector<int>> dependents_;
  int edge_count_ = 0;
  bool explicit_rewards_ = false;
  bool explicit_complexity_ = false;
};

enum class TaskState { pending, ready, assigned, accomplished, failed };

const char* to_string(TaskState s);

/// Mutable per-run task lifecycle. Owned by the coordinator; pending means
/// at least one dependency is not accomplished, ready means all are.
class TaskStatus {
 public:
  explicit TaskStatus(const ProgramGraph& graph);

  TaskState state(int id) const { return states_.at(static_cast<std::size_t>(id)); }
  std::optional<double> completion_time(int id) const;
  int count(TaskState s) const;
  int size() const { return static_cast<int>(states_.size()); }

  void mark_assigned(int id);
  void mark_failed(int id);
  /// Epoch expiry path: an accomplished task goes back to pending and will
  /// re-qualify as ready through its (still accomplished) dependencies.
  void revive(int id);

  const ProgramGraph& graph() const { return *graph_; }

 private:
  friend void update_dependencies(TaskStatus&, int, double);
  void set_state(int id, TaskState s);

  const ProgramGraph* graph_;
  std::vector<TaskState> states_;
  std::vector<double> completion_;  // < 0 when absent
  std::vector<int> counts_;
};

/// Tasks eligible for dispatch: pending or ready with every dependency
/// accomplished. Returns (task ids ascending, matching rewards).
std::pair<std::vector<int>, std::vector<double>> get_independent_tasks(
    const ProgramGraph& graph, const TaskStatus& status);

/// Marks task_id accomplished at completion_time and promotes any pending
/// task whose dependencies are now all accomplished to ready. Idempotent on
/// an already accomplished task; throws NotAssigned if it was never
/// dispatched.
void update_dependencies(TaskStatus& status, int task_id, double completion_time);

}  // namespace coopex
