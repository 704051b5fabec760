#include "coopex/task_graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "coopex/errors.hpp"
#include "coopex/rng.hpp"

namespace coopex {

namespace {

std::string describe(int id) { return "task " + std::to_string(id); }

}  // namespace

void ProgramGraph::finalize() {
  const int m = size();
  edge_count_ = 0;
  dependents_.assign(static_cast<std::size_t>(m), {});
  for (int i = 0; i < m; ++i) {
    Task& t = tasks_[static_cast<std::size_t>(i)];
    t.id = i;
    if (t.reward < 0.0) throw SchemaError("reward of " + describe(i) + " is negative");
    std::sort(t.deps.begin(), t.deps.end());
    t.deps.erase(std::unique(t.deps.begin(), t.deps.end()), t.deps.end());
    for (int d : t.deps) {
      if (d < 0 || d >= m) throw DanglingEdge(describe(i) + " depends on missing " + describe(d));
      if (d == i) throw CyclicGraph(describe(i) + " depends on itself");
      dependents_[static_cast<std::size_t>(d)].push_back(i);
      ++edge_count_;
    }
  }
  // Kahn's algorithm: every task must be reachable through a topological order.
  std::vector<int> indegree(static_cast<std::size_t>(m), 0);
  std::deque<int> queue;
  for (int i = 0; i < m; ++i) {
    indegree[static_cast<std::size_t>(i)] = static_cast<int>(task(i).deps.size());
    if (indegree[static_cast<std::size_t>(i)] == 0) queue.push_back(i);
  }
  int seen = 0;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    ++seen;
    for (int v : dependents_[static_cast<std::size_t>(u)]) {
      if (--indegree[static_cast<std::size_t>(v)] == 0) queue.push_back(v);
    }
  }
  if (seen != m) throw CyclicGraph("dependency relation contains a cycle");
}

ProgramGraph ProgramGraph::from_edges(const std::vector<std::pair<int, int>>& edges,
                                      const std::vector<double>& rewards) {
  const int m = static_cast<int>(rewards.size());
  if (m < 1) throw SchemaError("graph needs at least one task");
  ProgramGraph g;
  g.tasks_.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    g.tasks_[static_cast<std::size_t>(i)].id = i;
    g.tasks_[static_cast<std::size_t>(i)].reward = rewards[static_cast<std::size_t>(i)];
  }
  for (const auto& [from, to] : edges) {
    if (to < 0 || to >= m) throw DanglingEdge("edge into missing " + describe(to));
    g.tasks_[static_cast<std::size_t>(to)].deps.push_back(from);
  }
  g.finalize();
  return g;
}

namespace {

// Band rule shared by g40 and the random generator: node k of one layer
// feeds {k-1, k, k+1} of the next, clipped to the layer.
void band_edges(std::vector<std::pair<int, int>>& edges, int src_first, int src_count,
                int dst_first, int dst_count, int halfwidth) {
  for (int i = 0; i < src_count; ++i) {
    const int center = dst_count == src_count
                           ? i
                           : static_cast<int>((static_cast<long long>(i) * dst_count) / src_count);
    const int lo = std::max(0, center - halfwidth);
    const int hi = std::min(dst_count - 1, center + halfwidth);
    for (int j = lo; j <= hi; ++j) edges.emplace_back(src_first + i, dst_first + j);
  }
}

ProgramGraph make_g40() {
  std::vector<std::pair<int, int>> edges;
  edges.emplace_back(0, 2);
  edges.emplace_back(0, 4);
  edges.emplace_back(0, 6);
  for (int v : {3, 5, 7, 8, 9, 10}) edges.emplace_back(1, v);
  band_edges(edges, 2, 9, 11, 9, 1);
  band_edges(edges, 11, 9, 20, 9, 1);
  band_edges(edges, 20, 9, 29, 9, 1);
  for (int v : {29, 31, 33}) edges.emplace_back(v, 38);
  for (int v : {30, 32, 34, 35, 36, 37}) edges.emplace_back(v, 39);
  return ProgramGraph::from_edges(edges, std::vector<double>(40, 1.0));
}

ProgramGraph make_g18() {
  std::vector<std::pair<int, int>> edges;
  for (int v = 1; v <= 8; ++v) edges.emplace_back(0, v);
  for (int v = 1; v <= 8; ++v) edges.emplace_back(v, 9 + (v - 1) / 2);
  for (int u = 9; u <= 12; ++u)
    for (int v = 13; v <= 16; ++v) edges.emplace_back(u, v);
  for (int u = 13; u <= 16; ++u) edges.emplace_back(u, 17);
  return ProgramGraph::from_edges(edges, std::vector<double>(18, 1.0));
}

}  // namespace

ProgramGraph ProgramGraph::builtin(const std::string& name) {
  if (name == "g40") return make_g40();
  if (name == "g18") return make_g18();
  throw UnknownGraph("unknown builtin graph \"" + name + "\" (expected g40 or g18)");
}

ProgramGraph ProgramGraph::random(int task_count, int layer_count, double density,
                                  std::uint64_t seed) {
  auto clamp_warn = [](const char* what) {
    std::fprintf(stderr, "coopex: random_graph: %s out of range, clamped\n", what);
  };
  if (task_count < 1) {
    clamp_warn("task_count");
    task_count = 1;
  }
  if (layer_count < 1) {
    clamp_warn("layer_count");
    layer_count = 1;
  }
  if (density < 0.0 || density > 1.0) {
    clamp_warn("density");
    density = std::clamp(density, 0.0, 1.0);
  }
  layer_count = std::min(layer_count, task_count);

  // Layer sizes as even as possible, first layers take the remainder.
  std::vector<int> sizes(static_cast<std::size_t>(layer_count), task_count / layer_count);
  for (int i = 0; i < task_count % layer_count; ++i) ++sizes[static_cast<std::size_t>(i)];
  std::vector<int> first(static_cast<std::size_t>(layer_count), 0);
  for (int l = 1; l < layer_count; ++l)
    first[static_cast<std::size_t>(l)] =
        first[static_cast<std::size_t>(l - 1)] + sizes[static_cast<std::size_t>(l - 1)];

  Rng rng(mix_seed(seed, 0x67726170));
  std::vector<std::pair<int, int>> edges;
  for (int l = 0; l + 1 < layer_count; ++l) {
    const int a = sizes[static_cast<std::size_t>(l)];
    const int b = sizes[static_cast<std::size_t>(l + 1)];
    const int halfwidth = static_cast<int>(std::floor(density * b / 2.0));
    std::vector<bool> covered(static_cast<std::size_t>(b), false);
    for (int i = 0; i < a; ++i) {
      int center = static_cast<int>(((static_cast<long long>(i) * 2 + 1) * b) / (2 * a));
      center = std::clamp(center + rng.uniform_int(-1, 1), 0, b - 1);
      const int lo = std::max(0, center - halfwidth);
      const int hi = std::min(b - 1, center + halfwidth);
      for (int j = lo; j <= hi; ++j) {
        edges.emplace_back(first[static_cast<std::size_t>(l)] + i,
                           first[static_cast<std::size_t>(l + 1)] + j);
        covered[static_cast<std::size_t>(j)] = true;
      }
    }
    // Every node below the first layer keeps at least one dependency.
    for (int j = 0; j < b; ++j) {
      if (covered[static_cast<std::size_t>(j)]) continue;
      const int i = std::min(a - 1, static_cast<int>((static_cast<long long>(j) * a) / b));
      edges.emplace_back(first[static_cast<std::size_t>(l)] + i,
                         first[static_cast<std::size_t>(l + 1)] + j);
    }
  }

  ProgramGraph g = from_edges(edges, std::vector<double>(static_cast<std::size_t>(task_count), 1.0));
  g.randomize_rewards(mix_seed(seed, 0x72657761));
  return g;
}

void ProgramGraph::set_rewards(const std::vector<double>& rewards) {
  if (static_cast<int>(rewards.size()) != size())
    throw SchemaError("rewards length " + std::to_string(rewards.size()) + " does not match " +
                      std::to_string(size()) + " tasks");
  for (int i = 0; i < size(); ++i) {
    if (rewards[static_cast<std::size_t>(i)] < 0.0)
      throw SchemaError("reward of " + describe(i) + " is negative");
    tasks_[static_cast<std::size_t>(i)].reward = rewards[static_cast<std::size_t>(i)];
  }
  explicit_rewards_ = true;
}

void ProgramGraph::randomize_rewards(std::uint64_t seed) {
  Rng rng(seed);
  for (Task& t : tasks_) t.reward = static_cast<double>(rng.uniform_int(1, 100));
}

void ProgramGraph::set_complex(const std::vector<int>& task_ids) {
  for (Task& t : tasks_) t.complex_task = false;
  for (int id : task_ids) {
    if (id < 0 || id >= size()) throw SchemaError("complex flag for missing " + describe(id));
    tasks_[static_cast<std::size_t>(id)].complex_task = true;
  }
  explicit_complexity_ = true;
}

void ProgramGraph::randomize_complex(double rate, std::uint64_t seed) {
  Rng rng(seed);
  for (Task& t : tasks_) t.complex_task = rng.bernoulli(rate);
}

int ProgramGraph::complex_count() const {
  return static_cast<int>(std::count_if(tasks_.begin(), tasks_.end(),
                                        [](const Task& t) { return t.complex_task; }));
}

ProgramGraph ProgramGraph::load(std::istream& in) {
  std::string line;
  int m = -1;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::pair<int, double>> rewards;
  std::vector<int> complex_ids;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;  // blank line
    if (tag == "#") continue;
    const std::string where = "graph file line " + std::to_string(lineno);
    if (tag == "m") {
      if (!(ls >> m) || m < 1) throw ParseError(where + ": bad task count");
    } else if (tag == "r") {
      int id;
      double r;
      if (!(ls >> id >> r)) throw ParseError(where + ": bad reward line");
      rewards.emplace_back(id, r);
    } else if (tag == "c") {
      int id;
      if (!(ls >> id)) throw ParseError(where + ": bad complexity line");
      complex_ids.push_back(id);
    } else {
      int u, v;
      std::istringstream es(line);
      if (!(es >> u >> v)) throw ParseError(where + ": expected \"u v\" edge");
      edges.emplace_back(u, v);
    }
  }
  if (m < 1) throw ParseError("graph file: missing \"m <count>\" line");
  ProgramGraph g = from_edges(edges, std::vector<double>(static_cast<std::size_t>(m), 1.0));
  if (!rewards.empty()) {
    std::vector<double> rv(static_cast<std::size_t>(m), 1.0);
    for (const auto& [id, r] : rewards) {
      if (id < 0 || id >= m) throw ParseError("graph file: reward for missing " + describe(id));
      rv[static_cast<std::size_t>(id)] = r;
    }
    g.set_rewards(rv);
  }
  if (!complex_ids.empty()) g.set_complex(complex_ids);
  return g;
}

ProgramGraph ProgramGraph::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open graph file " + path);
  return load(in);
}

void ProgramGraph::save(std::ostream& out) const {
  out << "m " << size() << "\n";
  for (const Task& t : tasks_)
    for (int d : t.deps) out << d << " " << t.id << "\n";
  const bool uniform =
      std::all_of(tasks_.begin(), tasks_.end(), [](const Task& t) { return t.reward == 1.0; });
  if (!uniform) {
    char buf[64];
    for (const Task& t : tasks_) {
      std::snprintf(buf, sizeof buf, "r %d %.6f\n", t.id, t.reward);
      out << buf;
    }
  }
  for (const Task& t : tasks_)
    if (t.complex_task) out << "c " << t.id << "\n";
}

void ProgramGraph::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write graph file " + path);
  save(out);
  if (!out) throw IoError("failed writing graph file " + path);
}

const char* to_string(TaskState s) {
  switch (s) {
    case TaskState::pending: return "pending";
    case TaskState::ready: return "ready";
    case TaskState::assigned: return "assigned";
    case TaskState::accomplished: return "accomplished";
    case TaskState::failed: return "failed";
  }
  return "?";
}

TaskStatus::TaskStatus(const ProgramGraph& graph)
    : graph_(&graph),
      states_(static_cast<std::size_t>(graph.size()), TaskState::pending),
      completion_(static_cast<std::size_t>(graph.size()), -1.0),
      counts_(5, 0) {
  counts_[static_cast<int>(TaskState::pending)] = graph.size();
  for (int i = 0; i < graph.size(); ++i)
    if (graph.task(i).deps.empty()) set_state(i, TaskState::ready);
}

void TaskStatus::set_state(int id, TaskState s) {
  TaskState& cur = states_.at(static_cast<std::size_t>(id));
  --counts_[static_cast<int>(cur)];
  cur = s;
  ++counts_[static_cast<int>(s)];
}

std::optional<double> TaskStatus::completion_time(int id) const {
  const double t = completion_.at(static_cast<std::size_t>(id));
  if (t < 0.0) return std::nullopt;
  return t;
}

int TaskStatus::count(TaskState s) const { return counts_[static_cast<int>(s)]; }

void TaskStatus::mark_assigned(int id) {
  const TaskState s = state(id);
  if (s != TaskState::ready && s != TaskState::pending)
    throw NotAssigned("cannot assign task " + std::to_string(id) + " in state " + to_string(s));
  set_state(id, TaskState::assigned);
}

void TaskStatus::mark_failed(int id) {
  if (state(id) != TaskState::assigned)
    throw NotAssigned("task " + std::to_string(id) + " failed without being assigned");
  set_state(id, TaskState::failed);
}

void TaskStatus::revive(int id) {
  if (state(id) != TaskState::accomplished) return;
  completion_[static_cast<std::size_t>(id)] = -1.0;
  set_state(id, TaskState::pending);
}

std::pair<std::vector<int>, std::vector<double>> get_independent_tasks(
    const ProgramGraph& graph, const TaskStatus& status) {
  std::vector<int> tasks;
  std::vector<double> rewards;
  for (int i = 0; i < graph.size(); ++i) {
    const TaskState s = status.state(i);
    if (s != TaskState::pending && s != TaskState::ready) continue;
    bool eligible = true;
    for (int d : graph.task(i).deps) {
      if (status.state(d) != TaskState::accomplished) {
        eligible = false;
        break;
      }
    }
    if (eligible) {
      tasks.push_back(i);
      rewards.push_back(graph.task(i).reward);
    }
  }
  return {std::move(tasks), std::move(rewards)};
}

void update_dependencies(TaskStatus& status, int task_id, double completion_time) {
  const TaskState s = status.state(task_id);
  if (s == TaskState::accomplished) return;  // idempotent
  if (s != TaskState::assigned)
    throw NotAssigned("task " + std::to_string(task_id) + " validated without being dispatched");
  status.completion_[static_cast<std::size_t>(task_id)] = completion_time;
  status.set_state(task_id, TaskState::accomplished);
  const ProgramGraph& graph = status.graph();
  for (int v : graph.dependents(task_id)) {
    if (status.state(v) != TaskState::pending) continue;
    bool all_done = true;
    for (int d : graph.task(v).deps) {
      if (status.state(d) != TaskState::accomplished) {
        all_done = false;
        break;
      }
    }
    if (all_done) status.set_state(v, TaskState::ready);
  }
}

}  // namespace coopex
