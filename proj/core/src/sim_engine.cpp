#include "coopex/sim_engine.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <ostream>
#include <queue>
#include <set>

#include "coopex/agent.hpp"
#include "coopex/errors.hpp"
#include "coopex/maze_world.hpp"
#include "coopex/rng.hpp"
#include "coopex/scheduler.hpp"

namespace coopex {

namespace {

constexpr std::uint64_t kSaltGraph = 0x01;
constexpr std::uint64_t kSaltRewards = 0x02;
constexpr std::uint64_t kSaltComplex = 0x03;
constexpr std::uint64_t kSaltMaze = 0x04;
constexpr std::uint64_t kSaltTargets = 0x05;
constexpr std::uint64_t kSaltEpoch = 0x06;

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void validate_config(const RunConfig& c) {
  auto fail = [](const std::string& field, const std::string& why) {
    throw ConfigInvalid(field + ": " + why);
  };
  if (c.agents < 1) fail("agents", "must be >= 1");
  if (!c.speeds.empty()) {
    if (static_cast<int>(c.speeds.size()) != c.agents)
      fail("speeds", "length must equal agents");
    for (double s : c.speeds)
      if (!(s > 0.0)) fail("speeds", "every speed must be > 0");
  }
  if (c.maze_size < Maze::kMinSize || c.maze_size > Maze::kMaxSize)
    fail("maze_size", "must be in [10, 400]");
  if (c.collision_rate < 0.0 || c.collision_rate > 1.0) fail("collision_rate", "must be in [0,1]");
  if (c.complex_rate < 0.0 || c.complex_rate > 1.0) fail("complex_rate", "must be in [0,1]");
  if (c.step_cap < 0) fail("step_cap", "must be >= 0 (0 = default)");
  if (c.budget.total < 0) fail("budget.total", "must be >= 0");
  if (c.dynamic.enabled && !(c.dynamic.interval > 0.0)) fail("dynamic.interval", "must be > 0");
  if (c.dynamic.p_expire < 0.0 || c.dynamic.p_expire > 1.0) fail("dynamic.p_expire", "must be in [0,1]");
  if (c.dynamic.max_epochs < 0) fail("dynamic.max_epochs", "must be >= 0");
  if (!(c.timing.step_time > 0.0)) fail("timing.step_time", "must be > 0");
  if (c.timing.lookup_time < 0.0) fail("timing.lookup_time", "must be >= 0");
  if (c.timing.query_latency < 0.0) fail("timing.query_latency", "must be >= 0");
  if (c.budget.query_cost < 1) fail("budget.query_cost", "must be >= 1");
  switch (c.graph.kind) {
    case GraphSpec::Kind::builtin:
      if (c.graph.name != "g18" && c.graph.name != "g40") fail("graph", "unknown builtin graph");
      break;
    case GraphSpec::Kind::random:
      if (c.graph.tasks < 1) fail("graph.tasks", "must be >= 1");
      if (c.graph.layers < 1) fail("graph.layers", "must be >= 1");
      if (c.graph.density < 0.0 || c.graph.density > 1.0) fail("graph.density", "must be in [0,1]");
      break;
    case GraphSpec::Kind::file:
      if (c.graph.path.empty()) fail("graph.path", "missing file path");
      break;
  }
}

ProgramGraph resolve_graph(const RunConfig& c) {
  ProgramGraph g = [&] {
    switch (c.graph.kind) {
      case GraphSpec::Kind::builtin: return ProgramGraph::builtin(c.graph.name);
      case GraphSpec::Kind::random:
        return ProgramGraph::random(c.graph.tasks, c.graph.layers, c.graph.density,
                                    mix_seed(c.seed, kSaltGraph));
      case GraphSpec::Kind::file: return ProgramGraph::load_file(c.graph.path);
    }
    throw ConfigInvalid("graph: bad kind");
  }();
  if (!c.rewards.empty()) {
    g.set_rewards(c.rewards);
  } else if (c.graph.kind == GraphSpec::Kind::builtin ||
             (c.graph.kind == GraphSpec::Kind::file && !g.has_explicit_rewards())) {
    g.randomize_rewards(mix_seed(c.seed, kSaltRewards));
  }
  if (c.complex_tasks.has_value()) {
    g.set_complex(*c.complex_tasks);
  } else if (!g.has_explicit_complexity()) {
    g.randomize_complex(c.complex_rate, mix_seed(c.seed, kSaltComplex));
  }
  return g;
}

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::dispatch: return "dispatch";
    case EventKind::explore_done: return "explore-done";
    case EventKind::soln_check: return "soln-check";
    case EventKind::task_done: return "task-done";
    case EventKind::epoch_advance: return "epoch-advance";
  }
  return "?";
}

std::string TraceRow::detail_string() const {
  switch (kind) {
    case EventKind::dispatch: return "";
    case EventKind::explore_done: {
      std::string s = "found=";
      s += found ? '1' : '0';
      s += " lookup=";
      s += lookup ? '1' : '0';
      s += " hinted=";
      s += hinted ? '1' : '0';
      s += " steps=" + std::to_string(steps);
      s += " queries=" + std::to_string(queries);
      s += " dur=" + format_double(duration);
      return s;
    }
    case EventKind::soln_check: {
      const auto v = static_cast<Verdict>(check);
      std::string s = to_string(v);
      if (v == Verdict::ok) s += " reward=" + format_double(reward);
      return s;
    }
    case EventKind::task_done: return "inference=" + std::to_string(inference_count);
    case EventKind::epoch_advance: {
      std::string s = "expired=";
      for (std::size_t i = 0; i < expired.size(); ++i) {
        if (i > 0) s += '+';
        s += std::to_string(expired[i]);
      }
      return s;
    }
  }
  return "";
}

std::string TraceRow::csv_line() const {
  std::string s = format_double(time);
  s += ',' + std::to_string(seq);
  s += ',';
  s += to_string(kind);
  s += ',';
  if (agent >= 0) s += std::to_string(agent);
  s += ',';
  if (task >= 0) s += std::to_string(task);
  s += ',' + detail_string();
  return s;
}

std::uint64_t trace_hash(const std::vector<TraceRow>& trace) {
  // FNV-1a over the rendered rows.
  std::uint64_t h = 1469598103934665603ULL;
  auto feed = [&h](const std::string& s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 1099511628211ULL;
    }
    h ^= '\n';
    h *= 1099511628211ULL;
  };
  for (const TraceRow& row : trace) feed(row.csv_line());
  return h;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace) {
  out << kTraceCsvHeader << "\n";
  for (const TraceRow& row : trace) out << row.csv_line() << "\n";
}

namespace {

struct PendingEvent {
  double time = 0.0;
  long seq = 0;
  EventKind kind = EventKind::dispatch;
  int agent = -1;
  int task = -1;
  ExplorationOutcome outcome;

  bool operator>(const PendingEvent& o) const {
    if (time != o.time) return time > o.time;
    return seq > o.seq;
  }
};

struct Engine {
  const RunConfig& cfg;
  ProgramGraph graph;
  Maze maze;
  TargetMap targets;
  BudgetLedger ledger;
  std::vector<AgentState> agents;
  std::vector<double> speeds;
  std::vector<int> allocations;
  TaskStatus status;
  Assignment assignment;
  std::vector<bool> busy;
  Rng expiry_rng;
  int epochs_done = 0;
  long seq = 0;
  std::priority_queue<PendingEvent, std::vector<PendingEvent>, std::greater<>> queue;
  std::vector<TraceRow> trace;

  explicit Engine(const RunConfig& config)
      : cfg(config),
        graph(resolve_graph(config)),
        maze(Maze::generate(config.maze_size, mix_seed(config.seed, kSaltMaze))),
        targets(TargetMap::place(maze, graph, config.collision_rate,
                                 mix_seed(config.seed, kSaltTargets))),
        ledger(BudgetLedger::shared_pool(0)),
        status(graph),
        assignment(config.agents),
        expiry_rng(mix_seed(config.seed, kSaltEpoch)) {
    speeds.resize(static_cast<std::size_t>(cfg.agents));
    for (int i = 0; i < cfg.agents; ++i) speeds[static_cast<std::size_t>(i)] = cfg.speed_of(i);
    if (cfg.budget.mode == BudgetMode::shared) {
      ledger = BudgetLedger::shared_pool(cfg.budget.total, cfg.budget.query_cost);
    } else {
      ledger = BudgetLedger::per_agent(allocate_budgets(cfg.budget.policy, cfg.budget.total, speeds),
                                       cfg.budget.query_cost);
    }
    allocations.resize(static_cast<std::size_t>(cfg.agents));
    for (int i = 0; i < cfg.agents; ++i) allocations[static_cast<std::size_t>(i)] = ledger.allocation(i);
    agents.resize(static_cast<std::size_t>(cfg.agents));
    for (int i = 0; i < cfg.agents; ++i) {
      agents[static_cast<std::size_t>(i)].id = i;
      agents[static_cast<std::size_t>(i)].speed = speeds[static_cast<std::size_t>(i)];
    }
    busy.assign(static_cast<std::size_t>(cfg.agents), false);
  }

  void push(double time, EventKind kind, int agent = -1, int task = -1,
            ExplorationOutcome outcome = {}) {
    queue.push(PendingEvent{time, seq++, kind, agent, task, std::move(outcome)});
  }

  TraceRow& emit(double time, EventKind kind, int agent, int task) {
    TraceRow row;
    row.time = time;
    row.seq = static_cast<long>(trace.size());
    row.kind = kind;
    row.agent = agent;
    row.task = task;
    trace.push_back(std::move(row));
    return trace.back();
  }

  void start_exploration(int agent, int task, double now) {
    const int unaccomplished = graph.size() - status.count(TaskState::accomplished);
    ExplorationOutcome outcome =
        knowledge_gain(agents[static_cast<std::size_t>(agent)], task, ledger, maze, targets,
                       cfg.timing, cfg.effective_step_cap(), unaccomplished, now);
    push(now + outcome.duration, EventKind::explore_done, agent, task, std::move(outcome));
  }

  void on_dispatch(double now) {
    std::vector<int> idle;
    for (int i = 0; i < cfg.agents; ++i)
      if (!busy[static_cast<std::size_t>(i)]) idle.push_back(i);
    const std::vector<int> avail = get_avail_tasks(graph, status, static_cast<int>(idle.size()));
    idle.resize(avail.size());
    const auto pairs = task_assignment(avail, idle, assignment, status, targets, now);
    for (const auto& [task, agent] : pairs) {
      busy[static_cast<std::size_t>(agent)] = true;
      emit(now, EventKind::dispatch, agent, task);
      start_exploration(agent, task, now);
    }
  }

  void on_explore_done(const PendingEvent& ev) {
    TraceRow& row = emit(ev.time, EventKind::explore_done, ev.agent, ev.task);
    row.found = ev.outcome.solution.has_value();
    row.lookup = ev.outcome.from_lookup;
    row.hinted = ev.outcome.hinted;
    row.steps = ev.outcome.steps;
    row.queries = ev.outcome.queries;
    row.duration = ev.outcome.duration;
    if (ev.outcome.solution) {
      push(ev.time, EventKind::soln_check, ev.agent, ev.task, ev.outcome);
    } else {
      status.mark_failed(ev.task);
      busy[static_cast<std::size_t>(ev.agent)] = false;
      push(ev.time, EventKind::dispatch);
    }
  }

  void on_soln_check(const PendingEvent& ev) {
    const ValidationRecord rec = handle_soln_check(ev.task, *ev.outcome.solution, ev.agent,
                                                   targets, status, assignment, ev.time);
    TraceRow& row = emit(ev.time, EventKind::soln_check, ev.agent, ev.task);
    row.check = static_cast<int>(rec.verdict);
    row.reward = rec.reward_granted;
    if (rec.verdict == Verdict::ok) {
      push(ev.time, EventKind::task_done, ev.agent, ev.task, ev.outcome);
    } else {
      // The world moved on mid-flight; drop the stale entry and explore again.
      agents[static_cast<std::size_t>(ev.agent)].knowledge.erase(ev.task);
      start_exploration(ev.agent, ev.task, ev.time);
    }
  }

  void on_task_done(const PendingEvent& ev) {
    handle_task_done(ev.task, *ev.outcome.solution, ev.outcome.inference, ev.agent, agents,
                     cfg.cooperative);
    TraceRow& row = emit(ev.time, EventKind::task_done, ev.agent, ev.task);
    row.inference_count = static_cast<int>(ev.outcome.inference.size());
    busy[static_cast<std::size_t>(ev.agent)] = false;
    push(ev.time, EventKind::dispatch);
  }

  void on_epoch_advance(double now) {
    ++epochs_done;
    std::vector<int> expired;
    for (int t = 0; t < graph.size(); ++t)
      if (status.state(t) == TaskState::accomplished && expiry_rng.bernoulli(cfg.dynamic.p_expire))
        expired.push_back(t);
    if (!expired.empty()) {
      targets.advance_epoch(expired, mix_seed(cfg.seed, kSaltEpoch + 16 + static_cast<std::uint64_t>(epochs_done)));
      for (int t : expired) status.revive(t);
      TraceRow& row = emit(now, EventKind::epoch_advance, -1, -1);
      row.expired = expired;
      push(now, EventKind::dispatch);
    }
    if (epochs_done < cfg.dynamic.max_epochs)
      push(now + cfg.dynamic.interval, EventKind::epoch_advance);
  }

  void run() {
    push(0.0, EventKind::dispatch);
    if (cfg.dynamic.enabled && cfg.dynamic.max_epochs > 0 && cfg.dynamic.p_expire > 0.0)
      push(cfg.dynamic.interval, EventKind::epoch_advance);
    while (!queue.empty()) {
      const PendingEvent ev = queue.top();
      queue.pop();
      switch (ev.kind) {
        case EventKind::dispatch: on_dispatch(ev.time); break;
        case EventKind::explore_done: on_explore_done(ev); break;
        case EventKind::soln_check: on_soln_check(ev); break;
        case EventKind::task_done: on_task_done(ev); break;
        case EventKind::epoch_advance: on_epoch_advance(ev.time); break;
      }
    }
  }
};

}  // namespace

SimReport run_simulation(const RunConfig& config) {
  validate_config(config);
  Engine engine(config);
  engine.run();
  SimReport report = compute_metrics(engine.trace, engine.graph, config, engine.allocations);
  // Cross-check the replayed budget figures against the live ledger.
  if (report.queries_used * config.budget.query_cost != engine.ledger.consumed_total())
    throw Error("internal: trace query count disagrees with the budget ledger");
  report.budget_remaining = engine.ledger.remaining_total();
  report.trace = std::move(engine.trace);
  report.trace_hash = trace_hash(report.trace);
  return report;
}

namespace {

struct OpenAssignment {
  int task = -1;
  double start = 0.0;
  bool last_lookup = false;
};

struct ClosedAssignment {
  double duration = 0.0;
  bool lookup = false;
  bool success = false;
};

}  // namespace

SimReport compute_metrics(const std::vector<TraceRow>& trace, const ProgramGraph& graph,
                          const RunConfig& config, const std::vector<int>& budget_allocations) {
  const int n = config.agents;
  SimReport report;
  report.agents.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    AgentReport& a = report.agents[static_cast<std::size_t>(i)];
    a.agent = i;
    a.speed = config.speed_of(i);
    a.budget_allocated = budget_allocations.at(static_cast<std::size_t>(i));
  }

  TaskStatus status(graph);
  std::vector<std::optional<OpenAssignment>> open(static_cast<std::size_t>(n));
  std::vector<std::vector<ClosedAssignment>> closed(static_cast<std::size_t>(n));
  std::vector<double> twt(static_cast<std::size_t>(n), 0.0);
  std::vector<std::set<int>> assigned_by(static_cast<std::size_t>(n));
  std::vector<std::set<int>> accomplished_by(static_cast<std::size_t>(n));
  double last_time = 0.0;
  double last_ok = -1.0;
  int failed = 0;

  auto advance_time = [&](double now) {
    const double dt = now - last_time;
    if (dt > 0.0 && status.count(TaskState::pending) > 0) {
      for (int i = 0; i < n; ++i)
        if (!open[static_cast<std::size_t>(i)].has_value())
          twt[static_cast<std::size_t>(i)] += dt;
    }
    last_time = now;
  };

  for (const TraceRow& row : trace) {
    advance_time(row.time);
    switch (row.kind) {
      case EventKind::dispatch:
        status.mark_assigned(row.task);
        assigned_by[static_cast<std::size_t>(row.agent)].insert(row.task);
        open[static_cast<std::size_t>(row.agent)] = OpenAssignment{row.task, row.time, false};
        break;
      case EventKind::explore_done: {
        auto& slot = open[static_cast<std::size_t>(row.agent)];
        if (slot) slot->last_lookup = row.lookup;
        report.agents[static_cast<std::size_t>(row.agent)].queries += row.queries;
        if (!row.found) {
          status.mark_failed(row.task);
          ++failed;
          if (slot) {
            closed[static_cast<std::size_t>(row.agent)].push_back(
                {row.time - slot->start, slot->last_lookup, false});
            slot.reset();
          }
        }
        break;
      }
      case EventKind::soln_check:
        if (static_cast<Verdict>(row.check) == Verdict::ok) {
          update_dependencies(status, row.task, row.time);
          report.total_reward += row.reward;
          accomplished_by[static_cast<std::size_t>(row.agent)].insert(row.task);
          last_ok = row.time;
        }
        break;
      case EventKind::task_done: {
        auto& slot = open[static_cast<std::size_t>(row.agent)];
        if (slot) {
          closed[static_cast<std::size_t>(row.agent)].push_back(
              {row.time - slot->start, slot->last_lookup, true});
          slot.reset();
        }
        break;
      }
      case EventKind::epoch_advance:
        for (int t : row.expired) status.revive(t);
        break;
    }
  }

  report.horizon = trace.empty() ? 0.0 : trace.back().time;
  report.makespan = last_ok >= 0.0 ? last_ok : report.horizon;
  report.failed_tasks = failed;

  double pooled_sum = 0.0;
  int pooled_n = 0;
  double fresh_sum = 0.0, lookup_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    AgentReport& a = report.agents[static_cast<std::size_t>(i)];
    double busy = 0.0, sum = 0.0;
    for (const ClosedAssignment& c : closed[static_cast<std::size_t>(i)]) {
      busy += c.duration;
      sum += c.duration;
      pooled_sum += c.duration;
      ++pooled_n;
      if (c.success && c.lookup) {
        lookup_sum += c.duration;
        ++report.lookup_count;
      } else if (c.success) {
        fresh_sum += c.duration;
        ++report.fresh_count;
      }
    }
    const auto count = closed[static_cast<std::size_t>(i)].size();
    a.assigned = static_cast<int>(assigned_by[static_cast<std::size_t>(i)].size());
    a.accomplished = static_cast<int>(accomplished_by[static_cast<std::size_t>(i)].size());
    a.expl_mean = count > 0 ? sum / static_cast<double>(count) : 0.0;
    a.twt = twt[static_cast<std::size_t>(i)];
    a.busy = busy;
    a.idle = report.horizon - busy;
    report.total_processing += busy;
    report.wt += a.twt;
    report.queries_used += a.queries;
  }
  report.wt /= static_cast<double>(n);
  report.system_expl_mean = pooled_n > 0 ? pooled_sum / pooled_n : 0.0;
  report.fresh_expl_mean = report.fresh_count > 0 ? fresh_sum / report.fresh_count : 0.0;
  report.lookup_expl_mean = report.lookup_count > 0 ? lookup_sum / report.lookup_count : 0.0;
  for (int v : budget_allocations) report.budget_allocated += v;
  if (config.budget.mode == BudgetMode::shared && !budget_allocations.empty())
    report.budget_allocated = budget_allocations.front();
  report.budget_remaining = report.budget_allocated - report.queries_used * config.budget.query_cost;
  return report;
}

void write_report_csv(std::ostream& out, const SimReport& report, const RunConfig& config) {
  out << kReportCsvHeader << "\n";
  for (const AgentReport& a : report.agents) {
    out << config.run_id << ',' << config.seed << ',' << a.agent << ',' << format_double(a.speed)
        << ',' << a.budget_allocated << ',' << a.assigned << ',' << a.accomplished << ','
        << format_double(a.expl_mean) << ',' << format_double(a.twt) << ',' << a.queries << "\n";
  }
  out << config.run_id << ',' << config.seed << ",SYSTEM,,,-,-," << format_double(report.system_expl_mean)
      << ',' << format_double(report.wt) << ','
      << "makespan=" << format_double(report.makespan)
      << ";total_processing=" << format_double(report.total_processing)
      << ";horizon=" << format_double(report.horizon)
      << ";fresh_mean=" << format_double(report.fresh_expl_mean)
      << ";fresh_n=" << report.fresh_count
      << ";lookup_mean=" << format_double(report.lookup_expl_mean)
      << ";lookup_n=" << report.lookup_count
      << ";failed=" << report.failed_tasks
      << ";reward=" << format_double(report.total_reward)
      << ";queries=" << report.queries_used
      << ";allocated=" << report.budget_allocated
      << ";remaining=" << report.budget_remaining << "\n";
}

}  // namespace coopex
