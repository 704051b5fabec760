#include "coopex/exp_harness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "coopex/errors.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace coopex {

namespace {

[[noreturn]] void schema_fail(const std::string& what) { throw SchemaError(what); }

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  for (const auto& item : obj.items())
    if (allowed.count(item.key()) == 0)
      schema_fail(where + ": unknown key \"" + item.key() + "\"");
}

double get_number(const json& v, const std::string& where) {
  if (!v.is_number()) schema_fail(where + ": expected a number");
  return v.get<double>();
}

int get_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) schema_fail(where + ": expected an integer");
  return v.get<int>();
}

bool get_bool(const json& v, const std::string& where) {
  if (!v.is_boolean()) schema_fail(where + ": expected a boolean");
  return v.get<bool>();
}

std::string get_string(const json& v, const std::string& where) {
  if (!v.is_string()) schema_fail(where + ": expected a string");
  return v.get<std::string>();
}

GraphSpec parse_graph_spec(const json& v) {
  GraphSpec spec;
  if (v.is_string()) {
    spec.kind = GraphSpec::Kind::builtin;
    spec.name = v.get<std::string>();
    if (spec.name != "g18" && spec.name != "g40")
      schema_fail("graph: unknown builtin \"" + spec.name + "\" (expected g18 or g40)");
    return spec;
  }
  if (!v.is_object()) schema_fail("graph: expected a name or an object");
  check_keys(v, "graph", {"builtin", "random", "file"});
  if (v.size() != 1) schema_fail("graph: exactly one of builtin/random/file");
  if (v.contains("builtin")) return parse_graph_spec(v.at("builtin"));
  if (v.contains("file")) {
    spec.kind = GraphSpec::Kind::file;
    spec.path = get_string(v.at("file"), "graph.file");
    return spec;
  }
  const json& r = v.at("random");
  if (!r.is_object()) schema_fail("graph.random: expected an object");
  check_keys(r, "graph.random", {"tasks", "layers", "density"});
  spec.kind = GraphSpec::Kind::random;
  if (r.contains("tasks")) spec.tasks = get_int(r.at("tasks"), "graph.random.tasks");
  if (r.contains("layers")) spec.layers = get_int(r.at("layers"), "graph.random.layers");
  if (r.contains("density")) spec.density = get_number(r.at("density"), "graph.random.density");
  return spec;
}

BudgetConfig parse_budget(const json& v) {
  BudgetConfig b;
  if (!v.is_object()) schema_fail("budget: expected an object");
  check_keys(v, "budget", {"mode", "policy", "total", "shares", "query_cost"});
  if (v.contains("mode")) {
    const std::string mode = get_string(v.at("mode"), "budget.mode");
    if (mode == "shared")
      b.mode = BudgetMode::shared;
    else if (mode == "per-agent")
      b.mode = BudgetMode::per_agent;
    else
      schema_fail("budget.mode: expected shared or per-agent");
  }
  if (v.contains("policy"))
    b.policy.kind = budget_policy_from_string(get_string(v.at("policy"), "budget.policy"));
  if (v.contains("total")) b.total = get_int(v.at("total"), "budget.total");
  if (v.contains("shares")) {
    if (!v.at("shares").is_array()) schema_fail("budget.shares: expected an array");
    for (const json& s : v.at("shares")) b.policy.shares.push_back(get_int(s, "budget.shares"));
    b.policy.kind = BudgetPolicyKind::explicit_shares;
  }
  if (v.contains("query_cost")) b.query_cost = get_int(v.at("query_cost"), "budget.query_cost");
  return b;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) schema_fail("config root must be an object");
  check_keys(j, "config",
             {"graph", "agents", "speeds", "maze_size", "budget", "collision_rate", "complex_rate",
              "step_cap", "cooperative", "dynamic", "timing", "rewards", "complex_tasks", "seed",
              "run_id"});
  RunConfig c;
  if (j.contains("graph")) c.graph = parse_graph_spec(j.at("graph"));
  if (j.contains("agents")) c.agents = get_int(j.at("agents"), "agents");
  if (j.contains("speeds")) {
    if (!j.at("speeds").is_array()) schema_fail("speeds: expected an array");
    for (const json& s : j.at("speeds")) c.speeds.push_back(get_number(s, "speeds"));
  }
  if (j.contains("maze_size")) c.maze_size = get_int(j.at("maze_size"), "maze_size");
  if (j.contains("budget")) c.budget = parse_budget(j.at("budget"));
  if (j.contains("collision_rate"))
    c.collision_rate = get_number(j.at("collision_rate"), "collision_rate");
  if (j.contains("complex_rate")) c.complex_rate = get_number(j.at("complex_rate"), "complex_rate");
  if (j.contains("step_cap")) c.step_cap = get_int(j.at("step_cap"), "step_cap");
  if (j.contains("cooperative")) c.cooperative = get_bool(j.at("cooperative"), "cooperative");
  if (j.contains("dynamic")) {
    const json& d = j.at("dynamic");
    if (!d.is_object()) schema_fail("dynamic: expected an object");
    check_keys(d, "dynamic", {"enabled", "interval", "p_expire", "max_epochs"});
    if (d.contains("enabled")) c.dynamic.enabled = get_bool(d.at("enabled"), "dynamic.enabled");
    if (d.contains("interval")) c.dynamic.interval = get_number(d.at("interval"), "dynamic.interval");
    if (d.contains("p_expire")) c.dynamic.p_expire = get_number(d.at("p_expire"), "dynamic.p_expire");
    if (d.contains("max_epochs")) c.dynamic.max_epochs = get_int(d.at("max_epochs"), "dynamic.max_epochs");
  }
  if (j.contains("timing")) {
    const json& t = j.at("timing");
    if (!t.is_object()) schema_fail("timing: expected an object");
    check_keys(t, "timing", {"step_time", "lookup_time", "query_latency"});
    if (t.contains("step_time")) c.timing.step_time = get_number(t.at("step_time"), "timing.step_time");
    if (t.contains("lookup_time"))
      c.timing.lookup_time = get_number(t.at("lookup_time"), "timing.lookup_time");
    if (t.contains("query_latency"))
      c.timing.query_latency = get_number(t.at("query_latency"), "timing.query_latency");
  }
  if (j.contains("rewards")) {
    if (!j.at("rewards").is_array()) schema_fail("rewards: expected an array");
    for (const json& r : j.at("rewards")) c.rewards.push_back(get_number(r, "rewards"));
  }
  if (j.contains("complex_tasks")) {
    if (!j.at("complex_tasks").is_array()) schema_fail("complex_tasks: expected an array");
    std::vector<int> ids;
    for (const json& t : j.at("complex_tasks")) ids.push_back(get_int(t, "complex_tasks"));
    c.complex_tasks = std::move(ids);
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_integer()) schema_fail("seed: expected an integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("run_id")) c.run_id = get_string(j.at("run_id"), "run_id");
  try {
    validate_config(c);
  } catch (const ConfigInvalid& e) {
    throw SchemaError(e.what());
  }
  return c;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  std::stringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

// ---------------------------------------------------------------------------
// Presets

namespace {

struct PresetPoint {
  std::string sweep;
  RunConfig config;
};

struct MetricValue {
  std::string metric;
  double value = 0.0;
  bool valid = true;
};

struct Preset {
  std::string name;
  std::function<std::vector<PresetPoint>(bool full_scale)> points;
  std::function<std::vector<MetricValue>(const ParsedRunReport&)> metrics;
};

double detail_of(const ParsedRunReport& r, const std::string& key) {
  const auto it = r.detail.find(key);
  return it == r.detail.end() ? 0.0 : it->second;
}

std::vector<MetricValue> system_metrics(const ParsedRunReport& r) {
  return {{"expl_mean", r.system_expl_mean, true},
          {"wt", r.wt, true},
          {"makespan", detail_of(r, "makespan"), true},
          {"total_processing", detail_of(r, "total_processing"), true}};
}

std::vector<MetricValue> per_agent_metrics(const ParsedRunReport& r) {
  std::vector<MetricValue> out = system_metrics(r);
  for (const AgentReport& a : r.agents) {
    const std::string suffix = "_a" + std::to_string(a.agent);
    out.push_back({"expl" + suffix, a.expl_mean, a.assigned > 0});
    out.push_back({"twt" + suffix, a.twt, true});
    out.push_back({"assigned" + suffix, static_cast<double>(a.assigned), true});
  }
  return out;
}

RunConfig scalability_base(int tasks, int agents, bool full_scale) {
  RunConfig c;
  c.graph.kind = GraphSpec::Kind::random;
  c.graph.tasks = tasks;
  c.graph.layers = 10;
  c.graph.density = 0.33;
  c.agents = agents;
  c.maze_size = full_scale ? 400 : 100;
  c.budget.total = 0;
  c.collision_rate = 0.0;
  c.complex_rate = 0.0;
  return c;
}

RunConfig builtin_base(const std::string& graph, bool full_scale) {
  RunConfig c;
  c.graph.kind = GraphSpec::Kind::builtin;
  c.graph.name = graph;
  c.maze_size = full_scale ? 400 : 100;
  return c;
}

std::vector<double> speeds_with_fast(int n, int fast_count, double fast_speed) {
  std::vector<double> speeds(static_cast<std::size_t>(n), 1.0);
  for (int i = 0; i < fast_count && i < n; ++i) speeds[static_cast<std::size_t>(i)] = fast_speed;
  return speeds;
}

const std::vector<Preset>& all_presets() {
  static const std::vector<Preset> presets = [] {
    std::vector<Preset> p;

    p.push_back({"table1",
                 [](bool full) {
                   std::vector<PresetPoint> pts;
                   for (int agents : {1, 3, 5, 7, 9})
                     pts.push_back({"agents=" + std::to_string(agents),
                                    scalability_base(200, agents, full)});
                   return pts;
                 },
                 system_metrics});

    p.push_back({"fig3",
                 [](bool full) {
                   std::vector<PresetPoint> pts;
                   for (int tasks : {40, 80, 120, 160, 200})
                     pts.push_back({"tasks=" + std::to_string(tasks),
                                    scalability_base(tasks, 5, full)});
                   return pts;
                 },
                 system_metrics});

    p.push_back({"table2",
                 [](bool full) {
                   return std::vector<PresetPoint>{{"g40", builtin_base("g40", full)}};
                 },
                 per_agent_metrics});

    auto coop_vs_individual = [](const std::string& graph, std::vector<double> speeds) {
      return [graph, speeds](bool full) {
        std::vector<PresetPoint> pts;
        for (const char* mode : {"cooperative", "individual"}) {
          RunConfig c = builtin_base(graph, full);
          c.speeds = speeds;
          c.budget.total = 4;
          c.cooperative = std::string(mode) == "cooperative";
          pts.push_back({std::string("mode=") + mode, std::move(c)});
        }
        return pts;
      };
    };
    p.push_back({"fig4", coop_vs_individual("g18", {}), per_agent_metrics});
    p.push_back({"fig5", coop_vs_individual("g18", {2.0, 1.0, 1.0, 1.0, 1.0}), per_agent_metrics});

    p.push_back({"fig6",
                 [](bool full) {
                   std::vector<PresetPoint> pts;
                   std::vector<int> sizes = {50, 100, 200};
                   if (full) sizes = {50, 100, 200, 300, 400};
                   for (int n : sizes) {
                     RunConfig c = builtin_base("g40", false);
                     c.maze_size = n;
                     c.collision_rate = 0.4;
                     pts.push_back({"N=" + std::to_string(n), std::move(c)});
                   }
                   return pts;
                 },
                 [](const ParsedRunReport& r) {
                   std::vector<MetricValue> out = system_metrics(r);
                   out.push_back({"fresh_mean", detail_of(r, "fresh_mean"), detail_of(r, "fresh_n") > 0});
                   out.push_back(
                       {"lookup_mean", detail_of(r, "lookup_mean"), detail_of(r, "lookup_n") > 0});
                   return out;
                 }});

    p.push_back({"table3",
                 [](bool full) {
                   std::vector<PresetPoint> pts;
                   for (int f = 0; f <= 5; ++f) {
                     RunConfig c = builtin_base("g18", full);
                     c.speeds = speeds_with_fast(5, f, 2.0);
                     c.budget.total = 5;
                     pts.push_back({"f=" + std::to_string(f), std::move(c)});
                   }
                   return pts;
                 },
                 system_metrics});

    p.push_back({"fig7a",
                 [](bool full) {
                   std::vector<PresetPoint> pts;
                   for (int s = 1; s <= 10; ++s) {
                     RunConfig c = builtin_base("g40", full);
                     c.speeds = {static_cast<double>(s), 1.0, 1.0, 1.0, 1.0};
                     c.budget.total = 20;
                     pts.push_back({"speed=" + std::to_string(s), std::move(c)});
                   }
                   return pts;
                 },
                 system_metrics});

    p.push_back({"fig7b",
                 [](bool full) {
                   std::vector<PresetPoint> pts;
                   for (int b : {20, 40, 80}) {
                     RunConfig c = builtin_base("g40", full);
                     c.speeds = {1.0, 2.0, 3.0, 4.0, 5.0};
                     c.budget.mode = BudgetMode::per_agent;
                     c.budget.policy.kind = BudgetPolicyKind::equal;
                     c.budget.total = b;
                     pts.push_back({"B=" + std::to_string(b), std::move(c)});
                   }
                   return pts;
                 },
                 [](const ParsedRunReport& r) {
                   std::vector<MetricValue> out = system_metrics(r);
                   for (const AgentReport& a : r.agents)
                     out.push_back({"expl_speed" + std::to_string(a.agent + 1) + "x", a.expl_mean,
                                    a.assigned > 0});
                   return out;
                 }});

    p.push_back({"table4",
                 [](bool full) {
                   static const std::pair<int, int> rows[] = {{0, 20}, {1, 20}, {1, 40}, {1, 60},
                                                              {1, 80}, {1, 100}, {2, 100}, {3, 100},
                                                              {4, 100}, {2, 20}, {3, 20}, {4, 20}};
                   std::vector<PresetPoint> pts;
                   for (const char* graph : {"g18", "g40"}) {
                     for (const auto& [f, b] : rows) {
                       RunConfig c = builtin_base(graph, full);
                       c.speeds = speeds_with_fast(5, f, 2.0);
                       c.budget.mode = BudgetMode::per_agent;
                       c.budget.policy.kind = BudgetPolicyKind::equal;
                       c.budget.total = b;
                       pts.push_back({"graph=" + std::string(graph) + ";f=" + std::to_string(f) +
                                          ";B=" + std::to_string(b),
                                      std::move(c)});
                     }
                   }
                   return pts;
                 },
                 system_metrics});

    p.push_back({"table5",
                 [](bool full) {
                   std::vector<PresetPoint> pts;
                   for (const char* graph : {"g18", "g40"}) {
                     for (int s = 1; s <= 5; ++s) {
                       RunConfig c = builtin_base(graph, full);
                       c.speeds = {1.0, 2.0, 3.0, 4.0, 5.0};
                       c.budget.mode = BudgetMode::per_agent;
                       c.budget.policy.kind =
                           budget_policy_from_string("scenario" + std::to_string(s));
                       c.budget.total = 100;
                       pts.push_back({"graph=" + std::string(graph) + ";scenario=" + std::to_string(s),
                                      std::move(c)});
                     }
                   }
                   return pts;
                 },
                 system_metrics});

    return p;
  }();
  return presets;
}

const Preset* find_preset(const std::string& name) {
  for (const Preset& p : all_presets())
    if (p.name == name) return &p;
  return nullptr;
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char ch : s)
    out += (std::isalnum(static_cast<unsigned char>(ch)) != 0 || ch == '_' || ch == '=' ||
            ch == '.' || ch == '-')
               ? ch
               : '-';
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double stddev_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const Preset& p : all_presets()) names.push_back(p.name);
  return names;
}

bool is_preset(const std::string& name) { return find_preset(name) != nullptr; }

ParsedRunReport parse_report_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open report " + path);
  std::string line;
  if (!std::getline(in, line) || line != kReportCsvHeader)
    throw IoError("bad report header in " + path);
  ParsedRunReport out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cols = split(line, ',');
    if (cols.size() != 10) throw IoError("bad report row in " + path);
    if (cols[2] == "SYSTEM") {
      out.system_expl_mean = std::stod(cols[7]);
      out.wt = std::stod(cols[8]);
      for (const std::string& kv : split(cols[9], ';')) {
        const auto eq = kv.find('=');
        if (eq != std::string::npos) out.detail[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
      }
    } else {
      AgentReport a;
      a.agent = std::stoi(cols[2]);
      a.speed = std::stod(cols[3]);
      a.budget_allocated = std::stoi(cols[4]);
      a.assigned = std::stoi(cols[5]);
      a.accomplished = std::stoi(cols[6]);
      a.expl_mean = std::stod(cols[7]);
      a.twt = std::stod(cols[8]);
      a.queries = std::stoi(cols[9]);
      out.agents.push_back(a);
    }
  }
  return out;
}

namespace {

void append_table4_comparisons(std::vector<AggregateRow>& rows) {
  auto mean_at = [&rows](const std::string& sweep, const std::string& metric) -> std::optional<double> {
    for (const AggregateRow& r : rows)
      if (r.sweep == sweep && r.metric == metric) return r.mean;
    return std::nullopt;
  };
  for (const char* graph : {"g18", "g40"}) {
    const std::string g(graph);
    const auto budget_side = mean_at("graph=" + g + ";f=1;B=80", "expl_mean");
    const auto agent_side = mean_at("graph=" + g + ";f=4;B=20", "expl_mean");
    if (!budget_side || !agent_side) continue;
    AggregateRow row;
    row.preset = "table4";
    row.sweep = "graph=" + g + ";bold";
    row.metric = "expl_f1B80_minus_f4B20";
    row.mean = *budget_side - *agent_side;
    row.stddev = 0.0;
    row.n = 0;
    rows.push_back(row);
  }
}

void write_aggregate_csv(const std::string& path, const std::vector<AggregateRow>& rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << kAggregateCsvHeader << "\n";
  for (const AggregateRow& r : rows)
    out << r.preset << ',' << r.sweep << ',' << r.metric << ',' << format_double(r.mean) << ','
        << format_double(r.stddev) << ',' << r.n << "\n";
  if (!out) throw IoError("failed writing " + path);
}

std::vector<AggregateRow> read_aggregate_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open aggregate " + path);
  std::string line;
  if (!std::getline(in, line) || line != kAggregateCsvHeader)
    throw IoError("bad aggregate header in " + path);
  std::vector<AggregateRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cols = split(line, ',');
    if (cols.size() != 6) throw IoError("bad aggregate row in " + path);
    rows.push_back({cols[0], cols[1], cols[2], std::stod(cols[3]), std::stod(cols[4]),
                    std::stoi(cols[5])});
  }
  return rows;
}

}  // namespace

ExperimentResult run_experiment(const std::string& preset_or_path, int replications,
                                bool full_scale, const std::string& out_dir,
                                std::uint64_t base_seed) {
  const Preset* preset = find_preset(preset_or_path);
  Preset custom;
  if (preset == nullptr) {
    if (!fs::exists(preset_or_path))
      throw UnknownPreset("\"" + preset_or_path + "\" is neither a preset nor a config file");
    RunConfig config = parse_config_file(preset_or_path);
    custom.name = fs::path(preset_or_path).stem().string();
    custom.points = [config](bool) { return std::vector<PresetPoint>{{"config", config}}; };
    custom.metrics = system_metrics;
    preset = &custom;
  }
  if (replications < 1) replications = 20;

  ExperimentResult result;
  result.preset = preset->name;
  const fs::path base = fs::path(out_dir) / preset->name;
  const fs::path runs = base / "runs";
  std::error_code ec;
  fs::create_directories(runs, ec);
  if (ec) throw IoError("cannot create " + runs.string() + ": " + ec.message());

  const std::vector<PresetPoint> points = preset->points(full_scale);
  std::vector<std::string> metric_order;
  std::map<std::pair<std::string, std::string>, std::vector<double>> samples;

  for (const PresetPoint& point : points) {
    for (int k = 0; k < replications; ++k) {
      RunConfig config = point.config;
      config.seed = base_seed + static_cast<std::uint64_t>(k);
      config.run_id = preset->name + ":" + point.sweep;
      const SimReport report = run_simulation(config);
      const fs::path path =
          runs / (sanitize(point.sweep) + "__seed" + std::to_string(config.seed) + ".csv");
      {
        std::ofstream out(path);
        if (!out) throw IoError("cannot write " + path.string());
        write_report_csv(out, report, config);
      }
      result.files_written.push_back(path.string());
      // Aggregate from the file just written so the statistics match the
      // on-disk values exactly.
      const ParsedRunReport parsed = parse_report_csv(path.string());
      for (const MetricValue& mv : preset->metrics(parsed)) {
        if (std::find(metric_order.begin(), metric_order.end(), mv.metric) == metric_order.end())
          metric_order.push_back(mv.metric);
        if (mv.valid) samples[{point.sweep, mv.metric}].push_back(mv.value);
      }
    }
  }

  for (const PresetPoint& point : points) {
    for (const std::string& metric : metric_order) {
      const auto it = samples.find({point.sweep, metric});
      if (it == samples.end()) continue;
      AggregateRow row;
      row.preset = preset->name;
      row.sweep = point.sweep;
      row.metric = metric;
      row.mean = mean_of(it->second);
      row.stddev = stddev_of(it->second);
      row.n = static_cast<int>(it->second.size());
      result.rows.push_back(row);
    }
  }
  if (preset->name == "table4") append_table4_comparisons(result.rows);

  const fs::path aggregate = base / (preset->name + "_aggregate.csv");
  write_aggregate_csv(aggregate.string(), result.rows);
  result.files_written.push_back(aggregate.string());

  for (const std::string& plot : emit_plot_data(aggregate.string()))
    result.files_written.push_back(plot);
  return result;
}

namespace {

std::optional<double> row_mean(const std::vector<AggregateRow>& rows, const std::string& sweep,
                               const std::string& metric) {
  for (const AggregateRow& r : rows)
    if (r.sweep == sweep && r.metric == metric) return r.mean;
  return std::nullopt;
}

std::string plot_value(std::optional<double> v) { return v ? format_double(*v) : "nan"; }

}  // namespace

std::vector<std::string> emit_plot_data(const std::string& aggregate_csv_path) {
  const fs::path path(aggregate_csv_path);
  std::string preset = path.stem().string();
  const std::string suffix = "_aggregate";
  if (preset.size() > suffix.size() && preset.ends_with(suffix))
    preset = preset.substr(0, preset.size() - suffix.size());

  const std::vector<AggregateRow> rows = read_aggregate_csv(aggregate_csv_path);
  const fs::path out_path = path.parent_path() / (preset + ".dat");
  std::string header;
  std::vector<std::string> lines;

  if (preset == "fig3") {
    header = "# tasks  makespan_mean_s";
    for (int tasks : {40, 80, 120, 160, 200}) {
      const auto m = row_mean(rows, "tasks=" + std::to_string(tasks), "makespan");
      if (m) lines.push_back(std::to_string(tasks) + "  " + plot_value(m));
    }
  } else if (preset == "fig4" || preset == "fig5") {
    header = "# agent  cooperative_expl_s  individual_expl_s";
    for (int a = 0; a < 5; ++a) {
      const std::string metric = "expl_a" + std::to_string(a);
      const auto coop = row_mean(rows, "mode=cooperative", metric);
      const auto indiv = row_mean(rows, "mode=individual", metric);
      if (coop || indiv)
        lines.push_back(std::to_string(a + 1) + "  " + plot_value(coop) + "  " + plot_value(indiv));
    }
  } else if (preset == "fig6") {
    header = "# maze_size  fresh_expl_s  inferred_expl_s";
    for (int n : {50, 100, 200, 300, 400}) {
      const std::string sweep = "N=" + std::to_string(n);
      const auto fresh = row_mean(rows, sweep, "fresh_mean");
      const auto inferred = row_mean(rows, sweep, "lookup_mean");
      if (fresh || inferred)
        lines.push_back(std::to_string(n) + "  " + plot_value(fresh) + "  " + plot_value(inferred));
    }
  } else if (preset == "fig7a") {
    header = "# speed_multiplier  expl_mean_s";
    for (int s = 1; s <= 10; ++s) {
      const auto m = row_mean(rows, "speed=" + std::to_string(s), "expl_mean");
      if (m) lines.push_back(std::to_string(s) + "  " + plot_value(m));
    }
  } else if (preset == "fig7b") {
    header = "# speed_multiplier  expl_b20_s  expl_b40_s  expl_b80_s";
    for (int s = 1; s <= 5; ++s) {
      const std::string metric = "expl_speed" + std::to_string(s) + "x";
      const auto b20 = row_mean(rows, "B=20", metric);
      const auto b40 = row_mean(rows, "B=40", metric);
      const auto b80 = row_mean(rows, "B=80", metric);
      if (b20 || b40 || b80)
        lines.push_back(std::to_string(s) + "  " + plot_value(b20) + "  " + plot_value(b40) + "  " +
                        plot_value(b80));
    }
  } else {
    return {};
  }

  std::ofstream out(out_path);
  if (!out) throw IoError("cannot write " + out_path.string());
  out << header << "\n";
  for (const std::string& line : lines) out << line << "\n";
  if (!out) throw IoError("failed writing " + out_path.string());
  return {out_path.string()};
}

}  // namespace coopex
