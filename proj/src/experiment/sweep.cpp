#include "slicesim/experiment/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

namespace slicesim::experiment {

namespace {

std::string fmt(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

std::optional<double> parse_opt(std::string_view s, std::size_t line) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw ConfigError("aggregate line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cols;
  for (std::size_t pos; (pos = line.find(',')) != std::string_view::npos; line.remove_prefix(pos + 1))
    cols.push_back(line.substr(0, pos));
  cols.push_back(line);
  return cols;
}

constexpr std::string_view kAggregateHeader =
    "policy,active_fraction,slice_type,mean_latency_ms,pr_A_gt_099,qos_met,seeds,ci95,latency_ci95_ms,pr_A_ci95";

unsigned worker_count(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SLICESIM_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

void SweepSpec::validate() const {
  if (load_points.empty()) throw ConfigError("sweep needs at least one load point");
  if (policies.empty()) throw ConfigError("sweep needs at least one policy");
  if (seeds.empty()) throw ConfigError("sweep needs at least one seed");
  for (double f : load_points)
    if (!(f > 0.0 && f <= 1.0)) throw ConfigError("load points must lie in (0,1]");
  base.validate();
}

std::vector<double> fine_load_sweep() {
  std::vector<double> v;
  for (int i = 10; i <= 100; i += 5) v.push_back(i / 100.0);
  return v;
}

std::string_view to_string(SliceGroup g) {
  switch (g) {
    case SliceGroup::Embb: return "eMBB";
    case SliceGroup::RegularMonitoring: return "RegularMonitoring";
    case SliceGroup::Emergency: return "Emergency";
    case SliceGroup::Healthcare: return "Healthcare";
  }
  return "?";
}

SliceGroup slice_group_from_string(std::string_view s) {
  for (SliceGroup g : kSliceGroups)
    if (to_string(g) == s) return g;
  throw ConfigError("unknown slice group '" + std::string(s) + "'");
}

metrics::SliceFilter filter_of(SliceGroup g) {
  switch (g) {
    case SliceGroup::Embb: return {SliceType::Embb};
    case SliceGroup::RegularMonitoring: return {SliceType::RegularMonitoring};
    case SliceGroup::Emergency: return {SliceType::Emergency};
    case SliceGroup::Healthcare: return metrics::SliceFilter::healthcare();
  }
  return {};
}

RunMetrics compute_run_metrics(const RunKey& key, const engine::RunResult& result, SimTime window) {
  RunMetrics m;
  m.key = key;
  m.stats = result.stats;
  for (SliceGroup g : kSliceGroups) {
    auto& gm = m.groups[static_cast<int>(g)];
    const auto f = filter_of(g);
    gm.latency = metrics::e2e_latency_stats(result.trace, f);
    gm.availability = metrics::availability(result.trace, f, window).value();
    gm.qos_met = metrics::qos_met_fraction(result.trace, f);
  }
  return m;
}

std::vector<AggregateRow> aggregate(const std::vector<RunMetrics>& runs) {
  // Cells keep the order in which they first appear.
  std::vector<std::pair<sched::Policy, double>> cells;
  for (const auto& r : runs) {
    const std::pair<sched::Policy, double> c{r.key.policy, r.key.load};
    if (std::find(cells.begin(), cells.end(), c) == cells.end()) cells.push_back(c);
  }
  std::vector<AggregateRow> rows;
  for (const auto& [policy, load] : cells) {
    for (SliceGroup g : kSliceGroups) {
      std::vector<std::optional<double>> lat, avail, qos;
      std::int64_t n = 0;
      for (const auto& r : runs) {
        if (r.key.policy != policy || r.key.load != load) continue;
        ++n;
        const auto& gm = r.group(g);
        lat.push_back(gm.latency ? std::optional<double>(gm.latency->mean_ms) : std::nullopt);
        avail.push_back(gm.availability);
        qos.push_back(gm.qos_met);
      }
      AggregateRow row;
      row.policy = policy;
      row.active_fraction = load;
      row.slice = g;
      row.seeds = n;
      const auto ls = metrics::summarize(lat);
      if (ls.n > 0) {
        row.mean_latency_ms = ls.mean;
        row.latency_ci95_ms = ls.ci95;
      }
      const auto qs = metrics::summarize(qos);
      if (qs.n > 0) {
        row.qos_met = qs.mean;
        row.ci95 = qs.ci95;
      }
      row.pr_A_gt_099 = metrics::prob_availability_above(avail);
      if (row.pr_A_gt_099) {
        const double p = *row.pr_A_gt_099;
        const auto k = std::count_if(avail.begin(), avail.end(), [](const auto& a) { return a.has_value(); });
        row.pr_A_ci95 = 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(k));
      }
      rows.push_back(row);
    }
  }
  return rows;
}

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
  out << kAggregateHeader << '\n';
  for (const auto& r : rows) {
    out << sched::to_string(r.policy) << ',' << format_load(r.active_fraction) << ',' << to_string(r.slice) << ','
        << fmt(r.mean_latency_ms) << ',' << fmt(r.pr_A_gt_099) << ',' << fmt(r.qos_met) << ',' << r.seeds << ','
        << fmt(r.ci95) << ',' << fmt(r.latency_ci95_ms) << ',' << fmt(r.pr_A_ci95) << '\n';
  }
}

std::vector<AggregateRow> read_aggregate_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kAggregateHeader) throw ConfigError("aggregate: missing or unexpected header");
  std::vector<AggregateRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto c = split(line);
    if (c.size() != 10) throw ConfigError("aggregate line " + std::to_string(lineno) + ": expected 10 columns");
    AggregateRow r;
    r.policy = sched::policy_from_string(c[0]);
    r.active_fraction = parse_opt(c[1], lineno).value_or(0.0);
    r.slice = slice_group_from_string(c[2]);
    r.mean_latency_ms = parse_opt(c[3], lineno);
    r.pr_A_gt_099 = parse_opt(c[4], lineno);
    r.qos_met = parse_opt(c[5], lineno);
    r.seeds = static_cast<std::int64_t>(parse_opt(c[6], lineno).value_or(0.0));
    r.ci95 = parse_opt(c[7], lineno).value_or(0.0);
    r.latency_ci95_ms = parse_opt(c[8], lineno).value_or(0.0);
    r.pr_A_ci95 = parse_opt(c[9], lineno).value_or(0.0);
    rows.push_back(r);
  }
  return rows;
}

engine::Scenario scenario_for(const SweepSpec& spec, const RunKey& key) {
  engine::Scenario sc = spec.base;
  sc.policy.policy = key.policy;
  sc.active_fraction = key.load;
  sc.seed = key.seed;
  return sc;
}

std::string format_load(double load) { return fmt(load); }

std::string trace_file_name(const RunKey& key) {
  return std::string(sched::to_string(key.policy)) + "_load" + format_load(key.load) + "_seed" +
         std::to_string(key.seed) + ".csv";
}

SweepResult run_sweep(const SweepSpec& spec, const SweepOptions& options) {
  spec.validate();
  std::vector<RunKey> keys;
  for (auto policy : spec.policies)
    for (double load : spec.load_points)
      for (auto seed : spec.seeds) keys.push_back(RunKey{policy, load, seed});

  if (options.out_dir) {
    std::filesystem::create_directories(*options.out_dir);
    if (options.write_traces) std::filesystem::create_directories(*options.out_dir / "traces");
  }

  std::vector<std::optional<RunMetrics>> slots(keys.size());
  std::vector<std::optional<std::string>> errors(keys.size());
  std::atomic<std::size_t> next{0};
  std::mutex callback_mutex;

  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < keys.size();) {
      const RunKey& key = keys[i];
      try {
        const auto result = engine::run(scenario_for(spec, key));
        if (options.out_dir && options.write_traces) {
          const auto path = *options.out_dir / "traces" / trace_file_name(key);
          std::ofstream out(path);
          if (!out) throw ConfigError("cannot write " + path.string());
          metrics::write_trace_csv(out, result.trace);
          if (!out) throw ConfigError("error writing " + path.string());
        }
        slots[i] = compute_run_metrics(key, result);
        if (options.on_run) {
          std::lock_guard lock(callback_mutex);
          options.on_run(key, result);
        }
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };

  const unsigned n_workers = std::min<std::size_t>(worker_count(options.workers), keys.size());
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  SweepResult res;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (slots[i]) res.runs.push_back(std::move(*slots[i]));
    if (errors[i]) res.failures.push_back(SweepFailure{keys[i], *errors[i]});
  }
  res.rows = aggregate(res.runs);
  if (options.out_dir) {
    const auto path = *options.out_dir / "aggregate.csv";
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    write_aggregate_csv(out, res.rows);
  }
  return res;
}

Figure figure_from_string(std::string_view s) {
  if (s == "latency") return Figure::Latency;
  if (s == "availability") return Figure::Availability;
  if (s == "qos") return Figure::Qos;
  throw ConfigError("unknown figure '" + std::string(s) + "' (latency, availability or qos)");
}

void emit_figure_data(const std::vector<AggregateRow>& rows, Figure figure, std::ostream& out,
                      std::ostream& warnings) {
  std::vector<SliceGroup> groups;
  switch (figure) {
    case Figure::Latency: groups = {SliceGroup::Embb, SliceGroup::RegularMonitoring, SliceGroup::Emergency}; break;
    case Figure::Availability: groups = {SliceGroup::Embb, SliceGroup::Healthcare}; break;
    case Figure::Qos: groups = {SliceGroup::Emergency}; break;
  }

  std::vector<sched::Policy> policies;
  std::vector<double> loads;
  for (const auto& r : rows) {
    if (std::find(policies.begin(), policies.end(), r.policy) == policies.end()) policies.push_back(r.policy);
    if (std::find(loads.begin(), loads.end(), r.active_fraction) == loads.end()) loads.push_back(r.active_fraction);
  }
  std::sort(policies.begin(), policies.end());
  std::sort(loads.begin(), loads.end());

  auto find = [&](sched::Policy p, double load, SliceGroup g) -> const AggregateRow* {
    for (const auto& r : rows)
      if (r.policy == p && r.active_fraction == load && r.slice == g) return &r;
    return nullptr;
  };

  std::string missing;
  for (auto p : policies)
    for (double load : loads)
      for (auto g : groups)
        if (!find(p, load, g)) {
          missing += missing.empty() ? "" : "; ";
          missing += std::string(sched::to_string(p)) + " " + format_load(load) + " " + std::string(to_string(g));
        }
  if (!missing.empty()) throw ConfigError("aggregate is missing cells: " + missing);

  out << "policy,active_fraction,slice_type,value,ci95\n";
  for (auto p : policies)
    for (double load : loads)
      for (auto g : groups) {
        const AggregateRow& r = *find(p, load, g);
        std::optional<double> value;
        double ci = 0.0;
        switch (figure) {
          case Figure::Latency: value = r.mean_latency_ms, ci = r.latency_ci95_ms; break;
          case Figure::Availability: value = r.pr_A_gt_099, ci = r.pr_A_ci95; break;
          case Figure::Qos: value = r.qos_met, ci = r.ci95; break;
        }
        if (!value) {
          warnings << "warning: no " << to_string(g) << " data for " << sched::to_string(p) << " at load "
                   << format_load(load) << ", row omitted\n";
          continue;
        }
        out << sched::to_string(p) << ',' << format_load(load) << ',' << to_string(g) << ',' << fmt(*value) << ','
            << fmt(ci) << '\n';
      }
}

}  // namespace slicesim::experiment
