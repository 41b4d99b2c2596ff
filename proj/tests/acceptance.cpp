// Acceptance harness: prints one PASS/FAIL line per criterion and exits
// non-zero if any fails. Defaults run the full 300 s, 10-seed sweep.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "slicesim/experiment/sweep.hpp"
#include "slicesim/phy/phy.hpp"

using namespace slicesim;
using experiment::AggregateRow;
using experiment::SliceGroup;
using sched::Policy;

namespace {

struct Verdict {
  int id;
  std::string name;
  bool pass;
  std::string detail;
};

std::string fmt(double v, int prec = 3) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

class Rows {
public:
  explicit Rows(const std::vector<AggregateRow>& rows) : rows_(rows) {}

  const AggregateRow* find(Policy p, double load, SliceGroup g) const {
    for (const auto& r : rows_)
      if (r.policy == p && std::abs(r.active_fraction - load) < 1e-9 && r.slice == g) return &r;
    return nullptr;
  }
  std::optional<double> qos(Policy p, double load, SliceGroup g = SliceGroup::Emergency) const {
    const auto* r = find(p, load, g);
    return r ? r->qos_met : std::nullopt;
  }
  std::optional<double> latency(Policy p, double load, SliceGroup g = SliceGroup::Emergency) const {
    const auto* r = find(p, load, g);
    return r ? r->mean_latency_ms : std::nullopt;
  }
  std::optional<double> pr_a(Policy p, double load, SliceGroup g) const {
    const auto* r = find(p, load, g);
    return r ? r->pr_A_gt_099 : std::nullopt;
  }

private:
  const std::vector<AggregateRow>& rows_;
};

std::string opt(std::optional<double> v, int prec = 3) { return v ? fmt(*v, prec) : "n/a"; }

Verdict policy_ordering(const Rows& r, const std::vector<double>& loads) {
  std::string bad;
  for (double l : loads) {
    const auto el = r.qos(Policy::Elastic, l), e2e = r.qos(Policy::E2E, l), ba = r.qos(Policy::Basic, l);
    if (!el || !e2e || !ba || !(*el >= *e2e && *e2e >= *ba))
      bad += " " + experiment::format_load(l) + "(" + opt(el) + "/" + opt(e2e) + "/" + opt(ba) + ")";
  }
  return {1, "emergency qos_met Elastic >= E2E >= Basic at every load", bad.empty(),
          bad.empty() ? "means ordered at all " + std::to_string(loads.size()) + " loads" : "violated at" + bad};
}

Verdict elastic_robustness(const Rows& r) {
  const auto q75 = r.qos(Policy::Elastic, 0.75), q100 = r.qos(Policy::Elastic, 1.0);
  const bool pass = q75 && q100 && *q75 >= 0.85 && *q100 >= 0.70;
  return {2, "Elastic emergency qos_met >= 0.85 at 75% and >= 0.70 at 100%", pass,
          "0.75: " + opt(q75) + ", 1.00: " + opt(q100)};
}

Verdict basic_collapse(const Rows& r, const std::vector<double>& loads) {
  const auto q100 = r.qos(Policy::Basic, 1.0);
  std::string flat;
  int steps = 0, down = 0;
  for (std::size_t i = 1; i < loads.size(); ++i) {
    const auto a = r.qos(Policy::Basic, loads[i - 1]), b = r.qos(Policy::Basic, loads[i]);
    ++steps;
    if (a && b && *b < *a)
      ++down;
    else
      flat += " " + experiment::format_load(loads[i - 1]) + "->" + experiment::format_load(loads[i]) + "(" + opt(a) +
              "->" + opt(b) + ")";
  }
  const bool level = q100 && *q100 <= 0.30;
  const bool slope = down == steps;
  std::string detail = "at 1.00: " + opt(q100) + ", decreasing steps " + std::to_string(down) + "/" +
                       std::to_string(steps);
  if (!slope) detail += "; not decreasing:" + flat;
  return {3, "Basic emergency qos_met <= 0.30 at 100%, negative slope at every step", level && slope, detail};
}

Verdict latency_insensitivity(const Rows& r) {
  const auto e3 = r.latency(Policy::Elastic, 0.3), e5 = r.latency(Policy::Elastic, 0.5);
  const auto b3 = r.latency(Policy::Basic, 0.3), b5 = r.latency(Policy::Basic, 0.5);
  const bool have = e3 && e5 && b3 && b5;
  const double er = have ? *e5 / *e3 : 0.0, br = have ? *b5 / *b3 : 0.0;
  const bool pass = have && er <= 1.2 && br >= 1.5;
  return {4, "emergency mean latency 50%/30%: Elastic <= 1.2x, Basic >= 1.5x", pass,
          "Elastic " + opt(e3, 2) + " -> " + opt(e5, 2) + " ms (x" + fmt(er, 2) + "), Basic " + opt(b3, 2) + " -> " +
              opt(b5, 2) + " ms (x" + fmt(br, 2) + ")"};
}

Verdict availability_ordering(const Rows& r) {
  bool pass = true;
  std::string detail;
  for (double l : {0.3, 0.5}) {
    const auto el = r.pr_a(Policy::Elastic, l, SliceGroup::Healthcare);
    const auto e2e = r.pr_a(Policy::E2E, l, SliceGroup::Healthcare);
    const auto ba = r.pr_a(Policy::Basic, l, SliceGroup::Healthcare);
    pass = pass && el && e2e && ba && *el >= *e2e && *e2e >= *ba && *el >= 0.9;
    detail += (detail.empty() ? "" : "; ") + experiment::format_load(l) + ": " + opt(el, 2) + "/" + opt(e2e, 2) +
              "/" + opt(ba, 2);
  }
  const auto embb_el = r.pr_a(Policy::Elastic, 0.5, SliceGroup::Embb);
  const auto embb_e2e = r.pr_a(Policy::E2E, 0.5, SliceGroup::Embb);
  detail += " (eMBB at 0.5, not required: " + opt(embb_el, 2) + "/" + opt(embb_e2e, 2) + ")";
  return {5, "healthcare Pr(A>0.99) Elastic >= E2E >= Basic and Elastic >= 0.9 at 30%, 50%", pass, detail};
}

Verdict oracle_equivalence(int instances) {
  std::mt19937_64 rng(2024);
  const SimTime now = SimTime::from_s(1);
  int checked = 0, mismatched = 0;
  for (int i = 0; i < instances; ++i) {
    sched::PolicyConfig cfg;
    cfg.policy = static_cast<Policy>(i % 3);
    cfg.cross_hop_reporting = (i / 3) % 2 == 0;
    const auto in = oracle::queues::random_queues(rng, cfg, now);
    bool positions_ok = false;
    const bool same = oracle::queues::scheduled(in, cfg, now, &positions_ok) == oracle::queues::expected(in, cfg, now);
    ++checked;
    if (!same || !positions_ok) ++mismatched;
  }
  long scale_cases = 0, scale_bad = 0;
  const SliceType types[][3] = {
      {SliceType::Embb, SliceType::RegularMonitoring, SliceType::Emergency},
      {SliceType::Emergency, SliceType::Embb, SliceType::RegularMonitoring},
      {SliceType::Embb, SliceType::Embb, SliceType::Embb},
  };
  for (const auto& t : types)
    for (int a = 0; a <= 10; ++a)
      for (int b = 0; b <= 10; ++b)
        for (int c = 0; c <= 10; ++c)
          for (int avail = 0; avail <= 15; ++avail) {
            const std::vector<sched::DemandEstimate> d{{0, t[0], a}, {1, t[1], b}, {2, t[2], c}};
            ++scale_cases;
            if (sched::elastic_scale(d, avail) != oracle::elastic_scale(d, avail)) ++scale_bad;
          }
  return {8, "schedule_interval and elastic_scale match their oracles", mismatched == 0 && scale_bad == 0,
          std::to_string(checked - mismatched) + "/" + std::to_string(checked) + " random instances, " +
              std::to_string(scale_cases - scale_bad) + "/" + std::to_string(scale_cases) + " demand triples"};
}

Verdict determinism(const engine::Scenario& base) {
  bool pass = true;
  std::string detail;
  for (Policy p : {Policy::Basic, Policy::E2E, Policy::Elastic}) {
    engine::Scenario sc = base;
    sc.policy.policy = p;
    sc.active_fraction = 0.5;
    sc.seed = 3;
    std::vector<std::string> traces;
    for (int rep = 0; rep < 3; ++rep) {
      std::ostringstream os;
      metrics::write_trace_csv(os, engine::run(sc).trace);
      traces.push_back(os.str());
    }
    const bool same = traces[0] == traces[1] && traces[1] == traces[2];
    pass = pass && same;
    detail += (detail.empty() ? "" : ", ") + std::string(to_string(p)) + (same ? " identical" : " DIFFERENT") + " (" +
              std::to_string(traces[0].size()) + " bytes)";
  }
  return {9, "3 repeated runs give byte-identical traces", pass, detail};
}

Verdict bler_calibration(int samples) {
  bool pass = true;
  std::string detail;
  for (const auto& hop : {engine::default_wlan_hop(), engine::default_fwa_hop()}) {
    LinkState link;
    link.spectral_efficiency = hop.channel.mean_efficiency;
    link.target_bler = hop.target_bler;
    Rng rng = make_rng(77, static_cast<std::uint64_t>(hop.grid.hop), 0);
    int failures = 0;
    for (int i = 0; i < samples; ++i)
      if (!phy::transmit(1'000'000, 1, link, hop, rng, 0).success) ++failures;
    const double rate = static_cast<double>(failures) / samples;
    const double rel = std::abs(rate - hop.target_bler) / hop.target_bler;
    pass = pass && rel <= 0.05;
    detail += (detail.empty() ? "" : ", ") + std::string(to_string(hop.grid.hop)) + " " + fmt(rate, 4) + " vs " +
              fmt(hop.target_bler, 4) + " (" + fmt(100 * rel, 2) + "%)";
  }
  return {10, "empirical block failure rate within 5% of target", pass, detail};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"slicesim acceptance harness"};
  std::int64_t duration_ms = 300'000;
  int n_seeds = 10;
  unsigned workers = 0;
  std::string aggregate_out;
  app.add_option("--duration-ms", duration_ms, "simulated time per run")->check(CLI::PositiveNumber);
  app.add_option("--seeds", n_seeds, "seeds per (policy, load)")->check(CLI::PositiveNumber);
  app.add_option("--workers", workers, "parallel runs (0 = automatic)");
  app.add_option("--aggregate", aggregate_out, "also write the sweep aggregate CSV here");
  CLI11_PARSE(app, argc, argv);

  experiment::SweepSpec spec;
  spec.base = engine::case_study_preset();
  spec.base.duration_ms = duration_ms;
  spec.load_points = experiment::fine_load_sweep();
  spec.policies = {Policy::Basic, Policy::E2E, Policy::Elastic};
  spec.seeds.resize(static_cast<std::size_t>(n_seeds));
  std::iota(spec.seeds.begin(), spec.seeds.end(), 1);

  // Trace checks run inside the sweep so traces need not be kept.
  std::int64_t late_elastic = 0, elastic_delivered = 0;
  std::int64_t overallocated_runs = 0, unbalanced_runs = 0, runs_seen = 0, intervals = 0, wc_violations = 0;
  const std::size_t total = spec.load_points.size() * spec.policies.size() * spec.seeds.size();
  experiment::SweepOptions options;
  options.write_traces = false;
  options.workers = workers;
  options.on_run = [&](const experiment::RunKey& key, const engine::RunResult& r) {
    ++runs_seen;
    const auto& st = r.stats;
    intervals += st.intervals;
    wc_violations += st.work_conservation_violations;
    if (st.max_overallocation > 0) ++overallocated_runs;
    std::int64_t delivered = 0, dropped = 0, lost = 0, in_flight = 0;
    for (const auto& p : r.trace.packets) {
      switch (p.outcome) {
        case PacketOutcome::Delivered: ++delivered; break;
        case PacketOutcome::DroppedExpired: ++dropped; break;
        case PacketOutcome::LostRetx: ++lost; break;
        case PacketOutcome::InFlight: ++in_flight; break;
      }
      if (key.policy == Policy::Elastic && p.outcome == PacketOutcome::Delivered) {
        ++elastic_delivered;
        const std::int64_t survival = r.trace.flows[p.flow_ref].survival_ms;
        if (*p.delivered_at - p.created_at > SimTime::from_ms(survival)) ++late_elastic;
      }
    }
    const auto generated = static_cast<std::int64_t>(r.trace.packets.size());
    if (generated != delivered + dropped + lost + in_flight || st.generated != generated ||
        st.delivered != delivered || st.dropped_expired != dropped || st.lost_retx != lost || st.in_flight != in_flight)
      ++unbalanced_runs;
    std::cerr << "\r[" << runs_seen << "/" << total << "] " << to_string(key.policy) << " load "
              << experiment::format_load(key.load) << " seed " << key.seed << "        " << std::flush;
  };
  const auto result = experiment::run_sweep(spec, options);
  std::cerr << "\n";

  if (!aggregate_out.empty()) {
    std::ofstream out(aggregate_out);
    experiment::write_aggregate_csv(out, result.rows);
  }

  std::cout << "Emergency qos_met per load (Basic / E2E / Elastic):\n";
  const Rows rows(result.rows);
  for (double l : spec.load_points)
    std::cout << "  " << fmt(l, 2) << "  " << opt(rows.qos(Policy::Basic, l)) << "  " << opt(rows.qos(Policy::E2E, l))
              << "  " << opt(rows.qos(Policy::Elastic, l)) << "\n";
  std::cout << "\n";

  std::vector<Verdict> v;
  v.push_back(policy_ordering(rows, spec.load_points));
  v.push_back(elastic_robustness(rows));
  v.push_back(basic_collapse(rows, spec.load_points));
  v.push_back(latency_insensitivity(rows));
  v.push_back(availability_ordering(rows));
  v.push_back({6, "no Elastic packet delivered after its survival time", late_elastic == 0 && elastic_delivered > 0,
               std::to_string(late_elastic) + " late of " + std::to_string(elastic_delivered) + " delivered"});
  v.push_back({7, "allocated <= usable every interval; packet conservation every run",
               overallocated_runs == 0 && unbalanced_runs == 0 && runs_seen == static_cast<std::int64_t>(total),
               std::to_string(runs_seen) + " runs, " + std::to_string(intervals) + " intervals, " +
                   std::to_string(overallocated_runs) + " over-allocated, " + std::to_string(unbalanced_runs) +
                   " unbalanced (idle units with work left: " + std::to_string(wc_violations) + ")"});
  v.push_back(oracle_equivalence(3000));
  v.push_back(determinism(spec.base));
  v.push_back(bler_calibration(100'000));

  bool all = result.failures.empty();
  for (const auto& f : result.failures)
    std::cout << "run failed: " << to_string(f.key.policy) << " load " << experiment::format_load(f.key.load)
              << " seed " << f.key.seed << ": " << f.message << "\n";
  for (const auto& x : v) {
    std::cout << (x.pass ? "PASS" : "FAIL") << " criterion " << x.id << ": " << x.name << " -- " << x.detail << "\n";
    all = all && x.pass;
  }
  return all ? 0 : 1;
}
