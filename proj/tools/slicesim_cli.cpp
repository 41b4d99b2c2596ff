// Batch driver: run load/seed sweeps and turn their aggregates into plot data.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "slicesim/experiment/sweep.hpp"
#include "slicesim/io/config.hpp"

namespace fs = std::filesystem;
using namespace slicesim;

namespace {

struct SimulateArgs {
  std::string config;
  std::string preset;
  std::string out;
  std::vector<std::string> policies;
  std::vector<std::string> loads;
  std::vector<std::uint64_t> seeds;
  bool no_traces = false;
  unsigned workers = 0;
};

int simulate(const SimulateArgs& a) {
  experiment::SweepSpec spec;
  if (!a.config.empty()) {
    if (!a.preset.empty()) throw ConfigError("--config and --preset are exclusive");
    spec.base = io::load_scenario(a.config);
  } else {
    spec.base = io::preset(a.preset.empty() ? "paper-case" : a.preset);
  }

  if (a.policies.empty()) {
    spec.policies = {sched::Policy::Basic, sched::Policy::E2E, sched::Policy::Elastic};
  } else {
    for (const auto& p : a.policies) spec.policies.push_back(sched::policy_from_string(p));
  }
  if (a.loads.empty()) {
    spec.load_points = {spec.base.active_fraction};
  } else {
    for (const auto& l : a.loads) {
      if (l == "fine") {
        auto fine = experiment::fine_load_sweep();
        spec.load_points.insert(spec.load_points.end(), fine.begin(), fine.end());
        continue;
      }
      try {
        std::size_t used = 0;
        spec.load_points.push_back(std::stod(l, &used));
        if (used != l.size()) throw std::invalid_argument(l);
      } catch (const std::logic_error&) {
        throw ConfigError("bad load point '" + l + "'");
      }
    }
  }
  spec.seeds = a.seeds.empty() ? std::vector<std::uint64_t>{spec.base.seed} : a.seeds;
  spec.validate();

  const fs::path out = a.out;
  fs::create_directories(out);
  {
    std::ofstream cfg(out / "scenario.json");
    cfg << io::scenario_to_json(spec.base).dump(2) << '\n';
  }

  experiment::SweepOptions opts;
  opts.out_dir = out;
  opts.write_traces = !a.no_traces;
  opts.workers = a.workers;
  std::size_t done = 0;
  const std::size_t total = spec.policies.size() * spec.load_points.size() * spec.seeds.size();
  opts.on_run = [&](const experiment::RunKey& k, const engine::RunResult&) {
    ++done;
    std::cerr << "[" << done << "/" << total << "] " << sched::to_string(k.policy) << " load "
              << experiment::format_load(k.load) << " seed " << k.seed << '\n';
  };
  const auto res = experiment::run_sweep(spec, opts);
  for (const auto& f : res.failures)
    std::cerr << "run failed: " << sched::to_string(f.key.policy) << " load " << experiment::format_load(f.key.load)
              << " seed " << f.key.seed << ": " << f.message << '\n';
  std::cout << "wrote " << (out / "aggregate.csv").string() << " (" << res.runs.size() << " runs)\n";
  return res.failures.empty() ? 0 : 1;
}

int report(const std::string& in_dir, const std::string& figure, const std::string& out_file) {
  const fs::path agg = fs::path(in_dir) / "aggregate.csv";
  std::ifstream in(agg);
  if (!in) throw ConfigError("cannot open " + agg.string());
  const auto rows = experiment::read_aggregate_csv(in);
  const fs::path out = out_file.empty() ? fs::path(in_dir) / ("figure_" + figure + ".csv") : fs::path(out_file);
  std::ofstream os(out);
  if (!os) throw ConfigError("cannot write " + out.string());
  experiment::emit_figure_data(rows, experiment::figure_from_string(figure), os, std::cerr);
  std::cout << "wrote " << out.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-hop WLAN/FWA uplink slicing simulator"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* cmd_sim = app.add_subcommand("simulate", "Run a policy x load x seed sweep");
  cmd_sim->add_option("--config", sim.config, "Scenario JSON file")->check(CLI::ExistingFile);
  cmd_sim->add_option("--preset", sim.preset, "Built-in scenario (paper-case, empty)");
  cmd_sim->add_option("--out", sim.out, "Output directory")->required();
  cmd_sim->add_option("--policy", sim.policies, "Policies: Basic, E2E, Elastic (default all)")->delimiter(',');
  cmd_sim->add_option("--loads", sim.loads, "Active RG fractions, or 'fine' for 0.10..1.00 step 0.05")
      ->delimiter(',');
  cmd_sim->add_option("--seeds", sim.seeds, "Seeds (default the scenario seed)")->delimiter(',');
  cmd_sim->add_flag("--no-traces", sim.no_traces, "Skip per-run trace files");
  cmd_sim->add_option("--workers", sim.workers, "Parallel runs (default SLICESIM_WORKERS or CPU count)");

  std::string in_dir, figure, out_file;
  auto* cmd_rep = app.add_subcommand("report", "Turn an aggregate into plot data");
  cmd_rep->add_option("--in", in_dir, "Directory holding aggregate.csv")->required();
  cmd_rep->add_option("--figure", figure, "latency, availability or qos")
      ->required()
      ->check(CLI::IsMember({"latency", "availability", "qos"}));
  cmd_rep->add_option("--out", out_file, "Output file (default <in>/figure_<figure>.csv)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*cmd_sim) return simulate(sim);
    return report(in_dir, figure, out_file);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
