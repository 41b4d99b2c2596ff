#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "slicesim/engine/simulator.hpp"
#include "slicesim/metrics/metrics.hpp"

namespace slicesim::experiment {

struct SweepSpec {
  engine::Scenario base;
  std::vector<double> load_points;  // active RG fractions
  std::vector<sched::Policy> policies;
  std::vector<std::uint64_t> seeds;

  void validate() const;
};

/// Load points 0.10, 0.15, ..., 1.00.
std::vector<double> fine_load_sweep();

struct RunKey {
  sched::Policy policy = sched::Policy::Elastic;
  double load = 0.0;
  std::uint64_t seed = 0;
};

/// Slice groups reported in the aggregate; Healthcare pools the two
/// healthcare types.
enum class SliceGroup : std::uint8_t { Embb, RegularMonitoring, Emergency, Healthcare };

inline constexpr SliceGroup kSliceGroups[] = {SliceGroup::Embb, SliceGroup::RegularMonitoring,
                                              SliceGroup::Emergency, SliceGroup::Healthcare};

std::string_view to_string(SliceGroup g);
SliceGroup slice_group_from_string(std::string_view s);
metrics::SliceFilter filter_of(SliceGroup g);

struct GroupMetrics {
  std::optional<metrics::LatencyStats> latency;
  std::optional<double> availability;
  std::optional<double> qos_met;
};

struct RunMetrics {
  RunKey key;
  engine::RunStats stats;
  GroupMetrics groups[4];  // indexed by SliceGroup

  const GroupMetrics& group(SliceGroup g) const { return groups[static_cast<int>(g)]; }
};

RunMetrics compute_run_metrics(const RunKey& key, const engine::RunResult& result,
                               SimTime availability_window = SimTime::from_s(1));

/// One aggregate CSV row: a (policy, load, slice group) cell over all seeds.
struct AggregateRow {
  sched::Policy policy = sched::Policy::Elastic;
  double active_fraction = 0.0;
  SliceGroup slice = SliceGroup::Embb;
  std::optional<double> mean_latency_ms;
  std::optional<double> pr_A_gt_099;
  std::optional<double> qos_met;
  std::int64_t seeds = 0;
  double ci95 = 0.0;  // of qos_met
  double latency_ci95_ms = 0.0;
  double pr_A_ci95 = 0.0;
};

std::vector<AggregateRow> aggregate(const std::vector<RunMetrics>& runs);

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows);
std::vector<AggregateRow> read_aggregate_csv(std::istream& in);

struct SweepOptions {
  std::optional<std::filesystem::path> out_dir;  // aggregate.csv and traces/ go here
  bool write_traces = true;
  /// 0 picks SLICESIM_WORKERS or the hardware concurrency.
  unsigned workers = 0;
  /// Called once per run, one call at a time, before the trace is released.
  std::function<void(const RunKey&, const engine::RunResult&)> on_run;
};

struct SweepFailure {
  RunKey key;
  std::string message;
};

struct SweepResult {
  std::vector<RunMetrics> runs;  // ordered by (policy, load, seed) in the order given by `spec`
  std::vector<AggregateRow> rows;
  std::vector<SweepFailure> failures;
};

/// Runs every (policy, load, seed) combination. Results do not depend on
/// the worker count.
SweepResult run_sweep(const SweepSpec& spec, const SweepOptions& options = {});

/// Scenario of one sweep cell.
engine::Scenario scenario_for(const SweepSpec& spec, const RunKey& key);

std::string trace_file_name(const RunKey& key);

enum class Figure : std::uint8_t { Latency, Availability, Qos };

Figure figure_from_string(std::string_view s);

/// Long-format plot data: policy, active_fraction, slice_type, value, ci95.
/// Every policy x load combination present in `rows` must have all the
/// figure's slice rows, otherwise ConfigError lists the missing cells.
/// Rows without a value (for instance no emergency traffic) are left out
/// with a note on `warnings`.
void emit_figure_data(const std::vector<AggregateRow>& rows, Figure figure, std::ostream& out,
                      std::ostream& warnings);

std::string format_load(double load);

}  // namespace slicesim::experiment
