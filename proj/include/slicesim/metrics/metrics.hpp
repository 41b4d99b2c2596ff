#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include "slicesim/core/model.hpp"
#include "slicesim/metrics/trace.hpp"

namespace slicesim::metrics {

/// Set of slice types pooled into one metric.
class SliceFilter {
public:
  SliceFilter(std::initializer_list<SliceType> types) {
    for (SliceType t : types) mask_ |= bit(t);
  }
  static SliceFilter healthcare() { return {SliceType::RegularMonitoring, SliceType::Emergency}; }
  bool contains(SliceType t) const { return (mask_ & bit(t)) != 0; }

private:
  static unsigned bit(SliceType t) { return 1u << static_cast<unsigned>(t); }
  unsigned mask_ = 0;
};

struct LatencyStats {
  double mean_ms = 0.0;
  double p95_ms = 0.0;  // nearest rank
  std::int64_t count = 0;
  std::int64_t dropped = 0;  // dropped-expired, not in the latency figures
  std::int64_t lost = 0;     // lost after retransmissions
};

/// End-to-end latency of delivered packets created after the warm-up.
/// Empty when none of them was delivered.
std::optional<LatencyStats> e2e_latency_stats(const Trace& trace, SliceFilter slices);

/// Packets that count towards QoS and availability: created after the
/// warm-up, with a deadline before the end of the run.
bool measured(const Trace& trace, const Packet& p);

bool met_deadline(const Packet& p);

/// Availability windows of `window` length tiling [warm-up, horizon).
/// Only windows in which at least one measured packet is due count; a window
/// is unavailable if any of those packets missed its deadline.
struct AvailabilityResult {
  std::int64_t windows = 0;
  std::int64_t violated = 0;
  /// available / windows; empty when no packet was due in any window.
  std::optional<double> value() const;
};

AvailabilityResult availability(const Trace& trace, SliceFilter slices, SimTime window = SimTime::from_s(1));

/// Fraction of runs whose availability is strictly above `threshold`.
/// Runs without a value are skipped; empty if none is left.
std::optional<double> prob_availability_above(std::span<const std::optional<double>> per_run,
                                              double threshold = 0.99);

/// Delivered-within-deadline packets over measured packets; empty when no
/// packet was measured.
std::optional<double> qos_met_fraction(const Trace& trace, SliceFilter slices);

struct Summary {
  double mean = 0.0;
  double ci95 = 0.0;  // half-width, normal approximation
  std::int64_t n = 0;
};

/// Mean and 95% confidence half-width of the present values.
Summary summarize(std::span<const std::optional<double>> values);

}  // namespace slicesim::metrics
