#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "slicesim/engine/scenario.hpp"
#include "slicesim/metrics/trace.hpp"

namespace slicesim::engine {

struct RunStats {
  std::int64_t intervals = 0;
  std::int64_t wlan_units_allocated = 0;
  std::int64_t fwa_units_allocated = 0;
  /// Largest (allocated - usable) seen in any interval on any hop; <= 0 when
  /// the grids were never oversubscribed.
  std::int64_t max_overallocation = 0;
  std::int64_t work_conservation_violations = 0;
  std::int64_t quota_violations = 0;
  std::int64_t generated = 0;
  std::int64_t delivered = 0;
  std::int64_t dropped_expired = 0;
  std::int64_t lost_retx = 0;
  std::int64_t in_flight = 0;
};

struct TransitionRecord {
  std::uint32_t patient = 0;
  slicing::EventKind kind = slicing::EventKind::Promote;
  SimTime requested;
  std::optional<SimTime> effective;
  std::string rejection;  // empty when accepted
};

struct AllocationRecord {
  SimTime at;
  Hop hop = Hop::Fwa;
  SliceId slice = 0;
  PacketId packet = 0;
  std::int64_t units = 0;
};

struct RunResult {
  metrics::Trace trace;
  RunStats stats;
  std::vector<TransitionRecord> transitions;
  std::vector<AllocationRecord> allocations;  // only with Scenario::record_allocations
};

/// Simulates the station -> access point -> gateway -> gNB uplink cascade.
/// Identical scenarios (including the seed) give identical results.
/// Throws ConfigError if the scenario is invalid.
RunResult run(const Scenario& scenario);

}  // namespace slicesim::engine
