#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "slicesim/core/model.hpp"
#include "slicesim/sched/queue.hpp"

namespace slicesim::sched {

struct DemandEstimate {
  SliceId slice = 0;
  SliceType type = SliceType::Embb;
  std::int64_t requested_units = 0;  // over one window T
};

/// Units a slice asks for in the next window: enough for its queued backlog
/// or for its agreed rate over the window, whichever is larger.
DemandEstimate estimate_demand(SliceId slice, SliceType type, std::int64_t agg_rate_bps,
                               std::int64_t backlog_bits, double mean_bits_per_unit, SimTime window);

/// Window quotas. Under load every slice gets what it asked for; otherwise
/// quotas are scaled by available/requested, floored, and the leftover units
/// go one at a time by largest fractional part (healthcare before eMBB, then
/// lower slice id). Result is index-aligned with `demands`.
std::vector<std::int64_t> elastic_scale(std::span<const DemandEstimate> demands, std::int64_t available_units);

struct PriorityPartition {
  std::vector<SliceId> priority;     // Emergency slices, then RegularMonitoring
  std::vector<SliceId> nonpriority;  // eMBB
};

PriorityPartition partition_priority(std::span<const SliceInstance> slices);

/// Removes every packet whose deadline is before `now`, keeping order.
/// Returns the removed packets.
std::vector<QueuedPacket> drop_expired(FlowQueue& queue, SimTime now);
std::vector<QueuedPacket> drop_expired(SliceQueue& queue, SimTime now);

}  // namespace slicesim::sched
