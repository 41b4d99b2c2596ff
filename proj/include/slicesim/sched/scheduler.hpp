#pragma once

#include <cstdint>
#include <vector>

#include "slicesim/core/model.hpp"
#include "slicesim/sched/allocator.hpp"
#include "slicesim/sched/policy.hpp"
#include "slicesim/sched/queue.hpp"

namespace slicesim::sched {

struct HopAllocation {
  std::size_t queue = 0;
  std::size_t flow = 0;      // index into SliceQueue::flows
  std::size_t position = 0;  // index into the flow FIFO at decision time
  PacketId packet = 0;
  std::int64_t units = 0;
};

/// Units a packet of `remaining_bits` needs on a link.
std::int64_t units_needed(std::int64_t remaining_bits, double bits_per_unit);

/// One scheduling decision for one hop.
///
/// Basic ranks packets by the PF metric of their queue; E2E and Elastic use
/// the weighted M-LWDF metric of each flow's head packet. Elastic also serves
/// priority slices first and caps every slice by its remaining window quota
/// (see allocate_units). Expired-packet drops are the caller's job and must
/// happen before this call. Queues are not modified.
std::vector<HopAllocation> schedule_interval(const std::vector<SliceQueue>& queues, const ResourceGrid& grid,
                                             const PolicyConfig& cfg, SimTime now, QuotaBook* quotas);

}  // namespace slicesim::sched
