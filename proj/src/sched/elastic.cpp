#include "slicesim/sched/elastic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace slicesim::sched {

std::int64_t SliceQueue::backlog_bits() const {
  std::int64_t sum = 0;
  for (const auto& fq : flows)
    for (const auto& p : fq.packets) sum += p.remaining_bits;
  return sum;
}

std::size_t SliceQueue::size() const {
  std::size_t n = 0;
  for (const auto& fq : flows) n += fq.packets.size();
  return n;
}

BufferStatus report_buffer_status(const SliceQueue& queue, SimTime now) {
  BufferStatus bs;
  bool any = false;
  SimTime oldest;
  for (const auto& fq : queue.flows) {
    if (fq.packets.empty()) continue;
    const SimTime arrival = fq.packets.front().hop_arrival;
    if (!any || arrival < oldest) oldest = arrival;
    any = true;
  }
  bs.queued_bits = queue.backlog_bits();
  if (any) bs.hol_delay = now - oldest;
  return bs;
}

DemandEstimate estimate_demand(SliceId slice, SliceType type, std::int64_t agg_rate_bps, std::int64_t backlog_bits,
                               double mean_bits_per_unit, SimTime window) {
  DemandEstimate d{slice, type, 0};
  const std::int64_t rate_bits = agg_rate_bps * window.us() / 1'000'000;
  const std::int64_t wanted = std::max(backlog_bits, rate_bits);
  if (wanted <= 0 || mean_bits_per_unit <= 0.0) return d;
  d.requested_units = static_cast<std::int64_t>(std::ceil(static_cast<double>(wanted) / mean_bits_per_unit - 1e-9));
  return d;
}

std::vector<std::int64_t> elastic_scale(std::span<const DemandEstimate> demands, std::int64_t available) {
  std::vector<std::int64_t> quota(demands.size(), 0);
  std::int64_t total = 0;
  for (const auto& d : demands) total += d.requested_units;
  if (total <= available) {
    for (std::size_t i = 0; i < demands.size(); ++i) quota[i] = demands[i].requested_units;
    return quota;
  }

  std::vector<std::int64_t> frac(demands.size(), 0);  // numerators over `total`
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < demands.size(); ++i) {
    const __int128 num = static_cast<__int128>(demands[i].requested_units) * available;
    quota[i] = static_cast<std::int64_t>(num / total);
    frac[i] = static_cast<std::int64_t>(num % total);
    assigned += quota[i];
  }

  std::vector<std::size_t> order(demands.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (frac[a] != frac[b]) return frac[a] > frac[b];
    const bool ha = is_healthcare(demands[a].type), hb = is_healthcare(demands[b].type);
    if (ha != hb) return ha;
    return demands[a].slice < demands[b].slice;
  });
  for (std::size_t k = 0; assigned < available && k < order.size(); ++k, ++assigned) ++quota[order[k]];
  return quota;
}

PriorityPartition partition_priority(std::span<const SliceInstance> slices) {
  PriorityPartition out;
  for (SliceType t : {SliceType::Emergency, SliceType::RegularMonitoring})
    for (const auto& s : slices)
      if (s.current_type == t) out.priority.push_back(s.id);
  for (const auto& s : slices)
    if (s.current_type == SliceType::Embb) out.nonpriority.push_back(s.id);
  return out;
}

std::vector<QueuedPacket> drop_expired(FlowQueue& queue, SimTime now) {
  std::vector<QueuedPacket> dropped;
  auto keep = std::stable_partition(queue.packets.begin(), queue.packets.end(),
                                    [&](const QueuedPacket& p) { return !(now > p.deadline); });
  dropped.assign(keep, queue.packets.end());
  queue.packets.erase(keep, queue.packets.end());
  return dropped;
}

std::vector<QueuedPacket> drop_expired(SliceQueue& queue, SimTime now) {
  std::vector<QueuedPacket> dropped;
  for (auto& fq : queue.flows) {
    // Deadlines are FIFO-ordered within a flow, so a clean head means a clean flow.
    if (fq.packets.empty()) continue;
    if (fq.qos != nullptr && !(now > fq.packets.front().deadline)) continue;
    auto d = drop_expired(fq, now);
    dropped.insert(dropped.end(), d.begin(), d.end());
  }
  return dropped;
}

}  // namespace slicesim::sched
