#include "slicesim/sched/scheduler.hpp"

#include <algorithm>
#include <cmath>

#include "slicesim/slicing/control.hpp"

namespace slicesim::sched {

void QuotaBook::reset(std::span<const DemandEstimate> demands, std::span<const std::int64_t> quotas) {
  entries_.clear();
  for (std::size_t i = 0; i < demands.size(); ++i) entries_.push_back(Entry{demands[i].slice, quotas[i], 0, 0});
}

const QuotaBook::Entry* QuotaBook::find(SliceId slice) const {
  for (const auto& e : entries_)
    if (e.slice == slice) return &e;
  return nullptr;
}

QuotaBook::Entry* QuotaBook::find_mut(SliceId slice) {
  for (auto& e : entries_)
    if (e.slice == slice) return &e;
  return nullptr;
}

std::int64_t QuotaBook::remaining(SliceId slice) const {
  const Entry* e = find(slice);
  return e ? std::max<std::int64_t>(e->quota - e->used, 0) : 0;
}

void QuotaBook::consume(SliceId slice, std::int64_t units) {
  if (Entry* e = find_mut(slice)) e->used += units;
}

void QuotaBook::reassign(SliceId slice, std::int64_t units) {
  if (Entry* e = find_mut(slice)) {
    e->reassigned += units;
  } else {
    entries_.push_back(Entry{slice, 0, 0, units});
  }
}

std::int64_t units_needed(std::int64_t remaining_bits, double bits_per_unit) {
  if (remaining_bits <= 0) return 0;
  return std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::ceil(static_cast<double>(remaining_bits) / bits_per_unit - 1e-9)));
}

namespace {

/// Lazy stream view over the per-flow FIFOs of a hop.
class QueueStreams {
public:
  QueueStreams(const std::vector<SliceQueue>& queues, const ResourceGrid& grid, const PolicyConfig& cfg, SimTime now)
      : queues_(queues), grid_(grid), cfg_(cfg), now_(now) {
    const double interval_s = static_cast<double>(grid.interval_ms) / 1e3;
    const auto usable = static_cast<double>(usable_units(grid));
    for (std::size_t q = 0; q < queues.size(); ++q) {
      const SliceQueue& sq = queues[q];
      const double bpu = bits_per_unit(sq.link, grid);
      const double rate_ratio = bpu * usable / interval_s / std::max(sq.link.avg_rate_bps, kAvgRateFloorBps);
      for (std::size_t f = 0; f < sq.flows.size(); ++f) {
        if (sq.flows[f].packets.empty()) continue;
        refs_.push_back(Ref{q, f, bpu, rate_ratio});
        infos_.push_back(StreamInfo{sq.slice, slicing::wlan_class_of(sq.type), sq.priority});
      }
    }
  }

  std::size_t size() const { return refs_.size(); }
  const StreamInfo& info(std::size_t s) const { return infos_[s]; }
  const auto& ref(std::size_t s) const { return refs_[s]; }

  std::optional<StreamPacket> packet(std::size_t s, std::size_t k) const {
    const Ref& r = refs_[s];
    const SliceQueue& sq = queues_[r.queue];
    const FlowQueue& fq = sq.flows[r.flow];
    if (k >= fq.packets.size()) return std::nullopt;
    const QueuedPacket& p = fq.packets[k];
    StreamPacket out{p.id, 0.0, units_needed(p.remaining_bits, r.bits_per_unit)};
    if (cfg_.policy == Policy::Basic || fq.qos == nullptr) {
      out.metric = r.rate_ratio;  // r / R̄
    } else {
      const bool e2e_view = cfg_.cross_hop_reporting;
      const SimTime since = e2e_view ? p.created_at : p.hop_arrival;
      const SimTime upstream = e2e_view ? p.upstream_delay : SimTime{};
      const double tau = remaining_budget_s(*fq.qos, upstream);
      out.metric = sq.weight * mlwdf_metric(*fq.qos, (now_ - since).seconds(), tau, r.rate_ratio);
    }
    return out;
  }

private:
  struct Ref {
    std::size_t queue;
    std::size_t flow;
    double bits_per_unit;
    double rate_ratio;
  };
  const std::vector<SliceQueue>& queues_;
  const ResourceGrid& grid_;
  const PolicyConfig& cfg_;
  SimTime now_;
  std::vector<Ref> refs_;
  std::vector<StreamInfo> infos_;
};

}  // namespace

std::vector<HopAllocation> schedule_interval(const std::vector<SliceQueue>& queues, const ResourceGrid& grid,
                                             const PolicyConfig& cfg, SimTime now, QuotaBook* quotas) {
  QueueStreams streams(queues, grid, cfg, now);
  const auto plan = cfg.policy == Policy::Elastic ? AllocationPlan::Elastic : AllocationPlan::Single;
  const auto grants = allocate_units(streams, usable_units(grid), plan, quotas);
  std::vector<HopAllocation> out;
  out.reserve(grants.size());
  for (const auto& g : grants) {
    const auto& r = streams.ref(g.stream);
    out.push_back(HopAllocation{r.queue, r.flow, g.position, g.packet, g.units});
  }
  return out;
}

}  // namespace slicesim::sched
