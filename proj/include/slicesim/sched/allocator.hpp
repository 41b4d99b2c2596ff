#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <vector>

#include "slicesim/core/model.hpp"
#include "slicesim/sched/elastic.hpp"

namespace slicesim::sched {

/// A packet as the allocator sees it.
struct StreamPacket {
  PacketId id = 0;
  double metric = 0.0;
  std::int64_t units_needed = 0;
};

/// A stream is a sequence of packets that must be served in order (one
/// flow's FIFO). `rank` orders streams ahead of the metric: 0 for the most
/// important class. Only the Elastic plan uses ranks and priority.
struct StreamInfo {
  SliceId slice = 0;
  int rank = 0;
  bool priority = false;
};

struct UnitGrant {
  std::size_t stream = 0;
  std::size_t position = 0;  // index of the packet within its stream
  PacketId packet = 0;
  std::int64_t units = 0;
};

/// Remaining per-slice units of the current window T.
class QuotaBook {
public:
  struct Entry {
    SliceId slice = 0;
    std::int64_t quota = 0;
    std::int64_t used = 0;        // consumed within quota
    std::int64_t reassigned = 0;  // taken from units nobody could use within quota
  };

  void reset(std::span<const DemandEstimate> demands, std::span<const std::int64_t> quotas);
  std::int64_t remaining(SliceId slice) const;
  void consume(SliceId slice, std::int64_t units);
  void reassign(SliceId slice, std::int64_t units);
  const std::vector<Entry>& entries() const { return entries_; }
  const Entry* find(SliceId slice) const;

private:
  Entry* find_mut(SliceId slice);
  std::vector<Entry> entries_;
};

enum class AllocationPlan : std::uint8_t {
  Single,   // one uncapped pass over every stream, ordered by metric
  Elastic,  // priority pass within quota, non-priority pass within quota,
            // then leftover units to anyone (priority first)
};

/// Owning stream set; convenient for tests and small instances.
struct VectorStreams {
  std::vector<StreamInfo> infos;
  std::vector<std::vector<StreamPacket>> packets;

  std::size_t size() const { return infos.size(); }
  const StreamInfo& info(std::size_t s) const { return infos[s]; }
  std::optional<StreamPacket> packet(std::size_t s, std::size_t k) const {
    if (k >= packets[s].size()) return std::nullopt;
    return packets[s][k];
  }
};

/// Greedy unit allocation: repeatedly give units to the best head-of-stream
/// packet, by (rank, metric descending, packet id), until the budget or the
/// candidates run out. `Streams` provides size(), info(s) and packet(s, k).
template <class Streams>
std::vector<UnitGrant> allocate_units(const Streams& streams, std::int64_t budget, AllocationPlan plan,
                                      QuotaBook* quotas) {
  struct Key {
    int rank;
    double metric;
    PacketId id;
    std::size_t stream;
  };
  struct Worse {
    bool operator()(const Key& a, const Key& b) const {
      if (a.rank != b.rank) return a.rank > b.rank;
      if (a.metric != b.metric) return a.metric < b.metric;
      if (a.id != b.id) return a.id > b.id;
      return a.stream > b.stream;
    }
  };

  const std::size_t n = streams.size();
  std::vector<std::size_t> pos(n, 0);
  std::vector<std::int64_t> given(n, 0);
  std::vector<std::optional<StreamPacket>> head(n);
  std::vector<std::size_t> last_grant(n, std::numeric_limits<std::size_t>::max());
  std::vector<UnitGrant> grants;
  for (std::size_t s = 0; s < n; ++s) head[s] = streams.packet(s, 0);

  enum class Cap { None, Quota };
  auto run_pass = [&](auto&& eligible, Cap cap, bool rank_order) {
    std::priority_queue<Key, std::vector<Key>, Worse> heap;
    auto push = [&](std::size_t s) {
      const auto& info = streams.info(s);
      heap.push(Key{rank_order ? info.rank : 0, head[s]->metric, head[s]->id, s});
    };
    for (std::size_t s = 0; s < n; ++s)
      if (head[s] && eligible(s)) push(s);

    while (budget > 0 && !heap.empty()) {
      const std::size_t s = heap.top().stream;
      heap.pop();
      const SliceId slice = streams.info(s).slice;
      std::int64_t grant = std::min(head[s]->units_needed - given[s], budget);
      if (cap == Cap::Quota) grant = std::min(grant, quotas ? quotas->remaining(slice) : 0);
      if (grant <= 0) continue;  // quota exhausted: out of this pass

      if (last_grant[s] < grants.size() && grants[last_grant[s]].position == pos[s]) {
        grants[last_grant[s]].units += grant;
      } else {
        last_grant[s] = grants.size();
        grants.push_back(UnitGrant{s, pos[s], head[s]->id, grant});
      }
      budget -= grant;
      given[s] += grant;
      if (quotas) {
        if (cap == Cap::Quota)
          quotas->consume(slice, grant);
        else if (plan == AllocationPlan::Elastic)
          quotas->reassign(slice, grant);
      }
      if (given[s] >= head[s]->units_needed) {
        ++pos[s];
        given[s] = 0;
        head[s] = streams.packet(s, pos[s]);
        if (head[s]) push(s);
      }
      // Otherwise the budget or the slice quota ran out; either way the
      // stream is done for this pass.
    }
  };

  if (plan == AllocationPlan::Single) {
    run_pass([](std::size_t) { return true; }, Cap::None, false);
  } else {
    run_pass([&](std::size_t s) { return streams.info(s).priority; }, Cap::Quota, true);
    run_pass([&](std::size_t s) { return !streams.info(s).priority; }, Cap::Quota, true);
    run_pass([](std::size_t) { return true; }, Cap::None, true);
  }
  return grants;
}

}  // namespace slicesim::sched
