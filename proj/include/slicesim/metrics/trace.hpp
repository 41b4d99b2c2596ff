#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "slicesim/core/model.hpp"

namespace slicesim::metrics {

struct FlowInfo {
  std::string name;
  std::int64_t survival_ms = 0;
};

/// Per-packet record of one run. Packet ids index `packets`.
struct Trace {
  std::vector<FlowInfo> flows;  // indexed by Packet::flow_ref
  std::vector<Packet> packets;
  SimTime warmup;
  SimTime horizon;
};

/// Writes the per-packet CSV: packet_id, slice_type, flow, created_us,
/// hop1_delay_us, rg_wait_us, delivered_us|outcome. Hop-1 delay and gateway
/// wait are empty for packets that never reached that stage.
void write_trace_csv(std::ostream& out, const Trace& trace);

/// Reads a CSV written by write_trace_csv. Deadlines are rebuilt from the
/// flow table, which must name every flow in the file.
Trace read_trace_csv(std::istream& in, const std::vector<FlowInfo>& flows, SimTime warmup, SimTime horizon);

}  // namespace slicesim::metrics
