#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "slicesim/core/model.hpp"

namespace slicesim::sched {

struct QueuedPacket {
  PacketId id = 0;
  SimTime created_at;
  SimTime deadline;
  SimTime hop_arrival;     // when the packet reached this node
  SimTime upstream_delay;  // delay accumulated before this node (hop 1 at the gateway)
  std::int64_t remaining_bits = 0;
  int failures = 0;        // failed attempts of the block in progress
};

/// FIFO of one flow at one node. Packets of a flow share a QoS profile, so
/// FIFO order is also delay order and deadline order.
struct FlowQueue {
  FlowId flow = 0;
  const QoSProfile* qos = nullptr;  // null for pooled (unsliced) queues
  std::deque<QueuedPacket> packets;
};

/// Queue of one slice at one transmitting device, split per flow.
struct SliceQueue {
  SliceId slice = 0;
  SliceType type = SliceType::Embb;
  double weight = 1.0;
  bool priority = false;
  LinkState link;  // device efficiency and the queue's averaged served rate
  std::vector<FlowQueue> flows;

  std::int64_t backlog_bits() const;
  std::size_t size() const;
  bool empty() const { return size() == 0; }
};

struct BufferStatus {
  std::int64_t queued_bits = 0;
  SimTime hol_delay;  // oldest queued packet's time at the device
};

/// Buffer status report a station sends to the gateway each interval.
BufferStatus report_buffer_status(const SliceQueue& queue, SimTime now);

}  // namespace slicesim::sched
