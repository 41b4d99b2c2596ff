#pragma once

#include <cstdint>
#include <queue>
#include <vector>

#include "slicesim/core/model.hpp"

namespace slicesim::engine {

enum class EventType : std::uint8_t { SliceEffective, SliceRequest, Arrival, Tick, End };

struct Event {
  SimTime at;
  EventType type = EventType::Tick;
  std::uint32_t target = 0;      // source, patient or event index
  std::uint32_t generation = 0;  // invalidates arrivals of stopped sources
  std::uint64_t seq = 0;         // insertion order
};

/// Time-ordered event heap. Events at the same instant are ordered by
/// phase (slice changes, then arrivals, then scheduling ticks, then the end
/// marker) and by insertion order within a phase.
class EventQueue {
public:
  void push(Event e) {
    e.seq = next_seq_++;
    heap_.push(e);
  }
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  const Event& top() const { return heap_.top(); }
  Event pop() {
    Event e = heap_.top();
    heap_.pop();
    return e;
  }

private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.at != b.at) return a.at > b.at;
      if (a.type != b.type) return a.type > b.type;
      return a.seq > b.seq;
    }
  };
  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  std::uint64_t next_seq_ = 0;
};

}  // namespace slicesim::engine
