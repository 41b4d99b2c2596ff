#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "slicesim/core/model.hpp"

namespace slicesim::slicing {

enum class EventKind : std::uint8_t { Promote, Demote };

std::string_view to_string(EventKind k);
EventKind event_kind_from_string(std::string_view s);

struct SliceEvent {
  SimTime at;
  EventKind kind = EventKind::Promote;
  std::uint32_t patient = 0;
};

struct ActivationProfile {
  std::int64_t activation_delay_ms = 50;  // one-shot reconfiguration delay
};

/// WLAN service class of a slice type; 0 is served first.
int wlan_class_of(SliceType type);

struct ApplyResult {
  bool accepted = false;
  SimTime effective_at;
  std::string reason;  // set when rejected
};

/// Starts a type change. Promote is valid only from RegularMonitoring and
/// Demote only from Emergency, with no other change in flight. On success
/// the slice is Promoting/Demoting until `complete_transition` runs at the
/// effective time.
ApplyResult apply_event(SliceInstance& slice, const SliceEvent& event, const ActivationProfile& profile);

/// Finishes the pending change: new type, priority and weight take effect together.
void complete_transition(SliceInstance& slice, double healthcare_weight);

}  // namespace slicesim::slicing
