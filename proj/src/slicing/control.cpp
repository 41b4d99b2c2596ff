#include "slicesim/slicing/control.hpp"

namespace slicesim::slicing {

std::string_view to_string(EventKind k) { return k == EventKind::Promote ? "promote" : "demote"; }

EventKind event_kind_from_string(std::string_view s) {
  if (s == "promote" || s == "Promote") return EventKind::Promote;
  if (s == "demote" || s == "Demote") return EventKind::Demote;
  throw ConfigError("unknown slice event kind '" + std::string(s) + "'");
}

int wlan_class_of(SliceType type) {
  switch (type) {
    case SliceType::Emergency: return 0;
    case SliceType::RegularMonitoring: return 1;
    case SliceType::Embb: return 2;
  }
  return 2;
}

ApplyResult apply_event(SliceInstance& slice, const SliceEvent& event, const ActivationProfile& profile) {
  ApplyResult r;
  if (slice.state != SliceState::Active) {
    r.reason = "transition already in flight";
    return r;
  }
  const SliceType needed =
      event.kind == EventKind::Promote ? SliceType::RegularMonitoring : SliceType::Emergency;
  if (slice.current_type != needed) {
    r.reason = std::string(to_string(event.kind)) + " not valid for a " + std::string(to_string(slice.current_type)) +
               " slice";
    return r;
  }
  slice.state = event.kind == EventKind::Promote ? SliceState::Promoting : SliceState::Demoting;
  r.accepted = true;
  r.effective_at = event.at + SimTime::from_ms(profile.activation_delay_ms);
  return r;
}

void complete_transition(SliceInstance& slice, double healthcare_weight) {
  if (slice.state == SliceState::Promoting)
    slice.current_type = SliceType::Emergency;
  else if (slice.state == SliceState::Demoting)
    slice.current_type = SliceType::RegularMonitoring;
  else
    return;
  slice.state = SliceState::Active;
  slice.priority = true;
  slice.weight = healthcare_weight;
}

}  // namespace slicesim::slicing
