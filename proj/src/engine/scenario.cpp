#include "slicesim/engine/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace slicesim::engine {

phy::HopConfig default_wlan_hop() {
  phy::HopConfig h;
  h.grid = ResourceGrid{Hop::Wlan, 1, 100, 0.30, 300};
  h.channel = phy::ChannelModel{3.0, 0.5, 0.5, 8.0, 100};
  h.target_bler = 0.1;
  h.max_retx = 8;
  h.access_delay_ms = 1;
  return h;
}

phy::HopConfig default_fwa_hop() {
  phy::HopConfig h;
  // 100 resource blocks x 16 spatial layers per 1 ms interval
  h.grid = ResourceGrid{Hop::Fwa, 1, 1600, 0.0, 60};
  h.channel = phy::ChannelModel{4.0, 0.5, 0.5, 8.0, 100};
  h.target_bler = 0.01;
  h.max_retx = 8;
  h.access_delay_ms = 0;
  return h;
}

std::int64_t Scenario::active_rg_count() const {
  auto n = static_cast<std::int64_t>(std::llround(static_cast<double>(n_rg_total) * active_fraction));
  for (const auto& p : patients) n = std::max<std::int64_t>(n, p.home_rg + 1);
  return n;
}

void Scenario::validate() const {
  if (n_rg_total <= 0) throw ConfigError("sector needs at least one gateway");
  if (!(active_fraction >= 0.0 && active_fraction <= 1.0)) throw ConfigError("active fraction must lie in [0,1]");
  if (duration_ms <= 0 || warmup_ms < 0 || warmup_ms >= duration_ms)
    throw ConfigError("duration must be positive and longer than the warm-up");
  wlan.validate();
  fwa.validate();
  if (wlan.grid.hop != Hop::Wlan || fwa.grid.hop != Hop::Fwa) throw ConfigError("hop grids are swapped");
  if (wlan.grid.interval_ms != fwa.grid.interval_ms) throw ConfigError("hop intervals must be aligned");
  if (fwa.grid.legacy_reserved_fraction != 0.0) throw ConfigError("the FWA grid has no legacy reservation");
  if (wlan.target_bler < fwa.target_bler) throw ConfigError("WLAN target BLER must not be below the FWA one");
  policy.validate(fwa.grid.interval_ms);
  traffic.catalog.validate();
  traffic.embb.validate();
  traffic.embb_qos.validate();

  for (std::size_t i = 0; i < patients.size(); ++i) {
    if (patients[i].home_rg >= n_rg_total) throw ConfigError("patient home gateway out of range");
    for (std::size_t j = 0; j < i; ++j)
      if (patients[j].home_rg == patients[i].home_rg) throw ConfigError("two patients share a gateway");
  }
  for (const auto& e : events) {
    if (e.patient >= patients.size())
      throw ConfigError("slice event refers to unknown patient " + std::to_string(e.patient));
    if (e.at.us() < 0) throw ConfigError("slice event before simulation start");
  }
  if (activation.activation_delay_ms < 0) throw ConfigError("activation delay must be non-negative");
}

Scenario case_study_preset() {
  Scenario s;
  s.patients = {Patient{0}, Patient{1}};
  s.events = {
      slicing::SliceEvent{SimTime::from_s(30), slicing::EventKind::Promote, 0},
      slicing::SliceEvent{SimTime::from_s(90), slicing::EventKind::Demote, 0},
  };
  s.wlan = default_wlan_hop();
  s.fwa = default_fwa_hop();
  return s;
}

}  // namespace slicesim::engine
