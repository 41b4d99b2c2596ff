#pragma once

#include <cstdint>
#include <vector>

#include "slicesim/core/model.hpp"
#include "slicesim/phy/phy.hpp"
#include "slicesim/sched/policy.hpp"
#include "slicesim/slicing/control.hpp"
#include "slicesim/traffic/catalog.hpp"
#include "slicesim/traffic/sources.hpp"

namespace slicesim::engine {

struct Patient {
  std::uint32_t home_rg = 0;
};

struct TrafficConfig {
  traffic::FlowCatalog catalog = traffic::build_catalog();
  traffic::EmbbTrafficModel embb;
  /// Agreed QoS of the background slice. Its rate is per household.
  QoSProfile embb_qos{300, 0, 300, 5'000'000, 0.1};
  bool embb_enabled = true;
  bool healthcare_enabled = true;
  SurvivalRule survival_rule = SurvivalRule::Table;
};

struct Scenario {
  std::int64_t n_rg_total = 88;
  double active_fraction = 0.3;
  std::vector<Patient> patients;
  std::vector<slicing::SliceEvent> events;
  phy::HopConfig wlan;
  phy::HopConfig fwa;
  sched::PolicyConfig policy;
  slicing::ActivationProfile activation;
  TrafficConfig traffic;
  std::int64_t duration_ms = 300'000;
  std::int64_t warmup_ms = 2'000;
  std::uint64_t seed = 1;
  bool record_allocations = false;

  /// round(n_rg_total * active_fraction), raised if needed to cover patient homes.
  std::int64_t active_rg_count() const;
  void validate() const;
};

phy::HopConfig default_wlan_hop();
phy::HopConfig default_fwa_hop();

/// Sector of 88 households, two monitored patients, patient 0 in emergency
/// over [30 s, 90 s).
Scenario case_study_preset();

}  // namespace slicesim::engine
