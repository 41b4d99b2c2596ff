#pragma once

#include <string_view>
#include <vector>

#include "slicesim/core/model.hpp"

namespace slicesim::traffic {

/// Healthcare monitoring flows of one patient.
///
/// The regular group runs for the whole lifetime of the patient's slice; the
/// emergency group holds the additional devices switched on while the slice
/// is promoted.
struct FlowCatalog {
  std::vector<FlowSpec> regular_flows;
  std::vector<FlowSpec> emergency_flows;

  const FlowSpec& find(std::string_view device_name) const;
  std::int64_t regular_rate_bps() const;
  std::int64_t emergency_rate_bps() const;
  void validate() const;
};

/// Monitoring device requirements: latency, jitter, survival and aggregated
/// rate per device, packetized every `packet_period_ms`.
FlowCatalog build_catalog(double healthcare_drop_target = 0.01, std::int64_t packet_period_ms = 10);

}  // namespace slicesim::traffic
