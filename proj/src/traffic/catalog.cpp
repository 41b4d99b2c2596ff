#include "slicesim/traffic/catalog.hpp"

#include <numeric>
#include <string>

namespace slicesim::traffic {

namespace {

FlowSpec row(std::string name, SliceType type, std::int64_t latency, std::int64_t jitter,
             std::int64_t survival, std::int64_t rate_bps, double delta, std::int64_t period) {
  FlowSpec f;
  f.device_name = std::move(name);
  f.slice_type = type;
  f.qos = QoSProfile{latency, jitter, survival, rate_bps, delta};
  f.packet_period_ms = period;
  return f;
}

std::int64_t total_rate(const std::vector<FlowSpec>& flows) {
  return std::accumulate(flows.begin(), flows.end(), std::int64_t{0},
                         [](std::int64_t acc, const FlowSpec& f) { return acc + f.qos.agg_rate_bps; });
}

}  // namespace

FlowCatalog build_catalog(double delta, std::int64_t period) {
  constexpr auto R = SliceType::RegularMonitoring;
  constexpr auto E = SliceType::Emergency;
  FlowCatalog c;
  // Survival column is kept as tabulated, including EEG at 175 ms.
  c.regular_flows = {
      row("3D camera 1", R, 150, 30, 180, 10'000'000, delta, period),
      row("EEG", R, 250, 25, 175, 1'000'000, delta, period),
  };
  c.emergency_flows = {
      row("3D camera 2", E, 150, 30, 180, 10'000'000, delta, period),
      row("Speaker", E, 150, 25, 175, 220'000, delta, period),
      row("ECG", E, 250, 25, 275, 500'000, delta, period),
      row("EMG", E, 250, 25, 275, 500'000, delta, period),
      row("SpO2", E, 250, 25, 275, 500'000, delta, period),
      row("Temperature", E, 250, 25, 275, 100'000, delta, period),
      row("Blood pressure", E, 250, 25, 275, 100'000, delta, period),
      row("Heart rate", E, 250, 25, 275, 100'000, delta, period),
      row("Respiration rate", E, 250, 25, 275, 100'000, delta, period),
  };
  return c;
}

const FlowSpec& FlowCatalog::find(std::string_view name) const {
  for (const auto* group : {&regular_flows, &emergency_flows})
    for (const auto& f : *group)
      if (f.device_name == name) return f;
  throw ConfigError("no flow named '" + std::string(name) + "' in catalog");
}

std::int64_t FlowCatalog::regular_rate_bps() const { return total_rate(regular_flows); }
std::int64_t FlowCatalog::emergency_rate_bps() const { return total_rate(emergency_flows); }

void FlowCatalog::validate() const {
  if (regular_flows.empty()) throw ConfigError("catalog needs at least one regular flow");
  for (const auto* group : {&regular_flows, &emergency_flows})
    for (const auto& f : *group) f.validate();
}

}  // namespace slicesim::traffic
