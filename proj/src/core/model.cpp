#include "slicesim/core/model.hpp"

#include <cmath>

namespace slicesim {

std::string_view to_string(SliceType t) {
  switch (t) {
    case SliceType::Embb: return "eMBB";
    case SliceType::RegularMonitoring: return "RegularMonitoring";
    case SliceType::Emergency: return "Emergency";
  }
  return "?";
}

SliceType slice_type_from_string(std::string_view s) {
  if (s == "eMBB" || s == "Embb" || s == "embb") return SliceType::Embb;
  if (s == "RegularMonitoring" || s == "regular") return SliceType::RegularMonitoring;
  if (s == "Emergency" || s == "emergency") return SliceType::Emergency;
  throw ConfigError("unknown slice type '" + std::string(s) + "'");
}

std::string_view to_string(PacketOutcome o) {
  switch (o) {
    case PacketOutcome::InFlight: return "in-flight";
    case PacketOutcome::Delivered: return "delivered";
    case PacketOutcome::DroppedExpired: return "dropped-expired";
    case PacketOutcome::LostRetx: return "lost-retx";
  }
  return "?";
}

std::string_view to_string(Hop h) { return h == Hop::Wlan ? "wlan" : "fwa"; }

void QoSProfile::validate() const {
  if (e2e_latency_budget_ms <= 0 || jitter_budget_ms < 0 || survival_time_ms <= 0 ||
      agg_rate_bps < 0)
    throw ConfigError("QoS profile budgets must be positive");
  if (!(drop_prob_target > 0.0 && drop_prob_target < 1.0))
    throw ConfigError("drop probability target must lie in (0,1)");
}

void FlowSpec::validate() const {
  qos.validate();
  if (packet_period_ms <= 0 || 1000 % packet_period_ms != 0)
    throw ConfigError("flow '" + device_name + "': packet period must divide 1000 ms");
  if (packet_size_bits() * (1000 / packet_period_ms) != qos.agg_rate_bps)
    throw ConfigError("flow '" + device_name + "': rate not an integer number of bits per packet");
}

std::int64_t survival_ms(const QoSProfile& qos, SurvivalRule rule) {
  return rule == SurvivalRule::Table ? qos.survival_time_ms
                                     : qos.e2e_latency_budget_ms + qos.jitter_budget_ms;
}

SimTime deadline_of(SimTime created_at, const QoSProfile& qos, SurvivalRule rule) {
  return created_at + SimTime::from_ms(survival_ms(qos, rule));
}

void ResourceGrid::validate() const {
  if (interval_ms <= 0) throw ConfigError("grid interval must be positive");
  if (units_per_interval <= 0) throw ConfigError("grid must offer at least one unit");
  if (symbols_per_unit <= 0) throw ConfigError("symbols per unit must be positive");
  if (!(legacy_reserved_fraction >= 0.0 && legacy_reserved_fraction < 1.0))
    throw ConfigError("legacy reservation must lie in [0,1)");
}

std::int64_t usable_units(const ResourceGrid& grid) {
  // Fractions such as 0.3 are not exact in binary; the epsilon keeps 100*0.7 at 70.
  double usable = static_cast<double>(grid.units_per_interval) * (1.0 - grid.legacy_reserved_fraction);
  return static_cast<std::int64_t>(std::floor(usable + 1e-9));
}

}  // namespace slicesim
