#include "slicesim/sched/policy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace slicesim::sched {

std::string_view to_string(Policy p) {
  switch (p) {
    case Policy::Basic: return "Basic";
    case Policy::E2E: return "E2E";
    case Policy::Elastic: return "Elastic";
  }
  return "?";
}

Policy policy_from_string(std::string_view s) {
  if (s == "Basic" || s == "basic") return Policy::Basic;
  if (s == "E2E" || s == "e2e") return Policy::E2E;
  if (s == "Elastic" || s == "elastic") return Policy::Elastic;
  throw ConfigError("unknown policy '" + std::string(s) + "'");
}

void PolicyConfig::validate(std::int64_t interval_ms) const {
  if (window_ms <= 0 || interval_ms <= 0 || window_ms % interval_ms != 0)
    throw ConfigError("window T must be a positive multiple of the scheduling interval");
  if (!(alpha > 0.0 && beta > 0.0)) throw ConfigError("alpha and beta must be positive");
  if (!(ewma_factor > 0.0 && ewma_factor < 1.0)) throw ConfigError("ewma factor must lie in (0,1)");
}

double pf_metric(double achievable_rate_bps, const LinkState& link) {
  return achievable_rate_bps / std::max(link.avg_rate_bps, kAvgRateFloorBps);
}

double mlwdf_coefficient(double drop_prob_target, double tau_s) { return -std::log(drop_prob_target) / tau_s; }

double mlwdf_metric(const QoSProfile& qos, double hol_delay_s, double tau_s, double rate_ratio) {
  return mlwdf_coefficient(qos.drop_prob_target, tau_s) * hol_delay_s * rate_ratio;
}

double remaining_budget_s(const QoSProfile& qos, SimTime upstream_delay) {
  const double left_ms = static_cast<double>(qos.e2e_latency_budget_ms) - upstream_delay.ms();
  return std::max(left_ms, 1.0) / 1e3;
}

LinkState update_avg_rate(LinkState link, std::int64_t served_bits, SimTime interval, double f) {
  const double inst = static_cast<double>(served_bits) / interval.seconds();
  link.avg_rate_bps = std::max((1.0 - f) * link.avg_rate_bps + f * inst, kAvgRateFloorBps);
  return link;
}

}  // namespace slicesim::sched
