#pragma once

#include <cstdint>
#include <string_view>

#include "slicesim/core/model.hpp"

namespace slicesim::sched {

enum class Policy : std::uint8_t {
  Basic,    // no slicing, proportional fair everywhere
  E2E,      // per-slice queues, M-LWDF, no quotas/priority/drops
  Elastic,  // demand estimation, proportional scaling, priority passes, expiry drops
};

std::string_view to_string(Policy p);
Policy policy_from_string(std::string_view s);

struct PolicyConfig {
  Policy policy = Policy::Elastic;
  std::int64_t window_ms = 100;  // demand/quota window T
  double alpha = 1.0;            // eMBB weight
  double beta = 2.0;             // healthcare weight
  double ewma_factor = 0.01;     // per-interval smoothing of the served rate
  bool cross_hop_reporting = true;

  double weight_of(SliceType t) const { return is_healthcare(t) ? beta : alpha; }
  void validate(std::int64_t interval_ms) const;
};

/// Proportional fair metric r / R̄.
double pf_metric(double achievable_rate_bps, const LinkState& link);

/// M-LWDF coefficient a = -ln(delta) / tau.
double mlwdf_coefficient(double drop_prob_target, double tau_s);

/// M-LWDF metric a * W * r / R̄. `rate_ratio` is r / R̄; tau is the delay
/// budget still available to the packet.
double mlwdf_metric(const QoSProfile& qos, double hol_delay_s, double tau_s, double rate_ratio);

/// Delay budget left for M-LWDF: end-to-end budget minus delay already
/// spent upstream, never below one millisecond.
double remaining_budget_s(const QoSProfile& qos, SimTime upstream_delay);

/// R̄ <- (1-f) R̄ + f * served/interval, floored.
LinkState update_avg_rate(LinkState link, std::int64_t served_bits, SimTime interval, double ewma_factor);

}  // namespace slicesim::sched
