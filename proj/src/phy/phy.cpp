#include "slicesim/phy/phy.hpp"

#include <algorithm>
#include <cmath>

namespace slicesim::phy {

void ChannelModel::validate() const {
  if (!(mean_efficiency > 0.0) || sigma < 0.0) throw ConfigError("channel mean must be positive");
  if (!(min_efficiency > 0.0) || max_efficiency < min_efficiency)
    throw ConfigError("channel clamp must satisfy 0 < min <= max");
  if (coherence_ms <= 0) throw ConfigError("coherence period must be positive");
}

void HopConfig::validate() const {
  grid.validate();
  channel.validate();
  if (!(target_bler >= 0.0 && target_bler < 1.0)) throw ConfigError("target BLER must lie in [0,1)");
  if (max_retx < 0) throw ConfigError("max_retx must be non-negative");
  if (access_delay_ms < 0) throw ConfigError("access delay must be non-negative");
}

double clamp_efficiency(double raw, const ChannelModel& model) {
  return std::clamp(raw, model.min_efficiency, model.max_efficiency);
}

LinkState link_adapt(LinkState link, double raw_draw, const ChannelModel& model) {
  link.spectral_efficiency = clamp_efficiency(raw_draw, model);
  return link;
}

FadingChannel::FadingChannel(const ChannelModel& model, Rng rng) : model_(model), rng_(std::move(rng)) {}

double FadingChannel::efficiency_at(SimTime now) {
  const std::int64_t epoch = now.us() / (model_.coherence_ms * 1000);
  if (epoch != epoch_) {
    // mu chosen so that the lognormal mean equals mean_efficiency
    const double mu = std::log(model_.mean_efficiency) - 0.5 * model_.sigma * model_.sigma;
    std::lognormal_distribution<double> d(mu, model_.sigma);
    current_ = clamp_efficiency(d(rng_), model_);
    epoch_ = epoch;
  }
  return current_;
}

TxOutcome transmit(std::int64_t remaining_bits, std::int64_t allocated_units, const LinkState& link,
                   const HopConfig& hop, Rng& rng, int prior_failures) {
  TxOutcome out;
  out.retx_count = prior_failures;
  if (allocated_units <= 0 || remaining_bits <= 0) return out;
  const double capacity = static_cast<double>(allocated_units) * bits_per_unit(link, hop.grid);
  const auto carried = std::min<std::int64_t>(remaining_bits, static_cast<std::int64_t>(std::floor(capacity)));
  if (link.target_bler > 0.0) {
    std::bernoulli_distribution fail(link.target_bler);
    if (fail(rng)) {
      out.retx_count = prior_failures + 1;
      out.lost = out.retx_count > hop.max_retx;
      return out;
    }
  }
  out.bits_served = carried;
  out.success = true;
  out.retx_count = 0;
  return out;
}

}  // namespace slicesim::phy
