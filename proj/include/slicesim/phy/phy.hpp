#pragma once

#include <cstdint>

#include "slicesim/core/model.hpp"
#include "slicesim/core/rng.hpp"

namespace slicesim::phy {

/// Per-device spectral efficiency: clamped lognormal draw, held for one
/// coherence period.
struct ChannelModel {
  double mean_efficiency = 4.0;  // bits per symbol
  double sigma = 0.5;            // of the underlying normal
  double min_efficiency = 0.5;
  double max_efficiency = 8.0;
  std::int64_t coherence_ms = 100;

  void validate() const;
};

struct HopConfig {
  ResourceGrid grid;
  ChannelModel channel;
  double target_bler = 0.01;
  int max_retx = 8;
  std::int64_t access_delay_ms = 0;  // fixed per-packet medium access delay

  void validate() const;
};

double clamp_efficiency(double raw, const ChannelModel& model);

/// Sets the link's efficiency from a raw channel draw. The target BLER is
/// left untouched: link adaptation picks the rate that meets it.
LinkState link_adapt(LinkState link, double raw_draw, const ChannelModel& model);

/// Time-correlated efficiency process of one device.
class FadingChannel {
public:
  FadingChannel(const ChannelModel& model, Rng rng);

  /// Efficiency in force at `now`; redrawn when a coherence boundary is crossed.
  double efficiency_at(SimTime now);

private:
  ChannelModel model_;
  Rng rng_;
  std::int64_t epoch_ = -1;
  double current_ = 0.0;
};

struct TxOutcome {
  std::int64_t bits_served = 0;
  bool success = false;
  int retx_count = 0;  // failed attempts of the current block
  bool lost = false;   // retransmission budget exhausted
};

/// One transport block of `allocated_units` units. A failed block serves
/// nothing; it is retried in a later interval until `max_retx` is exceeded.
TxOutcome transmit(std::int64_t remaining_bits, std::int64_t allocated_units, const LinkState& link,
                   const HopConfig& hop, Rng& rng, int prior_failures = 0);

}  // namespace slicesim::phy
