#pragma once

#include <cstdint>
#include <vector>

#include "slicesim/core/model.hpp"
#include "slicesim/core/rng.hpp"

namespace slicesim::traffic {

struct NextPacket {
  Packet packet;  // size, creation time and deadline filled in
  SimTime next_arrival;
};

/// Healthcare flows are strictly periodic: one packet of rate*period bits per period.
NextPacket next_packet(const FlowSpec& flow, SimTime now, SurvivalRule rule = SurvivalRule::Table);

struct EmbbTrafficModel {
  enum class Kind : std::uint8_t { PeriodicCbr, PoissonBursts };

  Kind kind = Kind::PoissonBursts;
  std::int64_t mean_rate_bps = 5'000'000;
  std::int64_t packet_period_ms = 10;
  // PoissonBursts: exponential on/off, CBR at burst_rate_bps() while on.
  double mean_on_ms = 200.0;
  double mean_off_ms = 800.0;

  double burst_rate_bps() const;
  void validate() const;
};

struct Arrival {
  SimTime at;
  std::int64_t bits = 0;
};

/// Arrival stream of one household's eMBB traffic.
class EmbbSource {
public:
  EmbbSource(const EmbbTrafficModel& model, Rng rng, SimTime start = SimTime{});

  /// Next arrival in time order; the stream is unbounded.
  Arrival next();

  /// Sum of on-period durations started so far (PoissonBursts only).
  SimTime total_on_time() const { return total_on_; }

private:
  void start_burst();

  EmbbTrafficModel model_;
  Rng rng_;
  double rate_bps_;
  SimTime period_;
  SimTime burst_start_;
  SimTime burst_end_;
  SimTime cursor_;
  SimTime total_on_;
};

/// All arrivals of one source in [0, horizon).
std::vector<Arrival> embb_arrivals(const EmbbTrafficModel& model, SimTime horizon, Rng rng);

}  // namespace slicesim::traffic
