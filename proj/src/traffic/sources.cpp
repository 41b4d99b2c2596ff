#include "slicesim/traffic/sources.hpp"

#include <algorithm>
#include <cmath>

namespace slicesim::traffic {

NextPacket next_packet(const FlowSpec& flow, SimTime now, SurvivalRule rule) {
  NextPacket out;
  out.packet.size_bits = flow.packet_size_bits();
  out.packet.created_at = now;
  out.packet.deadline = deadline_of(now, flow.qos, rule);
  out.next_arrival = now + SimTime::from_ms(flow.packet_period_ms);
  return out;
}

double EmbbTrafficModel::burst_rate_bps() const {
  if (kind == Kind::PeriodicCbr) return static_cast<double>(mean_rate_bps);
  return static_cast<double>(mean_rate_bps) * (mean_on_ms + mean_off_ms) / mean_on_ms;
}

void EmbbTrafficModel::validate() const {
  if (mean_rate_bps <= 0) throw ConfigError("eMBB mean rate must be positive");
  if (packet_period_ms <= 0) throw ConfigError("eMBB packet period must be positive");
  if (kind == Kind::PoissonBursts && !(mean_on_ms > 0.0 && mean_off_ms >= 0.0))
    throw ConfigError("eMBB burst durations must be positive");
}

namespace {

SimTime draw_exp_us(Rng& rng, double mean_ms) {
  if (mean_ms <= 0.0) return SimTime{};
  std::exponential_distribution<double> d(1.0 / (mean_ms * 1000.0));
  return SimTime(static_cast<std::int64_t>(std::llround(d(rng))));
}

}  // namespace

EmbbSource::EmbbSource(const EmbbTrafficModel& model, Rng rng, SimTime start)
    : model_(model), rng_(std::move(rng)), rate_bps_(model.burst_rate_bps()),
      period_(SimTime::from_ms(model.packet_period_ms)) {
  model_.validate();
  if (model_.kind == EmbbTrafficModel::Kind::PeriodicCbr) {
    std::uniform_int_distribution<std::int64_t> phase(0, period_.us() - 1);
    cursor_ = start + SimTime(phase(rng_));
    return;
  }
  // Begin inside an off period so households are not synchronised.
  burst_end_ = start;
  cursor_ = start;
  start_burst();
}

void EmbbSource::start_burst() {
  SimTime on;
  do {
    on = draw_exp_us(rng_, model_.mean_on_ms);
  } while (on.us() == 0);
  burst_start_ = burst_end_ + draw_exp_us(rng_, model_.mean_off_ms);
  burst_end_ = burst_start_ + on;
  total_on_ += on;
  cursor_ = burst_start_;
}

Arrival EmbbSource::next() {
  if (model_.kind == EmbbTrafficModel::Kind::PeriodicCbr) {
    Arrival a{cursor_, model_.mean_rate_bps * model_.packet_period_ms / 1000};
    cursor_ += period_;
    return a;
  }
  if (cursor_ >= burst_end_) start_burst();
  // Bits are apportioned from the cumulative in-burst volume so that each
  // burst carries rate * on-time bits exactly, up to rounding of one bit.
  const SimTime chunk_end = std::min(cursor_ + period_, burst_end_);
  auto volume = [&](SimTime t) {
    return static_cast<std::int64_t>(std::floor(rate_bps_ * static_cast<double>((t - burst_start_).us()) / 1e6));
  };
  Arrival a{cursor_, volume(chunk_end) - volume(cursor_)};
  cursor_ = chunk_end;
  if (a.bits == 0) return next();
  return a;
}

std::vector<Arrival> embb_arrivals(const EmbbTrafficModel& model, SimTime horizon, Rng rng) {
  EmbbSource src(model, std::move(rng));
  std::vector<Arrival> out;
  for (Arrival a = src.next(); a.at < horizon; a = src.next()) out.push_back(a);
  return out;
}

}  // namespace slicesim::traffic
