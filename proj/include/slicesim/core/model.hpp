#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace slicesim {

/// Simulation clock in integer microseconds since the start of a run.
class SimTime {
public:
  constexpr SimTime() = default;
  constexpr explicit SimTime(std::int64_t us) : us_(us) {}

  static constexpr SimTime from_ms(std::int64_t ms) { return SimTime(ms * 1000); }
  static constexpr SimTime from_s(std::int64_t s) { return SimTime(s * 1000000); }

  constexpr std::int64_t us() const { return us_; }
  constexpr double ms() const { return static_cast<double>(us_) / 1e3; }
  constexpr double seconds() const { return static_cast<double>(us_) / 1e6; }

  constexpr auto operator<=>(const SimTime&) const = default;
  constexpr SimTime operator+(SimTime o) const { return SimTime(us_ + o.us_); }
  constexpr SimTime operator-(SimTime o) const { return SimTime(us_ - o.us_); }
  constexpr SimTime& operator+=(SimTime o) {
    us_ += o.us_;
    return *this;
  }

private:
  std::int64_t us_ = 0;
};

/// Raised for malformed scenarios, catalogs and traffic parameters.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class SliceType : std::uint8_t { Embb, RegularMonitoring, Emergency };

std::string_view to_string(SliceType t);
SliceType slice_type_from_string(std::string_view s);

constexpr bool is_healthcare(SliceType t) { return t != SliceType::Embb; }

struct QoSProfile {
  std::int64_t e2e_latency_budget_ms = 0;
  std::int64_t jitter_budget_ms = 0;
  std::int64_t survival_time_ms = 0;
  std::int64_t agg_rate_bps = 0;
  double drop_prob_target = 0.01;  // M-LWDF delta

  void validate() const;
};

struct FlowSpec {
  std::string device_name;
  QoSProfile qos;
  SliceType slice_type = SliceType::RegularMonitoring;
  std::int64_t packet_period_ms = 10;

  /// Bits per packet; the period must divide one second evenly.
  std::int64_t packet_size_bits() const { return qos.agg_rate_bps * packet_period_ms / 1000; }
  void validate() const;
};

enum class SliceState : std::uint8_t { Active, Promoting, Demoting };

using SliceId = std::uint32_t;
using FlowId = std::uint32_t;
using PacketId = std::uint64_t;

struct SliceInstance {
  SliceId id = 0;
  SliceType current_type = SliceType::Embb;
  std::vector<FlowId> flows;
  bool priority = false;
  double weight = 1.0;
  SliceState state = SliceState::Active;
};

enum class PacketOutcome : std::uint8_t { InFlight, Delivered, DroppedExpired, LostRetx };

std::string_view to_string(PacketOutcome o);

struct Packet {
  PacketId id = 0;
  FlowId flow_ref = 0;
  SliceId slice_ref = 0;
  SliceType slice_type = SliceType::Embb;  // slice type at creation
  std::int64_t size_bits = 0;
  SimTime created_at;
  SimTime deadline;
  SimTime hop1_delay;                     // created -> enqueued at the gateway
  std::optional<SimTime> enqueued_rg_at;  // arrival in the gateway slice queue
  std::optional<SimTime> fwa_first_service;
  std::optional<SimTime> delivered_at;
  PacketOutcome outcome = PacketOutcome::InFlight;
};

enum class SurvivalRule : std::uint8_t { Table, Sum };

/// Survival budget of a flow: the table column, or latency + jitter.
std::int64_t survival_ms(const QoSProfile& qos, SurvivalRule rule);

/// Packet deadline: creation time plus the survival time of its flow.
SimTime deadline_of(SimTime created_at, const QoSProfile& qos,
                    SurvivalRule rule = SurvivalRule::Table);

enum class Hop : std::uint8_t { Wlan, Fwa };

std::string_view to_string(Hop h);

/// Per-interval supply of abstract resource units on one hop.
struct ResourceGrid {
  Hop hop = Hop::Fwa;
  std::int64_t interval_ms = 1;
  std::int64_t units_per_interval = 1;
  double legacy_reserved_fraction = 0.0;
  /// Modulation symbols carried by one unit; bits per unit = efficiency * this.
  std::int64_t symbols_per_unit = 1;

  void validate() const;
};

std::int64_t usable_units(const ResourceGrid& grid);

/// Exponentially averaged rates never go below this floor (bits/s).
inline constexpr double kAvgRateFloorBps = 1000.0;

struct LinkState {
  double spectral_efficiency = 1.0;  // bits per modulation symbol
  double target_bler = 0.0;
  double avg_rate_bps = kAvgRateFloorBps;
};

/// Bits carried by one resource unit on this link.
inline double bits_per_unit(const LinkState& link, const ResourceGrid& grid) {
  return link.spectral_efficiency * static_cast<double>(grid.symbols_per_unit);
}

}  // namespace slicesim
