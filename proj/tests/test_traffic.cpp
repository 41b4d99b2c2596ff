#include <doctest.h>

#include <numeric>

#include "slicesim/core/rng.hpp"
#include "slicesim/traffic/catalog.hpp"
#include "slicesim/traffic/sources.hpp"

using namespace slicesim;
using namespace slicesim::traffic;

TEST_CASE("catalog holds the monitoring device table") {
  const auto c = build_catalog();
  REQUIRE(c.regular_flows.size() == 2);
  REQUIRE(c.emergency_flows.size() == 9);

  struct Row {
    const char* name;
    std::int64_t latency, jitter, survival, rate;
  };
  const Row rows[] = {
      {"3D camera 1", 150, 30, 180, 10'000'000}, {"EEG", 250, 25, 175, 1'000'000},
      {"3D camera 2", 150, 30, 180, 10'000'000}, {"Speaker", 150, 25, 175, 220'000},
      {"ECG", 250, 25, 275, 500'000},            {"EMG", 250, 25, 275, 500'000},
      {"SpO2", 250, 25, 275, 500'000},           {"Temperature", 250, 25, 275, 100'000},
      {"Blood pressure", 250, 25, 275, 100'000}, {"Heart rate", 250, 25, 275, 100'000},
      {"Respiration rate", 250, 25, 275, 100'000},
  };
  for (const auto& r : rows) {
    CAPTURE(r.name);
    const auto& f = c.find(r.name);
    CHECK(f.qos.e2e_latency_budget_ms == r.latency);
    CHECK(f.qos.jitter_budget_ms == r.jitter);
    CHECK(f.qos.survival_time_ms == r.survival);
    CHECK(f.qos.agg_rate_bps == r.rate);
  }
  CHECK(c.find("EEG").qos.agg_rate_bps == 1'000'000);
  CHECK(c.find("Speaker").qos.survival_time_ms == 175);
  std::int64_t vitals = 0;
  for (const char* n : {"Temperature", "Blood pressure", "Heart rate", "Respiration rate"})
    vitals += c.find(n).qos.agg_rate_bps;
  CHECK(vitals == 400'000);
}

TEST_CASE("catalog group totals and slice types") {
  const auto c = build_catalog();
  CHECK(c.regular_rate_bps() == 11'000'000);
  // 10 + 0.22 + 3 x 0.5 + 4 x 0.1 Mbps
  CHECK(c.emergency_rate_bps() == 12'120'000);
  for (const auto& f : c.regular_flows) CHECK(f.slice_type == SliceType::RegularMonitoring);
  for (const auto& f : c.emergency_flows) CHECK(f.slice_type == SliceType::Emergency);
  CHECK_THROWS_AS(c.find("Glucose"), ConfigError);
}

TEST_CASE("periodic healthcare packets") {
  const auto c = build_catalog();
  const auto eeg = next_packet(c.find("EEG"), SimTime::from_ms(40));
  CHECK(eeg.packet.size_bits == 10'000);
  CHECK(eeg.next_arrival == SimTime::from_ms(50));
  CHECK(eeg.packet.created_at == SimTime::from_ms(40));
  CHECK(eeg.packet.deadline == SimTime::from_ms(40 + 175));
  CHECK(next_packet(c.find("3D camera 1"), SimTime{}).packet.size_bits == 100'000);
  CHECK(next_packet(c.find("Heart rate"), SimTime{}).packet.size_bits == 1'000);
}

TEST_CASE("k whole periods carry k packet sizes for every flow") {
  const auto c = build_catalog();
  for (const auto* group : {&c.regular_flows, &c.emergency_flows})
    for (const auto& f : *group) {
      SimTime t{};
      std::int64_t bits = 0;
      for (int k = 0; k < 100; ++k) {
        const auto n = next_packet(f, t);
        bits += n.packet.size_bits;
        t = n.next_arrival;
      }
      CHECK(t == SimTime::from_ms(100 * f.packet_period_ms));
      CHECK(bits == 100 * f.packet_size_bits());
      CHECK(f.packet_size_bits() * (1000 / f.packet_period_ms) == f.qos.agg_rate_bps);
    }
}

TEST_CASE("flow with a rate that does not packetize evenly is rejected") {
  FlowSpec f{"odd", QoSProfile{100, 10, 110, 1'000'001, 0.01}, SliceType::Emergency, 10};
  CHECK_THROWS_AS(f.validate(), ConfigError);
  f.qos.agg_rate_bps = 1'000'000;
  f.packet_period_ms = 3;
  CHECK_THROWS_AS(f.validate(), ConfigError);
}

TEST_CASE("constant bit rate eMBB delivers rate x time") {
  EmbbTrafficModel m;
  m.kind = EmbbTrafficModel::Kind::PeriodicCbr;
  m.mean_rate_bps = 5'000'000;
  const auto a = embb_arrivals(m, SimTime::from_s(10), make_rng(3, 0, 1));
  std::int64_t bits = 0;
  for (const auto& x : a) bits += x.bits;
  CHECK(a.size() == 1000);
  CHECK(bits == 50'000'000);
}

TEST_CASE("bursty eMBB streams are reproducible") {
  EmbbTrafficModel m;
  const auto a = embb_arrivals(m, SimTime::from_s(30), make_rng(11, 4, 1));
  const auto b = embb_arrivals(m, SimTime::from_s(30), make_rng(11, 4, 1));
  const auto c = embb_arrivals(m, SimTime::from_s(30), make_rng(12, 4, 1));
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].at == b[i].at);
    CHECK(a[i].bits == b[i].bits);
  }
  CHECK(a.size() != c.size());
}

TEST_CASE("every burst carries burst rate x on-time bits") {
  EmbbTrafficModel m;
  EmbbSource src(m, make_rng(5, 0, 1));
  const double rate = m.burst_rate_bps();
  CHECK(rate == doctest::Approx(25'000'000.0));
  SimTime on_seen = src.total_on_time();
  SimTime burst_on = on_seen;
  std::int64_t burst_bits = 0;
  SimTime last{};
  int bursts = 0;
  for (int i = 0; i < 200'000; ++i) {
    const Arrival a = src.next();
    CHECK(a.at >= last);
    CHECK(a.bits > 0);
    last = a.at;
    if (src.total_on_time() != on_seen) {
      // Previous burst is complete: compare with its closed-form volume.
      const auto expect = static_cast<std::int64_t>(std::floor(rate * static_cast<double>(burst_on.us()) / 1e6));
      CHECK(burst_bits == expect);
      burst_on = src.total_on_time() - on_seen;
      on_seen = src.total_on_time();
      burst_bits = 0;
      ++bursts;
    }
    burst_bits += a.bits;
  }
  CHECK(bursts > 1000);
}

TEST_CASE("bursty eMBB long-run mean rate") {
  // The on/off cycle averages 1 s, so the relative error of a single
  // household's mean shrinks like 1/sqrt(seconds). 200 000 s puts 1% at
  // about three standard errors.
  EmbbTrafficModel m;
  const SimTime horizon = SimTime::from_s(200'000);
  const auto a = embb_arrivals(m, horizon, make_rng(21, 0, 1));
  double bits = 0;
  for (const auto& x : a) bits += static_cast<double>(x.bits);
  const double rate = bits / horizon.seconds();
  CHECK(rate == doctest::Approx(5e6).epsilon(0.01));
}

TEST_CASE("eMBB model validation") {
  EmbbTrafficModel m;
  m.mean_on_ms = 0;
  CHECK_THROWS_AS(m.validate(), ConfigError);
  m = EmbbTrafficModel{};
  m.mean_rate_bps = 0;
  CHECK_THROWS_AS(m.validate(), ConfigError);
  m = EmbbTrafficModel{};
  m.mean_off_ms = -1;
  CHECK_THROWS_AS(m.validate(), ConfigError);
}
