#include <doctest.h>

#include "slicesim/core/model.hpp"
#include "slicesim/traffic/catalog.hpp"

using namespace slicesim;

TEST_CASE("SimTime converts milliseconds and seconds exactly") {
  CHECK(SimTime::from_ms(275).us() == 275000);
  CHECK(SimTime::from_s(2).us() == 2000000);
  CHECK(SimTime::from_ms(1500).seconds() == doctest::Approx(1.5));
  CHECK(SimTime::from_ms(3) + SimTime::from_ms(4) == SimTime::from_ms(7));
  CHECK(SimTime::from_ms(3) < SimTime::from_ms(4));
}

TEST_CASE("deadline is creation time plus the tabulated survival time") {
  const auto cat = traffic::build_catalog();
  // Table values: 3D camera 1 survives 180 ms, ECG 275 ms.
  CHECK(deadline_of(SimTime{}, cat.find("3D camera 1").qos) == SimTime::from_ms(180));
  CHECK(deadline_of(SimTime::from_ms(100), cat.find("ECG").qos) == SimTime::from_ms(375));
  QoSProfile q{250, 25, 275, 1000, 0.01};
  CHECK(deadline_of(SimTime{}, q).us() == 275000);
}

TEST_CASE("survival rule switch") {
  const auto eeg = traffic::build_catalog().find("EEG").qos;
  CHECK(survival_ms(eeg, SurvivalRule::Table) == 175);
  CHECK(survival_ms(eeg, SurvivalRule::Sum) == 275);
  CHECK(deadline_of(SimTime{}, eeg, SurvivalRule::Sum) == SimTime::from_ms(275));
}

TEST_CASE("usable units") {
  CHECK(usable_units(ResourceGrid{Hop::Wlan, 1, 100, 0.30, 1}) == 70);  // 30% legacy reservation
  CHECK(usable_units(ResourceGrid{Hop::Fwa, 1, 1600, 0.0, 1}) == 1600);
  CHECK(usable_units(ResourceGrid{Hop::Wlan, 1, 10, 0.30, 1}) == 7);
}

TEST_CASE("usable units are monotone in size and reservation") {
  for (std::int64_t u = 1; u <= 300; ++u)
    for (int f = 0; f < 99; ++f) {
      const double frac = f / 100.0;
      const auto here = usable_units(ResourceGrid{Hop::Wlan, 1, u, frac, 1});
      CHECK(here <= usable_units(ResourceGrid{Hop::Wlan, 1, u + 1, frac, 1}));
      CHECK(here >= usable_units(ResourceGrid{Hop::Wlan, 1, u, (f + 1) / 100.0, 1}));
      CHECK(here >= 0);
      CHECK(here <= u);
    }
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(ResourceGrid({Hop::Fwa, 1, 0, 0.0, 1}).validate(), ConfigError);
  CHECK_THROWS_AS(ResourceGrid({Hop::Wlan, 1, 10, 1.0, 1}).validate(), ConfigError);
  CHECK_THROWS_AS(ResourceGrid({Hop::Wlan, 0, 10, 0.0, 1}).validate(), ConfigError);
  CHECK_NOTHROW(ResourceGrid({Hop::Wlan, 1, 10, 0.3, 1}).validate());
}

TEST_CASE("QoS profile validation") {
  CHECK_NOTHROW(QoSProfile({150, 30, 180, 10'000'000, 0.01}).validate());
  CHECK_THROWS_AS(QoSProfile({150, 30, 180, 10'000'000, 1.0}).validate(), ConfigError);
  CHECK_THROWS_AS(QoSProfile({0, 30, 180, 10'000'000, 0.01}).validate(), ConfigError);
  CHECK_THROWS_AS(QoSProfile({150, 30, -1, 10'000'000, 0.01}).validate(), ConfigError);
}

TEST_CASE("slice type names round trip") {
  for (auto t : {SliceType::Embb, SliceType::RegularMonitoring, SliceType::Emergency})
    CHECK(slice_type_from_string(to_string(t)) == t);
  CHECK_THROWS_AS(slice_type_from_string("urllc"), ConfigError);
  CHECK(is_healthcare(SliceType::Emergency));
  CHECK(is_healthcare(SliceType::RegularMonitoring));
  CHECK_FALSE(is_healthcare(SliceType::Embb));
}

TEST_CASE("bits per unit scale with efficiency") {
  LinkState l;
  l.spectral_efficiency = 4.0;
  CHECK(bits_per_unit(l, ResourceGrid{Hop::Fwa, 1, 1600, 0.0, 1000}) == doctest::Approx(4000.0));
}
