#include "slicesim/io/config.hpp"

#include <fstream>
#include <set>
#include <type_traits>

namespace slicesim::io {

using nlohmann::json;

namespace {

/// Reads optional members of one JSON object and rejects unknown ones.
class Section {
public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) fail(path_, "expected an object");
  }

  template <class T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    auto it = node_.find(key);
    if (it == node_.end()) return;
    if (!matches<T>(*it)) fail(where(key), "wrong type");
    try {
      out = it->template get<T>();
    } catch (const json::exception&) {
      fail(where(key), "wrong type");
    }
  }

  template <class T>
  static bool matches(const json& v) {
    if constexpr (std::is_same_v<T, bool>) return v.is_boolean();
    else if constexpr (std::is_integral_v<T> && std::is_unsigned_v<T>) return v.is_number_unsigned();
    else if constexpr (std::is_integral_v<T>) return v.is_number_integer();
    else if constexpr (std::is_floating_point_v<T>) return v.is_number();
    else return v.is_string();
  }

  template <class F>
  void with(const char* key, F&& f) {
    seen_.insert(key);
    auto it = node_.find(key);
    if (it != node_.end()) f(*it, where(key));
  }

  void finish() const {
    for (const auto& [k, v] : node_.items())
      if (!seen_.contains(k)) fail(where(k), "unknown key");
  }

  std::string where(const std::string& key) const { return path_ + "/" + key; }

  [[noreturn]] static void fail(const std::string& path, const std::string& what) {
    throw ConfigError("config " + (path.empty() ? std::string("/") : path) + ": " + what);
  }

private:
  const json& node_;
  std::string path_;
  std::set<std::string, std::less<>> seen_;
};

template <class F>
auto parse_enum(const json& v, const std::string& path, F&& parse) {
  if (!v.is_string()) Section::fail(path, "expected a string");
  try {
    return parse(v.get<std::string>());
  } catch (const ConfigError& e) {
    Section::fail(path, e.what());
  }
}

void read_qos(const json& node, const std::string& path, QoSProfile& q) {
  Section s(node, path);
  s.get("e2e_latency_budget_ms", q.e2e_latency_budget_ms);
  s.get("jitter_budget_ms", q.jitter_budget_ms);
  s.get("survival_time_ms", q.survival_time_ms);
  s.get("agg_rate_bps", q.agg_rate_bps);
  s.get("drop_prob_target", q.drop_prob_target);
  s.finish();
}

json write_qos(const QoSProfile& q) {
  return {{"e2e_latency_budget_ms", q.e2e_latency_budget_ms},
          {"jitter_budget_ms", q.jitter_budget_ms},
          {"survival_time_ms", q.survival_time_ms},
          {"agg_rate_bps", q.agg_rate_bps},
          {"drop_prob_target", q.drop_prob_target}};
}

void read_hop(const json& node, const std::string& path, phy::HopConfig& h) {
  Section s(node, path);
  s.get("interval_ms", h.grid.interval_ms);
  s.get("units_per_interval", h.grid.units_per_interval);
  s.get("legacy_reserved_fraction", h.grid.legacy_reserved_fraction);
  s.get("symbols_per_unit", h.grid.symbols_per_unit);
  s.get("target_bler", h.target_bler);
  s.get("max_retx", h.max_retx);
  s.get("access_delay_ms", h.access_delay_ms);
  s.with("channel", [&](const json& c, const std::string& p) {
    Section cs(c, p);
    cs.get("mean_efficiency", h.channel.mean_efficiency);
    cs.get("sigma", h.channel.sigma);
    cs.get("min_efficiency", h.channel.min_efficiency);
    cs.get("max_efficiency", h.channel.max_efficiency);
    cs.get("coherence_ms", h.channel.coherence_ms);
    cs.finish();
  });
  s.finish();
}

json write_hop(const phy::HopConfig& h) {
  return {{"interval_ms", h.grid.interval_ms},
          {"units_per_interval", h.grid.units_per_interval},
          {"legacy_reserved_fraction", h.grid.legacy_reserved_fraction},
          {"symbols_per_unit", h.grid.symbols_per_unit},
          {"target_bler", h.target_bler},
          {"max_retx", h.max_retx},
          {"access_delay_ms", h.access_delay_ms},
          {"channel",
           {{"mean_efficiency", h.channel.mean_efficiency},
            {"sigma", h.channel.sigma},
            {"min_efficiency", h.channel.min_efficiency},
            {"max_efficiency", h.channel.max_efficiency},
            {"coherence_ms", h.channel.coherence_ms}}}};
}

std::vector<FlowSpec> read_flows(const json& node, const std::string& path, SliceType type) {
  if (!node.is_array()) Section::fail(path, "expected an array");
  std::vector<FlowSpec> flows;
  for (std::size_t i = 0; i < node.size(); ++i) {
    const std::string p = path + "/" + std::to_string(i);
    Section s(node[i], p);
    FlowSpec f;
    f.slice_type = type;
    s.get("name", f.device_name);
    s.get("packet_period_ms", f.packet_period_ms);
    s.with("qos", [&](const json& q, const std::string& qp) { read_qos(q, qp, f.qos); });
    s.finish();
    flows.push_back(std::move(f));
  }
  return flows;
}

json write_flows(const std::vector<FlowSpec>& flows) {
  json arr = json::array();
  for (const auto& f : flows)
    arr.push_back({{"name", f.device_name}, {"packet_period_ms", f.packet_period_ms}, {"qos", write_qos(f.qos)}});
  return arr;
}

const char* embb_kind_name(traffic::EmbbTrafficModel::Kind k) {
  return k == traffic::EmbbTrafficModel::Kind::PeriodicCbr ? "PeriodicCbr" : "PoissonBursts";
}

traffic::EmbbTrafficModel::Kind embb_kind_from(const std::string& s) {
  if (s == "PeriodicCbr") return traffic::EmbbTrafficModel::Kind::PeriodicCbr;
  if (s == "PoissonBursts") return traffic::EmbbTrafficModel::Kind::PoissonBursts;
  throw ConfigError("unknown eMBB model '" + s + "'");
}

SurvivalRule survival_rule_from(const std::string& s) {
  if (s == "table") return SurvivalRule::Table;
  if (s == "sum") return SurvivalRule::Sum;
  throw ConfigError("unknown survival rule '" + s + "'");
}

void read_traffic(const json& node, const std::string& path, engine::TrafficConfig& t) {
  Section s(node, path);
  s.with("regular_flows", [&](const json& v, const std::string& p) {
    t.catalog.regular_flows = read_flows(v, p, SliceType::RegularMonitoring);
  });
  s.with("emergency_flows", [&](const json& v, const std::string& p) {
    t.catalog.emergency_flows = read_flows(v, p, SliceType::Emergency);
  });
  s.with("embb", [&](const json& v, const std::string& p) {
    Section e(v, p);
    e.with("model", [&](const json& m, const std::string& mp) { t.embb.kind = parse_enum(m, mp, embb_kind_from); });
    e.get("mean_rate_bps", t.embb.mean_rate_bps);
    e.get("packet_period_ms", t.embb.packet_period_ms);
    e.get("mean_on_ms", t.embb.mean_on_ms);
    e.get("mean_off_ms", t.embb.mean_off_ms);
    e.finish();
  });
  s.with("embb_qos", [&](const json& v, const std::string& p) { read_qos(v, p, t.embb_qos); });
  s.get("embb_enabled", t.embb_enabled);
  s.get("healthcare_enabled", t.healthcare_enabled);
  s.with("survival_rule",
         [&](const json& v, const std::string& p) { t.survival_rule = parse_enum(v, p, survival_rule_from); });
  s.finish();
}

}  // namespace

engine::Scenario preset(const std::string& name) {
  if (name == "paper-case") return engine::case_study_preset();
  if (name == "empty") {
    auto s = engine::case_study_preset();
    s.patients.clear();
    s.events.clear();
    return s;
  }
  throw ConfigError("unknown preset '" + name + "'");
}

engine::Scenario scenario_from_json(const json& doc) {
  std::string base = "paper-case";
  if (doc.is_object() && doc.contains("preset")) {
    if (!doc["preset"].is_string()) Section::fail("/preset", "expected a string");
    base = doc["preset"].get<std::string>();
  }
  engine::Scenario sc = preset(base);

  Section s(doc, "");
  s.with("preset", [](const json&, const std::string&) {});
  s.get("seed", sc.seed);
  s.get("duration_ms", sc.duration_ms);
  s.get("warmup_ms", sc.warmup_ms);
  s.get("n_rg_total", sc.n_rg_total);
  s.get("active_fraction", sc.active_fraction);
  s.get("record_allocations", sc.record_allocations);
  s.with("patients", [&](const json& v, const std::string& p) {
    if (!v.is_array()) Section::fail(p, "expected an array");
    sc.patients.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      Section ps(v[i], p + "/" + std::to_string(i));
      engine::Patient pat;
      ps.get("home_rg", pat.home_rg);
      ps.finish();
      sc.patients.push_back(pat);
    }
  });
  s.with("events", [&](const json& v, const std::string& p) {
    if (!v.is_array()) Section::fail(p, "expected an array");
    sc.events.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::string ep = p + "/" + std::to_string(i);
      Section es(v[i], ep);
      slicing::SliceEvent ev;
      std::int64_t at_ms = 0;
      es.get("at_ms", at_ms);
      ev.at = SimTime::from_ms(at_ms);
      es.get("patient", ev.patient);
      es.with("kind", [&](const json& k, const std::string& kp) {
        ev.kind = parse_enum(k, kp, [](const std::string& x) { return slicing::event_kind_from_string(x); });
      });
      es.finish();
      sc.events.push_back(ev);
    }
  });
  s.with("activation_delay_ms", [&](const json& v, const std::string& p) {
    if (!v.is_number_integer()) Section::fail(p, "expected an integer");
    sc.activation.activation_delay_ms = v.get<std::int64_t>();
  });
  s.with("policy", [&](const json& v, const std::string& p) {
    Section ps(v, p);
    ps.with("name", [&](const json& n, const std::string& np) {
      sc.policy.policy = parse_enum(n, np, [](const std::string& x) { return sched::policy_from_string(x); });
    });
    ps.get("window_ms", sc.policy.window_ms);
    ps.get("alpha", sc.policy.alpha);
    ps.get("beta", sc.policy.beta);
    ps.get("ewma_factor", sc.policy.ewma_factor);
    ps.get("cross_hop_reporting", sc.policy.cross_hop_reporting);
    ps.finish();
  });
  s.with("wlan", [&](const json& v, const std::string& p) { read_hop(v, p, sc.wlan); });
  s.with("fwa", [&](const json& v, const std::string& p) { read_hop(v, p, sc.fwa); });
  s.with("traffic", [&](const json& v, const std::string& p) { read_traffic(v, p, sc.traffic); });
  s.finish();

  sc.validate();
  return sc;
}

engine::Scenario load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open config " + file.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(file.string() + ": " + e.what());
  }
  return scenario_from_json(doc);
}

json scenario_to_json(const engine::Scenario& sc) {
  json patients = json::array();
  for (const auto& p : sc.patients) patients.push_back({{"home_rg", p.home_rg}});
  json events = json::array();
  for (const auto& e : sc.events)
    events.push_back({{"at_ms", e.at.us() / 1000}, {"kind", slicing::to_string(e.kind)}, {"patient", e.patient}});
  const auto& t = sc.traffic;
  return {
      {"preset", "empty"},
      {"seed", sc.seed},
      {"duration_ms", sc.duration_ms},
      {"warmup_ms", sc.warmup_ms},
      {"n_rg_total", sc.n_rg_total},
      {"active_fraction", sc.active_fraction},
      {"record_allocations", sc.record_allocations},
      {"patients", patients},
      {"events", events},
      {"activation_delay_ms", sc.activation.activation_delay_ms},
      {"policy",
       {{"name", sched::to_string(sc.policy.policy)},
        {"window_ms", sc.policy.window_ms},
        {"alpha", sc.policy.alpha},
        {"beta", sc.policy.beta},
        {"ewma_factor", sc.policy.ewma_factor},
        {"cross_hop_reporting", sc.policy.cross_hop_reporting}}},
      {"wlan", write_hop(sc.wlan)},
      {"fwa", write_hop(sc.fwa)},
      {"traffic",
       {{"regular_flows", write_flows(t.catalog.regular_flows)},
        {"emergency_flows", write_flows(t.catalog.emergency_flows)},
        {"embb",
         {{"model", embb_kind_name(t.embb.kind)},
          {"mean_rate_bps", t.embb.mean_rate_bps},
          {"packet_period_ms", t.embb.packet_period_ms},
          {"mean_on_ms", t.embb.mean_on_ms},
          {"mean_off_ms", t.embb.mean_off_ms}}},
        {"embb_qos", write_qos(t.embb_qos)},
        {"embb_enabled", t.embb_enabled},
        {"healthcare_enabled", t.healthcare_enabled},
        {"survival_rule", t.survival_rule == SurvivalRule::Table ? "table" : "sum"}}},
  };
}

}  // namespace slicesim::io
