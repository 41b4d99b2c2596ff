#include "slicesim/metrics/trace.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <string_view>
#include <unordered_map>

namespace slicesim::metrics {

namespace {

constexpr std::string_view kHeader = "packet_id,slice_type,flow,created_us,hop1_delay_us,rg_wait_us,delivered_us|outcome";

std::int64_t parse_int(std::string_view s, std::size_t line) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ConfigError("trace line " + std::to_string(line) + ": bad integer '" + std::string(s) + "'");
  return v;
}

}  // namespace

void write_trace_csv(std::ostream& out, const Trace& trace) {
  out << kHeader << '\n';
  std::string line;
  for (const Packet& p : trace.packets) {
    line.clear();
    line += std::to_string(p.id);
    line += ',';
    line += to_string(p.slice_type);
    line += ',';
    line += trace.flows.at(p.flow_ref).name;
    line += ',';
    line += std::to_string(p.created_at.us());
    line += ',';
    if (p.enqueued_rg_at) line += std::to_string(p.hop1_delay.us());
    line += ',';
    if (p.fwa_first_service && p.enqueued_rg_at)
      line += std::to_string((*p.fwa_first_service - *p.enqueued_rg_at).us());
    line += ',';
    if (p.outcome == PacketOutcome::Delivered)
      line += std::to_string(p.delivered_at->us());
    else
      line += to_string(p.outcome);
    line += '\n';
    out << line;
  }
}

Trace read_trace_csv(std::istream& in, const std::vector<FlowInfo>& flows, SimTime warmup, SimTime horizon) {
  Trace t;
  t.flows = flows;
  t.warmup = warmup;
  t.horizon = horizon;
  std::unordered_map<std::string, FlowId> by_name;
  for (FlowId i = 0; i < flows.size(); ++i) by_name.emplace(flows[i].name, i);

  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line) || line != kHeader) throw ConfigError("trace: missing or unexpected header");
  std::vector<std::string_view> cols;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    cols.clear();
    std::string_view rest(line);
    for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos; rest.remove_prefix(pos + 1))
      cols.push_back(rest.substr(0, pos));
    cols.push_back(rest);
    if (cols.size() != 7) throw ConfigError("trace line " + std::to_string(lineno) + ": expected 7 columns");

    Packet p;
    p.id = static_cast<PacketId>(parse_int(cols[0], lineno));
    p.slice_type = slice_type_from_string(cols[1]);
    auto it = by_name.find(std::string(cols[2]));
    if (it == by_name.end()) throw ConfigError("trace line " + std::to_string(lineno) + ": unknown flow");
    p.flow_ref = it->second;
    p.created_at = SimTime(parse_int(cols[3], lineno));
    p.deadline = p.created_at + SimTime::from_ms(flows[p.flow_ref].survival_ms);
    if (!cols[4].empty()) {
      p.hop1_delay = SimTime(parse_int(cols[4], lineno));
      p.enqueued_rg_at = p.created_at + p.hop1_delay;
    }
    if (!cols[5].empty()) {
      if (!p.enqueued_rg_at) throw ConfigError("trace line " + std::to_string(lineno) + ": gateway wait without hop-1 delay");
      p.fwa_first_service = *p.enqueued_rg_at + SimTime(parse_int(cols[5], lineno));
    }
    const std::string_view last = cols[6];
    if (last == "in-flight") {
      p.outcome = PacketOutcome::InFlight;
    } else if (last == "dropped-expired") {
      p.outcome = PacketOutcome::DroppedExpired;
    } else if (last == "lost-retx") {
      p.outcome = PacketOutcome::LostRetx;
    } else {
      p.outcome = PacketOutcome::Delivered;
      p.delivered_at = SimTime(parse_int(last, lineno));
    }
    t.packets.push_back(p);
  }
  return t;
}

}  // namespace slicesim::metrics
