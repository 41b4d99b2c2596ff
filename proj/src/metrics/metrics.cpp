#include "slicesim/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace slicesim::metrics {

std::optional<LatencyStats> e2e_latency_stats(const Trace& trace, SliceFilter slices) {
  std::vector<std::int64_t> lat;
  LatencyStats st;
  for (const Packet& p : trace.packets) {
    if (!slices.contains(p.slice_type) || p.created_at < trace.warmup) continue;
    if (p.outcome == PacketOutcome::DroppedExpired) ++st.dropped;
    if (p.outcome == PacketOutcome::LostRetx) ++st.lost;
    if (p.outcome == PacketOutcome::Delivered) lat.push_back((*p.delivered_at - p.created_at).us());
  }
  if (lat.empty()) return std::nullopt;
  std::sort(lat.begin(), lat.end());
  double sum = 0.0;
  for (auto v : lat) sum += static_cast<double>(v);
  st.count = static_cast<std::int64_t>(lat.size());
  st.mean_ms = sum / static_cast<double>(lat.size()) / 1e3;
  const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(lat.size())));
  st.p95_ms = static_cast<double>(lat[std::max<std::size_t>(rank, 1) - 1]) / 1e3;
  return st;
}

bool measured(const Trace& trace, const Packet& p) {
  return p.created_at >= trace.warmup && p.deadline < trace.horizon;
}

bool met_deadline(const Packet& p) {
  return p.outcome == PacketOutcome::Delivered && *p.delivered_at <= p.deadline;
}

std::optional<double> AvailabilityResult::value() const {
  if (windows == 0) return std::nullopt;
  return static_cast<double>(windows - violated) / static_cast<double>(windows);
}

AvailabilityResult availability(const Trace& trace, SliceFilter slices, SimTime window) {
  if (window.us() <= 0) throw ConfigError("availability window must be positive");
  const std::int64_t span = (trace.horizon - trace.warmup).us();
  const auto n = static_cast<std::size_t>(std::max<std::int64_t>(0, (span + window.us() - 1) / window.us()));
  // 0 = nothing due, 1 = all due packets on time, 2 = violated
  std::vector<std::uint8_t> state(n, 0);
  for (const Packet& p : trace.packets) {
    if (!slices.contains(p.slice_type) || !measured(trace, p)) continue;
    const auto w = static_cast<std::size_t>((p.deadline - trace.warmup).us() / window.us());
    state[w] = std::max<std::uint8_t>(state[w], met_deadline(p) ? 1 : 2);
  }
  AvailabilityResult r;
  for (auto s : state) {
    if (s != 0) ++r.windows;
    if (s == 2) ++r.violated;
  }
  return r;
}

std::optional<double> prob_availability_above(std::span<const std::optional<double>> per_run, double threshold) {
  std::int64_t n = 0, above = 0;
  for (const auto& a : per_run) {
    if (!a) continue;
    ++n;
    if (*a > threshold) ++above;
  }
  if (n == 0) return std::nullopt;
  return static_cast<double>(above) / static_cast<double>(n);
}

std::optional<double> qos_met_fraction(const Trace& trace, SliceFilter slices) {
  std::int64_t n = 0, ok = 0;
  for (const Packet& p : trace.packets) {
    if (!slices.contains(p.slice_type) || !measured(trace, p)) continue;
    ++n;
    if (met_deadline(p)) ++ok;
  }
  if (n == 0) return std::nullopt;
  return static_cast<double>(ok) / static_cast<double>(n);
}

Summary summarize(std::span<const std::optional<double>> values) {
  Summary s;
  double sum = 0.0;
  for (const auto& v : values)
    if (v) {
      sum += *v;
      ++s.n;
    }
  if (s.n == 0) return s;
  s.mean = sum / static_cast<double>(s.n);
  if (s.n < 2) return s;
  double ss = 0.0;
  for (const auto& v : values)
    if (v) ss += (*v - s.mean) * (*v - s.mean);
  const double sd = std::sqrt(ss / static_cast<double>(s.n - 1));
  s.ci95 = 1.96 * sd / std::sqrt(static_cast<double>(s.n));
  return s;
}

}  // namespace slicesim::metrics
