#include "slicesim/engine/simulator.hpp"

#include <algorithm>
#include <deque>

#include "slicesim/core/rng.hpp"
#include "slicesim/engine/event_queue.hpp"
#include "slicesim/sched/elastic.hpp"
#include "slicesim/sched/scheduler.hpp"

namespace slicesim::engine {

namespace {

enum Purpose : std::uint64_t { kEmbbTraffic = 1, kFwaChannel, kFwaBler, kWlanChannel, kWlanBler };

constexpr SliceId kEmbbSlice = 0;
constexpr FlowId kEmbbFlow = 0;

SliceId patient_slice(std::uint32_t patient) { return patient + 1; }

struct HealthSource {
  std::uint32_t patient = 0;
  std::size_t sta = 0;  // index within the patient's flow list
  FlowId flow = 0;
  bool emergency = false;
  bool active = false;
  std::uint32_t generation = 0;
};

struct EmbbFeed {
  std::uint32_t rg = 0;
  traffic::EmbbSource source;
  traffic::Arrival pending;
};

struct Home {
  std::uint32_t patient = 0;
  std::uint32_t rg = 0;
  std::vector<sched::SliceQueue> queues;  // one per station
  std::vector<std::deque<sched::QueuedPacket>> pending;  // inside the access delay
  std::vector<phy::FadingChannel> channels;
  std::vector<Rng> bler;
  sched::QuotaBook quotas;
};

struct Completion {
  std::size_t queue;
  std::size_t flow;
  std::size_t position;
  PacketOutcome outcome;
};

class Simulator {
public:
  explicit Simulator(const Scenario& sc) : sc_(sc) {}

  RunResult run() {
    setup();
    for (Event e = events_.pop();; e = events_.pop()) {
      now_ = e.at;
      if (e.type == EventType::End) break;
      switch (e.type) {
        case EventType::SliceRequest: on_slice_request(e.target); break;
        case EventType::SliceEffective: on_slice_effective(e.target); break;
        case EventType::Arrival: on_arrival(e); break;
        case EventType::Tick: on_tick(); break;
        case EventType::End: break;
      }
    }
    finish();
    return std::move(result_);
  }

private:
  // ---- setup ---------------------------------------------------------------

  void setup() {
    sc_.validate();
    const auto& cat = sc_.traffic.catalog;
    interval_ = SimTime::from_ms(sc_.fwa.grid.interval_ms);
    end_ = SimTime::from_ms(sc_.duration_ms);
    sliced_ = sc_.policy.policy != sched::Policy::Basic;
    elastic_ = sc_.policy.policy == sched::Policy::Elastic;

    auto& flows = result_.trace.flows;
    flows.push_back({"eMBB", survival_ms(sc_.traffic.embb_qos, sc_.traffic.survival_rule)});
    flow_qos_.push_back(sc_.traffic.embb_qos);
    for (const auto* group : {&cat.regular_flows, &cat.emergency_flows})
      for (const auto& f : *group) {
        flows.push_back({f.device_name, survival_ms(f.qos, sc_.traffic.survival_rule)});
        flow_qos_.push_back(f.qos);
        flow_specs_.push_back(&f);
      }
    result_.trace.warmup = SimTime::from_ms(sc_.warmup_ms);
    result_.trace.horizon = end_;

    slices_.push_back(SliceInstance{kEmbbSlice, SliceType::Embb, {kEmbbFlow}, false, sc_.policy.alpha});
    for (std::uint32_t p = 0; p < sc_.patients.size(); ++p) {
      SliceInstance s{patient_slice(p), SliceType::RegularMonitoring, {}, true, sc_.policy.beta};
      for (FlowId f = 1; f < flows.size(); ++f) s.flows.push_back(f);
      slices_.push_back(s);
    }

    const auto n_active = static_cast<std::uint32_t>(sc_.active_rg_count());
    setup_fwa(n_active);
    if (sc_.traffic.healthcare_enabled) setup_homes();
    if (sc_.traffic.embb_enabled) {
      for (std::uint32_t rg = 0; rg < n_active; ++rg) {
        EmbbFeed feed{rg, traffic::EmbbSource(sc_.traffic.embb, make_rng(sc_.seed, rg, kEmbbTraffic)), {}};
        feed.pending = feed.source.next();
        embb_.push_back(std::move(feed));
        push_arrival(static_cast<std::uint32_t>(health_.size() + embb_.size() - 1), embb_.back().pending.at, 0);
      }
    }
    for (std::uint32_t i = 0; i < sc_.events.size(); ++i)
      events_.push(Event{sc_.events[i].at, EventType::SliceRequest, i});
    events_.push(Event{SimTime{}, EventType::Tick});
    events_.push(Event{end_, EventType::End});
  }

  void setup_fwa(std::uint32_t n_active) {
    patient_fwa_queue_.assign(sc_.patients.size(), 0);
    for (std::uint32_t rg = 0; rg < n_active; ++rg) {
      rg_channels_.emplace_back(sc_.fwa.channel, make_rng(sc_.seed, rg, kFwaChannel));
      rg_bler_.push_back(make_rng(sc_.seed, rg, kFwaBler));
      sched::SliceQueue q;
      q.slice = kEmbbSlice;
      q.type = SliceType::Embb;
      q.weight = sliced_ ? sc_.policy.alpha : 1.0;
      q.link.target_bler = sc_.fwa.target_bler;
      // Without slicing a gateway keeps one pooled FIFO for all of its traffic.
      q.flows.push_back(sched::FlowQueue{kEmbbFlow, sliced_ ? &flow_qos_[kEmbbFlow] : nullptr, {}});
      rg_embb_queue_.push_back(fwa_queues_.size());
      fwa_queue_rg_.push_back(rg);
      fwa_queues_.push_back(std::move(q));
    }
    if (!sc_.traffic.healthcare_enabled) return;
    for (std::uint32_t p = 0; p < sc_.patients.size(); ++p) {
      const std::uint32_t rg = sc_.patients[p].home_rg;
      if (!sliced_) {
        patient_fwa_queue_[p] = rg_embb_queue_[rg];
        continue;
      }
      sched::SliceQueue q;
      q.slice = patient_slice(p);
      q.type = SliceType::RegularMonitoring;
      q.weight = sc_.policy.beta;
      q.priority = elastic_;
      q.link.target_bler = sc_.fwa.target_bler;
      for (FlowId f = 1; f < flow_qos_.size(); ++f) q.flows.push_back(sched::FlowQueue{f, &flow_qos_[f], {}});
      patient_fwa_queue_[p] = fwa_queues_.size();
      fwa_queue_rg_.push_back(rg);
      fwa_queues_.push_back(std::move(q));
    }
  }

  void setup_homes() {
    const std::size_t n_regular = sc_.traffic.catalog.regular_flows.size();
    for (std::uint32_t p = 0; p < sc_.patients.size(); ++p) {
      Home h;
      h.patient = p;
      h.rg = sc_.patients[p].home_rg;
      for (FlowId f = 1; f < flow_qos_.size(); ++f) {
        const std::size_t sta = f - 1;
        const std::uint64_t entity = (static_cast<std::uint64_t>(p) << 16) | sta;
        sched::SliceQueue q;
        q.slice = patient_slice(p);
        q.type = SliceType::RegularMonitoring;
        q.weight = sliced_ ? sc_.policy.beta : 1.0;
        q.priority = elastic_;
        q.link.target_bler = sc_.wlan.target_bler;
        q.flows.push_back(sched::FlowQueue{f, &flow_qos_[f], {}});
        h.queues.push_back(std::move(q));
        h.pending.emplace_back();
        h.channels.emplace_back(sc_.wlan.channel, make_rng(sc_.seed, entity, kWlanChannel));
        h.bler.push_back(make_rng(sc_.seed, entity, kWlanBler));

        HealthSource src{p, sta, f, sta >= n_regular, sta < n_regular, 0};
        health_.push_back(src);
        if (src.active) push_arrival(static_cast<std::uint32_t>(health_.size() - 1), SimTime{}, 0);
      }
      homes_.push_back(std::move(h));
    }
  }

  void push_arrival(std::uint32_t source, SimTime at, std::uint32_t generation) {
    if (at < end_) events_.push(Event{at, EventType::Arrival, source, generation});
  }

  // ---- slice control -------------------------------------------------------

  void on_slice_request(std::uint32_t index) {
    const auto& ev = sc_.events[index];
    SliceInstance& slice = slices_[patient_slice(ev.patient)];
    TransitionRecord rec{ev.patient, ev.kind, ev.at, std::nullopt, {}};
    const auto r = slicing::apply_event(slice, ev, sc_.activation);
    if (r.accepted) {
      rec.effective = r.effective_at;
      events_.push(Event{r.effective_at, EventType::SliceEffective, ev.patient});
    } else {
      rec.rejection = r.reason;
    }
    result_.transitions.push_back(rec);
  }

  void on_slice_effective(std::uint32_t patient) {
    SliceInstance& slice = slices_[patient_slice(patient)];
    slicing::complete_transition(slice, sc_.policy.beta);
    const bool emergency = slice.current_type == SliceType::Emergency;
    if (sliced_) fwa_queues_[patient_fwa_queue_[patient]].type = slice.current_type;
    if (sc_.traffic.healthcare_enabled) {
      for (auto& q : homes_[patient].queues) q.type = slice.current_type;
    }
    for (std::uint32_t i = 0; i < health_.size(); ++i) {
      HealthSource& src = health_[i];
      if (src.patient != patient || !src.emergency) continue;
      ++src.generation;
      src.active = emergency;
      if (emergency) push_arrival(i, now_, src.generation);
    }
  }

  // ---- arrivals ------------------------------------------------------------

  Packet& new_packet(FlowId flow, SliceId slice, std::int64_t bits, SimTime deadline) {
    Packet p;
    p.id = result_.trace.packets.size();
    p.flow_ref = flow;
    p.slice_ref = slice;
    p.slice_type = slices_[slice].current_type;
    p.size_bits = bits;
    p.created_at = now_;
    p.deadline = deadline;
    result_.trace.packets.push_back(p);
    return result_.trace.packets.back();
  }

  void on_arrival(const Event& e) {
    if (e.target < health_.size()) {
      HealthSource& src = health_[e.target];
      if (!src.active || e.generation != src.generation) return;
      const FlowSpec& spec = *flow_specs_[src.flow - 1];
      const auto next = traffic::next_packet(spec, now_, sc_.traffic.survival_rule);
      Packet& p = new_packet(src.flow, patient_slice(src.patient), next.packet.size_bits, next.packet.deadline);
      sched::QueuedPacket qp{p.id, p.created_at, p.deadline, p.created_at, SimTime{}, p.size_bits, 0};
      homes_[src.patient].pending[src.sta].push_back(qp);
      push_arrival(e.target, next.next_arrival, src.generation);
      return;
    }
    EmbbFeed& feed = embb_[e.target - health_.size()];
    const SimTime deadline = deadline_of(now_, sc_.traffic.embb_qos, sc_.traffic.survival_rule);
    Packet& p = new_packet(kEmbbFlow, kEmbbSlice, feed.pending.bits, deadline);
    p.enqueued_rg_at = now_;
    fwa_queues_[rg_embb_queue_[feed.rg]].flows[0].packets.push_back(
        sched::QueuedPacket{p.id, p.created_at, p.deadline, now_, SimTime{}, p.size_bits, 0});
    feed.pending = feed.source.next();
    push_arrival(e.target, feed.pending.at, 0);
  }

  // ---- scheduling ----------------------------------------------------------

  std::int64_t active_rate_bps(std::uint32_t patient) const {
    const bool emergency = slices_[patient_slice(patient)].current_type == SliceType::Emergency;
    std::int64_t rate = 0;
    for (const auto& src : health_)
      if (src.patient == patient && (!src.emergency || emergency)) rate += flow_qos_[src.flow].agg_rate_bps;
    return rate;
  }

  void refresh_quotas() {
    const SimTime window = SimTime::from_ms(sc_.policy.window_ms);
    const std::int64_t per_window = sc_.policy.window_ms / sc_.fwa.grid.interval_ms;

    // Gateway side: every slice with a queue at the gNB hop.
    {
      std::vector<sched::DemandEstimate> demands;
      auto demand_for = [&](SliceId slice, SliceType type, std::int64_t rate) {
        std::int64_t backlog = 0;
        double bpu = 0.0;
        int n = 0;
        for (const auto& q : fwa_queues_) {
          if (q.slice != slice) continue;
          backlog += q.backlog_bits();
          bpu += bits_per_unit(q.link, sc_.fwa.grid);
          ++n;
        }
        if (n > 0) demands.push_back(sched::estimate_demand(slice, type, rate, backlog, bpu / n, window));
      };
      if (!embb_.empty())
        demand_for(kEmbbSlice, SliceType::Embb,
                   static_cast<std::int64_t>(embb_.size()) * sc_.traffic.embb.mean_rate_bps);
      for (std::uint32_t p = 0; p < homes_.size(); ++p)
        demand_for(patient_slice(p), slices_[patient_slice(p)].current_type, active_rate_bps(p));
      check_quotas(fwa_quotas_);
      fwa_quotas_.reset(demands, sched::elastic_scale(demands, usable_units(sc_.fwa.grid) * per_window));
    }

    // In-home side: stations report their buffers to the access point.
    for (auto& h : homes_) {
      std::int64_t backlog = 0;
      double bpu = 0.0;
      for (const auto& q : h.queues) {
        backlog += sched::report_buffer_status(q, now_).queued_bits;
        bpu += bits_per_unit(q.link, sc_.wlan.grid);
      }
      const SliceId slice = patient_slice(h.patient);
      std::vector<sched::DemandEstimate> demands{sched::estimate_demand(
          slice, slices_[slice].current_type, active_rate_bps(h.patient), backlog,
          bpu / static_cast<double>(h.queues.size()), window)};
      check_quotas(h.quotas);
      h.quotas.reset(demands, sched::elastic_scale(demands, usable_units(sc_.wlan.grid) * per_window));
    }
  }

  void check_quotas(const sched::QuotaBook& book) {
    for (const auto& e : book.entries())
      if (e.used > e.quota) ++result_.stats.quota_violations;
  }

  void drop_queues(std::vector<sched::SliceQueue>& queues) {
    const SimTime horizon = now_ + interval_;  // earliest possible completion
    for (auto& q : queues)
      for (const auto& d : sched::drop_expired(q, horizon)) {
        Packet& p = result_.trace.packets[d.id];
        p.outcome = PacketOutcome::DroppedExpired;
      }
  }

  /// Applies the decisions of one interval; returns bits served per queue.
  std::vector<std::int64_t> serve(std::vector<sched::SliceQueue>& queues,
                                  const std::vector<sched::HopAllocation>& alloc, const phy::HopConfig& hop,
                                  auto&& rng_for, auto&& on_delivered) {
    std::vector<std::int64_t> served(queues.size(), 0);
    std::vector<Completion> done;
    std::int64_t units = 0;
    for (const auto& a : alloc) {
      units += a.units;
      sched::SliceQueue& q = queues[a.queue];
      sched::QueuedPacket& qp = q.flows[a.flow].packets[a.position];
      if (hop.grid.hop == Hop::Fwa) {
        Packet& p = result_.trace.packets[qp.id];
        if (!p.fwa_first_service) p.fwa_first_service = now_;
      }
      if (sc_.record_allocations)
        result_.allocations.push_back(AllocationRecord{now_, hop.grid.hop, q.slice, qp.id, a.units});
      const auto tx = phy::transmit(qp.remaining_bits, a.units, q.link, hop, rng_for(a.queue), qp.failures);
      qp.failures = tx.retx_count;
      if (tx.success) {
        qp.remaining_bits -= tx.bits_served;
        served[a.queue] += tx.bits_served;
        if (qp.remaining_bits <= 0) done.push_back({a.queue, a.flow, a.position, PacketOutcome::Delivered});
      } else if (tx.lost) {
        done.push_back({a.queue, a.flow, a.position, PacketOutcome::LostRetx});
      }
    }
    const std::int64_t usable = usable_units(hop.grid);
    result_.stats.max_overallocation = std::max(result_.stats.max_overallocation, units - usable);
    (hop.grid.hop == Hop::Fwa ? result_.stats.fwa_units_allocated : result_.stats.wlan_units_allocated) += units;
    if (units < usable) check_work_conservation(queues, alloc, hop);

    // Remove finished packets, highest position first so indices stay valid.
    std::sort(done.begin(), done.end(), [](const Completion& a, const Completion& b) {
      if (a.queue != b.queue) return a.queue < b.queue;
      if (a.flow != b.flow) return a.flow < b.flow;
      return a.position > b.position;
    });
    for (const auto& c : done) {
      auto& fifo = queues[c.queue].flows[c.flow].packets;
      const sched::QueuedPacket qp = fifo[c.position];
      fifo.erase(fifo.begin() + static_cast<std::ptrdiff_t>(c.position));
      if (c.outcome == PacketOutcome::LostRetx) {
        result_.trace.packets[qp.id].outcome = PacketOutcome::LostRetx;
      } else {
        on_delivered(qp, c.queue);
      }
    }
    return served;
  }

  void check_work_conservation(const std::vector<sched::SliceQueue>& queues,
                               const std::vector<sched::HopAllocation>& alloc, const phy::HopConfig& hop) {
    std::int64_t needed = 0, granted = 0;
    for (const auto& q : queues) {
      const double bpu = bits_per_unit(q.link, hop.grid);
      for (const auto& fq : q.flows)
        for (const auto& p : fq.packets) needed += sched::units_needed(p.remaining_bits, bpu);
    }
    for (const auto& a : alloc) granted += a.units;
    if (granted < needed) ++result_.stats.work_conservation_violations;
  }

  void update_rates(std::vector<sched::SliceQueue>& queues, const std::vector<std::int64_t>& served) {
    for (std::size_t i = 0; i < queues.size(); ++i)
      queues[i].link = sched::update_avg_rate(queues[i].link, served[i], interval_, sc_.policy.ewma_factor);
  }

  void fwa_interval() {
    for (std::size_t i = 0; i < fwa_queues_.size(); ++i)
      fwa_queues_[i].link.spectral_efficiency = rg_channels_[fwa_queue_rg_[i]].efficiency_at(now_);
    if (elastic_) drop_queues(fwa_queues_);
    const auto alloc = sched::schedule_interval(fwa_queues_, sc_.fwa.grid, sc_.policy, now_,
                                                elastic_ ? &fwa_quotas_ : nullptr);
    const SimTime done_at = now_ + interval_;
    const auto served = serve(
        fwa_queues_, alloc, sc_.fwa, [&](std::size_t q) -> Rng& { return rg_bler_[fwa_queue_rg_[q]]; },
        [&](const sched::QueuedPacket& qp, std::size_t) {
          Packet& p = result_.trace.packets[qp.id];
          p.outcome = PacketOutcome::Delivered;
          p.delivered_at = done_at;
        });
    update_rates(fwa_queues_, served);
  }

  void wlan_interval(Home& h) {
    const SimTime access = SimTime::from_ms(sc_.wlan.access_delay_ms);
    for (std::size_t s = 0; s < h.queues.size(); ++s) {
      auto& pend = h.pending[s];
      while (!pend.empty() && pend.front().created_at + access <= now_) {
        h.queues[s].flows[0].packets.push_back(pend.front());
        pend.pop_front();
      }
      h.queues[s].link.spectral_efficiency = h.channels[s].efficiency_at(now_);
    }
    if (elastic_) drop_queues(h.queues);
    const auto alloc = sched::schedule_interval(h.queues, sc_.wlan.grid, sc_.policy, now_,
                                                elastic_ ? &h.quotas : nullptr);
    const SimTime done_at = now_ + interval_;
    const std::size_t fwa_queue = patient_fwa_queue_[h.patient];
    const auto served = serve(
        h.queues, alloc, sc_.wlan, [&](std::size_t q) -> Rng& { return h.bler[q]; },
        [&](const sched::QueuedPacket& qp, std::size_t sta) {
          Packet& p = result_.trace.packets[qp.id];
          p.enqueued_rg_at = done_at;
          p.hop1_delay = done_at - p.created_at;
          sched::QueuedPacket at_rg{qp.id, qp.created_at, qp.deadline, done_at, p.hop1_delay, p.size_bits, 0};
          auto& q = fwa_queues_[fwa_queue];
          q.flows[sliced_ ? sta : 0].packets.push_back(at_rg);
        });
    update_rates(h.queues, served);
  }

  void on_tick() {
    ++result_.stats.intervals;
    if (elastic_ && now_.us() % SimTime::from_ms(sc_.policy.window_ms).us() == 0) refresh_quotas();
    // The gNB hop goes first so that packets finishing hop 1 in this interval
    // are only eligible from the next one.
    fwa_interval();
    for (auto& h : homes_) wlan_interval(h);
    if (now_ + interval_ < end_) events_.push(Event{now_ + interval_, EventType::Tick});
  }

  void finish() {
    auto& st = result_.stats;
    for (const Packet& p : result_.trace.packets) {
      ++st.generated;
      switch (p.outcome) {
        case PacketOutcome::Delivered: ++st.delivered; break;
        case PacketOutcome::DroppedExpired: ++st.dropped_expired; break;
        case PacketOutcome::LostRetx: ++st.lost_retx; break;
        case PacketOutcome::InFlight: ++st.in_flight; break;
      }
    }
  }

  const Scenario& sc_;
  RunResult result_;
  EventQueue events_;
  SimTime now_;
  SimTime interval_;
  SimTime end_;
  bool sliced_ = false;
  bool elastic_ = false;

  std::vector<QoSProfile> flow_qos_;         // by FlowId
  std::vector<const FlowSpec*> flow_specs_;  // by FlowId - 1
  std::vector<SliceInstance> slices_;        // by SliceId
  std::vector<HealthSource> health_;
  std::vector<EmbbFeed> embb_;
  std::vector<Home> homes_;

  std::vector<sched::SliceQueue> fwa_queues_;
  std::vector<std::uint32_t> fwa_queue_rg_;
  std::vector<std::size_t> rg_embb_queue_;
  std::vector<std::size_t> patient_fwa_queue_;
  std::vector<phy::FadingChannel> rg_channels_;
  std::vector<Rng> rg_bler_;
  sched::QuotaBook fwa_quotas_;
};

}  // namespace

RunResult run(const Scenario& scenario) { return Simulator(scenario).run(); }

}  // namespace slicesim::engine
