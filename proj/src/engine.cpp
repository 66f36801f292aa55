#include "voqsim/engine.hpp"

#include <algorithm>
#include <cassert>
#include <future>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace voqsim {

// View over live simulation state for a decision made at `node`. Remote
// occupancies are the same-cycle snapshot of the neighbour's queues
// (processing latency 1); claims can be masked for read-only probes such as
// the deadlock detector.
struct EngineView {
  const Simulation* sim;
  int node;
  bool use_claims = true;

  const Router& local() const { return sim->routers_[static_cast<size_t>(node)]; }
  const Router& remote(Port sel) const {
    const Mesh& m = sim->mesh_;
    return sim->routers_[static_cast<size_t>(m.index(m.neighbor(local().coord(), sel)))];
  }

  int local_occ(Turn t) const { return local().queue(t).occ(); }
  int local_occp(Turn t) const { return local().queue(t).occp(); }
  int remote_occ(Port sel, Turn t) const { return remote(sel).queue(t).occ(); }
  int remote_occp(Port sel, Turn t) const { return remote(sel).queue(t).occp(); }
  int remote_cap(Port, Turn) const { return sim->cfg_.queue_capacity; }
  int claims(Port sel, Turn t) const {
    return use_claims ? sim->claims_[static_cast<size_t>(node)].get(sel, t) : 0;
  }
};

static_assert(OccupancyView<EngineView>);

void SimConfig::validate() const {
  if (width < 1 || height < 1) throw std::invalid_argument("mesh dimensions must be positive");
  if (queue_capacity < 1) throw std::invalid_argument("queue capacity must be positive");
  if (packet_size < 1) throw std::invalid_argument("packet size must be positive");
  if (queue_capacity < packet_size)
    throw std::invalid_argument("queue capacity must fit a whole packet");
  if (roi == 0) throw std::invalid_argument("roi must be positive");
  if (progress_window == 0) throw std::invalid_argument("progress window must be positive");
  Mesh m{width, height};
  if (hotspot_node >= m.nodes()) throw std::invalid_argument("hotspot node out of range");
  if (trace_path.empty()) validate_pattern(pattern, m, rate, burst_mean);
}

DorOrder packet_order_for(std::uint64_t seed, std::uint32_t id) {
  std::uint64_t x = seed + 0x9E3779B97F4A7C15ull * (id + 1);
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return (x & 1) ? DorOrder::YXFirst : DorOrder::XYFirst;
}

Simulation::Simulation(const SimConfig& cfg) : cfg_(cfg) {
  mesh_ = Mesh{cfg_.width, cfg_.height};
  if (cfg_.hotspot_node < 0) cfg_.hotspot_node = default_hotspot(mesh_);
  cfg_.validate();
  policy_ = RoutingPolicy(cfg_.algorithm, mesh_);
  rng_.seed(cfg_.seed);
  const int n = mesh_.nodes();
  routers_.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) routers_.emplace_back(mesh_.coord(i), cfg_.queue_capacity);
  sources_.resize(static_cast<size_t>(n));
  claims_.resize(static_cast<size_t>(n));
  if (!cfg_.trace_path.empty()) trace_ = load_trace(cfg_.trace_path, mesh_, cfg_.trace_strict);
  else traffic_ = TrafficGen(cfg_.pattern, mesh_, cfg_.rate, cfg_.hotspot_node, cfg_.burst_mean);
}

void Simulation::make_packet(int src, int dst, int size) {
  std::uint32_t id = next_packet_id_++;
  ++injected_packets_;
  const bool in_roi = cycle_ >= cfg_.warmup && cycle_ < cfg_.warmup + cfg_.roi;
  if (src == dst) {
    // Consumed at injection; measured with the minimum latency of 1.
    ++delivered_total_;
    size_t w = static_cast<size_t>(cycle_ / cfg_.progress_window);
    if (metrics_.window_deliveries.size() <= w) metrics_.window_deliveries.resize(w + 1, 0);
    ++metrics_.window_deliveries[w];
    if (in_roi) {
      ++delivered_roi_;
      latency_sum_ += 1;
    }
    return;
  }
  flits_injected_ += static_cast<std::uint64_t>(size);
  sources_[static_cast<size_t>(src)].fifo.push_back({id, static_cast<std::uint32_t>(cycle_),
                                                     static_cast<std::uint16_t>(dst),
                                                     static_cast<std::uint16_t>(size),
                                                     packet_order_for(cfg_.seed, id)});
  if (cfg_.latency_threshold > 0) {
    if (done_.size() <= id) done_.resize(id + 1, 0);
    order_.emplace_back(id, static_cast<std::uint32_t>(cycle_));
  }
}

void Simulation::generate_traffic() {
  if (!cfg_.trace_path.empty()) {
    while (trace_pos_ < trace_.size() && trace_[trace_pos_].cycle == cycle_) {
      const TraceEvent& e = trace_[trace_pos_++];
      make_packet(e.src, e.dst, e.size);
    }
    return;
  }
  traffic_.step(rng_, [&](int src, int dst) { make_packet(src, dst, cfg_.packet_size); });
}

Simulation::Plan Simulation::plan_arrival(int node, Port input, const Flit& f) const {
  RouteQuery q;
  q.cur = routers_[static_cast<size_t>(node)].coord();
  q.dst = mesh_.coord(f.dst);
  q.input = input;
  q.packet_size = f.size;
  q.order = f.route_attr;
  EngineView view{this, node, true};
  Plan p;
  p.dec = policy_.decide(q, view);
  assert(admissible_outputs(q.cur, q.dst).contains(p.dec.sel));
  p.ok = routers_[static_cast<size_t>(node)].queue({input, p.dec.sel}).can_accept(f);
  return p;
}

void Simulation::commit_claims(int node, const RoutingPolicy::Decision& dec, int size) {
  if (dec.claimed)
    claims_[static_cast<size_t>(node)].add(dec.claim_sel, dec.claim_target, size);
}

void Simulation::arbitrate_link(int up, Port out, int down) {
  Router& u = routers_[static_cast<size_t>(up)];
  OutputArb& arb = u.out_arb(out);
  const Port down_in = opposite(out);
  if (arb.pinned) {
    TurnQueue& q = u.queue({arb.pin_input, out});
    if (q.empty()) return;  // body flits still in flight further upstream
    const Flit& f = q.front();
    assert(!f.is_head && f.packet_id == arb.pin_packet);
    const LandingPin& lp = routers_[static_cast<size_t>(down)].landing(down_in);
    assert(lp.active && lp.packet == f.packet_id);
    moves_.push_back({static_cast<std::uint16_t>(up), static_cast<std::uint16_t>(down),
                      Turn{arb.pin_input, out}, Turn{down_in, lp.sel}});
    return;
  }
  for (int k = 0; k < 5; ++k) {
    int ii = (arb.rr + k) % 5;
    Turn t{kAllPorts[static_cast<size_t>(ii)], out};
    if (!Router::queue_exists(t)) continue;
    const TurnQueue& q = u.queue(t);
    if (q.empty()) continue;
    const Flit& f = q.front();
    assert(f.is_head);
    Plan p = plan_arrival(down, down_in, f);
    if (!p.ok) continue;
    commit_claims(down, p.dec, f.size);
    moves_.push_back({static_cast<std::uint16_t>(up), static_cast<std::uint16_t>(down), t,
                      Turn{down_in, p.dec.sel}});
    arb.rr = (ii + 1) % 5;
    return;
  }
}

void Simulation::arbitrate_ejection(int node) {
  Router& r = routers_[static_cast<size_t>(node)];
  OutputArb& arb = r.out_arb(Port::C);
  if (arb.pinned) {
    TurnQueue& q = r.queue({arb.pin_input, Port::C});
    if (!q.empty())
      ejects_.push_back({static_cast<std::uint16_t>(node), Turn{arb.pin_input, Port::C}});
    return;
  }
  for (int k = 0; k < 5; ++k) {
    int ii = (arb.rr + k) % 5;
    Turn t{kAllPorts[static_cast<size_t>(ii)], Port::C};
    if (!Router::queue_exists(t)) continue;
    if (r.queue(t).empty()) continue;
    ejects_.push_back({static_cast<std::uint16_t>(node), t});
    arb.rr = (ii + 1) % 5;
    return;
  }
}

void Simulation::decide_injection(int node) {
  Source& s = sources_[static_cast<size_t>(node)];
  if (s.fifo.empty()) return;
  Router& r = routers_[static_cast<size_t>(node)];
  const LandingPin& lp = r.landing(Port::C);
  if (lp.active) {
    // Body flit of the packet being injected; its slot is reserved.
    injects_.push_back({static_cast<std::uint16_t>(node), lp.sel});
    return;
  }
  Flit f = next_source_flit(node);
  assert(f.is_head);
  Plan p = plan_arrival(node, Port::C, f);
  if (!p.ok) return;
  commit_claims(node, p.dec, f.size);
  injects_.push_back({static_cast<std::uint16_t>(node), p.dec.sel});
}

void Simulation::voq_arbitrate(int up) {
  struct Grant {
    bool valid = false;
    bool body = false;
    int input = 0;
    RoutingPolicy::Decision dec{};
  };
  std::array<Grant, 5> grants;
  Router& u = routers_[static_cast<size_t>(up)];
  const Coord uc = u.coord();

  // Grant: each output offers to one requesting queue; a pinned output only
  // serves its in-flight packet.
  for (int oi = 0; oi < 5; ++oi) {
    Port out = kAllPorts[static_cast<size_t>(oi)];
    if (out != Port::C && !mesh_.has_neighbor(uc, out)) continue;
    OutputArb& arb = u.out_arb(out);
    if (arb.pinned) {
      TurnQueue& q = u.queue({arb.pin_input, out});
      if (!q.empty()) {
        grants[static_cast<size_t>(oi)].valid = true;
        grants[static_cast<size_t>(oi)].body = true;
        grants[static_cast<size_t>(oi)].input = static_cast<int>(arb.pin_input);
      }
      continue;
    }
    for (int k = 0; k < 5; ++k) {
      int ii = (arb.rr + k) % 5;
      Turn t{kAllPorts[static_cast<size_t>(ii)], out};
      if (!Router::queue_exists(t)) continue;
      const TurnQueue& q = u.queue(t);
      if (q.empty()) continue;
      if (out == Port::C) {
        grants[static_cast<size_t>(oi)] = {true, false, ii, {}};
        break;
      }
      const Flit& f = q.front();
      assert(f.is_head);
      int down = mesh_.index(mesh_.neighbor(uc, out));
      Plan p = plan_arrival(down, opposite(out), f);
      if (!p.ok) continue;
      grants[static_cast<size_t>(oi)] = {true, false, ii, p.dec};
      break;
    }
  }

  // Accept: each input takes at most one grant, round-robin over outputs.
  // Pointers advance only on acceptance.
  for (int inp = 0; inp < 5; ++inp) {
    Port in_port = kAllPorts[static_cast<size_t>(inp)];
    int chosen = -1;
    for (int k = 0; k < 5; ++k) {
      int oi = (u.accept_rr(in_port) + k) % 5;
      if (grants[static_cast<size_t>(oi)].valid && grants[static_cast<size_t>(oi)].input == inp) {
        chosen = oi;
        break;
      }
    }
    if (chosen < 0) continue;
    const Grant& g = grants[static_cast<size_t>(chosen)];
    Port out = kAllPorts[static_cast<size_t>(chosen)];
    Turn t{in_port, out};
    if (out == Port::C) {
      ejects_.push_back({static_cast<std::uint16_t>(up), t});
    } else {
      int down = mesh_.index(mesh_.neighbor(uc, out));
      const Flit& f = u.queue(t).front();
      Turn to_q{opposite(out), Port::C};
      if (g.body) {
        const LandingPin& lp = routers_[static_cast<size_t>(down)].landing(opposite(out));
        assert(lp.active && lp.packet == f.packet_id);
        to_q.out = lp.sel;
      } else {
        commit_claims(down, g.dec, f.size);
        to_q.out = g.dec.sel;
      }
      moves_.push_back({static_cast<std::uint16_t>(up), static_cast<std::uint16_t>(down), t, to_q});
    }
    u.accept_rr(in_port) = (chosen + 1) % 5;
    OutputArb& arb = u.out_arb(out);
    if (!arb.pinned) arb.rr = (inp + 1) % 5;
  }
}

Flit Simulation::next_source_flit(int node) const {
  const Source& s = sources_[static_cast<size_t>(node)];
  const SourcePacket& p = s.fifo.front();
  Flit f;
  f.packet_id = p.id;
  f.src = static_cast<std::uint16_t>(node);
  f.dst = p.dst;
  f.size = p.size;
  f.inject_cycle = p.inject;
  f.is_head = s.sent == 0;
  f.is_tail = s.sent == p.size - 1;
  f.route_attr = p.attr;
  return f;
}

void Simulation::note_pin_dequeue(Router& r, Turn from_q, const Flit& f) {
  OutputArb& arb = r.out_arb(from_q.out);
  if (f.is_head && !f.is_tail) {
    arb.pinned = true;
    arb.pin_packet = f.packet_id;
    arb.pin_input = from_q.in;
    arb.pin_remaining = f.size - 1;
    return;
  }
  if (!f.is_head) {
    assert(arb.pinned && arb.pin_packet == f.packet_id);
    if (--arb.pin_remaining == 0) arb.pinned = false;
  }
}

void Simulation::note_pin_enqueue(Router& r, Turn to_q, const Flit& f) {
  LandingPin& lp = r.landing(to_q.in);
  if (f.is_head && !f.is_tail) {
    lp.active = true;
    lp.packet = f.packet_id;
    lp.sel = to_q.out;
    lp.remaining = f.size - 1;
    return;
  }
  if (!f.is_head) {
    assert(lp.active && lp.packet == f.packet_id && lp.sel == to_q.out);
    if (--lp.remaining == 0) lp.active = false;
  }
}

void Simulation::record_extraction(const Flit& tail) {
  ++delivered_total_;
  size_t w = static_cast<size_t>(cycle_ / cfg_.progress_window);
  if (metrics_.window_deliveries.size() <= w) metrics_.window_deliveries.resize(w + 1, 0);
  ++metrics_.window_deliveries[w];
  // Extraction happens one stage after the last hop; discounting it makes
  // the minimum observable latency equal the hop count.
  std::uint64_t lat = cycle_ - tail.inject_cycle - 1;
  if (cycle_ >= cfg_.warmup && cycle_ < cfg_.warmup + cfg_.roi) {
    ++delivered_roi_;
    latency_sum_ += lat;
  }
  if (cfg_.latency_threshold > 0 && tail.packet_id < done_.size())
    done_[tail.packet_id] = 1;
}

void Simulation::apply_move(const LinkMove& m) {
  Router& u = routers_[m.from];
  Flit f = u.queue(m.from_q).dequeue();
  note_pin_dequeue(u, m.from_q, f);
  Router& d = routers_[m.to];
  d.queue(m.to_q).enqueue(f);
  note_pin_enqueue(d, m.to_q, f);
}

void Simulation::apply_eject(const Eject& e) {
  Router& r = routers_[e.node];
  Flit f = r.queue(e.q).dequeue();
  note_pin_dequeue(r, e.q, f);
  ++flits_ejected_;
  --network_flits_;
  if (f.is_tail) record_extraction(f);
}

void Simulation::apply_inject(const Inject& i) {
  Source& s = sources_[i.node];
  Flit f = next_source_flit(static_cast<int>(i.node));
  Router& r = routers_[i.node];
  r.queue({Port::C, i.sel}).enqueue(f);
  note_pin_enqueue(r, {Port::C, i.sel}, f);
  ++network_flits_;
  ++s.sent;
  if (f.is_tail) {
    s.fifo.pop_front();
    s.sent = 0;
  }
}

void Simulation::tick() {
  generate_traffic();

  moves_.clear();
  ejects_.clear();
  injects_.clear();
  for (CycleClaims& c : claims_) c.reset();

  const int n = mesh_.nodes();
  if (cfg_.mode == QueueMode::OQ) {
    // Arrivals of one router are arbitrated in fixed input-port priority
    // order (E, S, W, N, then injection through C); the freedom condition
    // claims accumulate in that order.
    for (int d = 0; d < n; ++d) {
      Coord dc = mesh_.coord(d);
      for (Port inp : kCompassPorts) {
        if (!mesh_.has_neighbor(dc, inp)) continue;
        arbitrate_link(mesh_.index(mesh_.neighbor(dc, inp)), opposite(inp), d);
      }
      decide_injection(d);
      arbitrate_ejection(d);
    }
  } else {
    for (int up = 0; up < n; ++up) voq_arbitrate(up);
    for (int d = 0; d < n; ++d) decide_injection(d);
  }

  for (const Eject& e : ejects_) apply_eject(e);
  for (const LinkMove& m : moves_) apply_move(m);
  for (const Inject& i : injects_) apply_inject(i);

  const bool moved = !(moves_.empty() && ejects_.empty() && injects_.empty());
  quiescent_streak_ = (!moved && network_flits_ > 0) ? quiescent_streak_ + 1 : 0;

  const bool cadence = cfg_.detector_period > 0 && cycle_ > 0 &&
                       cycle_ % cfg_.detector_period == 0;
  if (cadence || quiescent_streak_ >= 3) {
    if (auto dl = find_deadlock()) {
      dl->cycle = cycle_;
      metrics_.deadlock = std::move(*dl);
      stopped_ = true;
    }
    quiescent_streak_ = 0;
  }

  if (!stopped_ && cfg_.latency_threshold > 0) {
    if (delivered_roi_ > 0 &&
        static_cast<double>(latency_sum_) / static_cast<double>(delivered_roi_) >
            cfg_.latency_threshold) {
      metrics_.early_stopped = true;
      stopped_ = true;
    } else {
      while (!order_.empty() && done_[order_.front().first]) order_.pop_front();
      if (!order_.empty() &&
          static_cast<double>(cycle_ - order_.front().second) > 2 * cfg_.latency_threshold) {
        metrics_.early_stopped = true;
        stopped_ = true;
      }
    }
  }

  ++cycle_;
}

RunMetrics Simulation::run() {
  const std::uint64_t duration = cfg_.duration();
  while (cycle_ < duration && !stopped_) tick();
  metrics_.injected_packets = injected_packets_;
  metrics_.delivered = delivered_roi_;
  metrics_.delivered_total = delivered_total_;
  metrics_.avg_latency =
      delivered_roi_ ? static_cast<double>(latency_sum_) / static_cast<double>(delivered_roi_)
                     : 0.0;
  std::uint64_t roi_elapsed =
      cycle_ > cfg_.warmup ? std::min<std::uint64_t>(cycle_ - cfg_.warmup, cfg_.roi) : 0;
  metrics_.throughput = roi_elapsed ? static_cast<double>(delivered_roi_) /
                                          (static_cast<double>(mesh_.nodes()) *
                                           static_cast<double>(roi_elapsed))
                                    : 0.0;
  metrics_.cycles_run = cycle_;
  return metrics_;
}

bool Simulation::lookahead_can_forward(int node, Turn q) const {
  const TurnQueue& tq = routers_[static_cast<size_t>(node)].queue(q);
  if (tq.empty()) throw std::logic_error("lookahead on empty queue");
  if (q.out == Port::C) return true;  // sink drains one flit per cycle
  const Flit& f = tq.front();
  if (!f.is_head) return true;  // body flits go to reserved space
  int down = mesh_.index(mesh_.neighbor(routers_[static_cast<size_t>(node)].coord(), q.out));
  return plan_arrival(down, opposite(q.out), f).ok;
}

bool Simulation::freedom_eval(int node, int dst_node, Port sel, int packet_size) const {
  EngineView view{this, node, true};
  return eval_F(mesh_, policy_.gate().empty() ? freedom_restriction(Algorithm::XY) : policy_.gate(),
                routers_[static_cast<size_t>(node)].coord(), mesh_.coord(dst_node), sel,
                packet_size, view);
}

bool Simulation::freedom_eval_prime(int node, int dst_node, Port sel) const {
  EngineView view{this, node, true};
  return eval_F_prime(mesh_, routers_[static_cast<size_t>(node)].coord(), mesh_.coord(dst_node),
                      sel, view);
}

void Simulation::test_fill_queue(int node, Turn t, int flits, int dst_node) {
  Router& r = routers_[static_cast<size_t>(node)];
  for (int i = 0; i < flits; ++i) {
    Flit f;
    f.packet_id = 0x40000000u + next_packet_id_++;
    f.src = static_cast<std::uint16_t>(node);
    f.dst = static_cast<std::uint16_t>(dst_node);
    f.size = 1;
    f.inject_cycle = static_cast<std::uint32_t>(cycle_);
    r.queue(t).enqueue(f);
    ++flits_injected_;
    ++network_flits_;
  }
}

void Simulation::test_push_packet(int node, int dst_node, int size) {
  make_packet(node, dst_node, size);
}

std::uint64_t Simulation::count_flits_in_sources() const {
  std::uint64_t n = 0;
  for (const Source& s : sources_) {
    for (const SourcePacket& p : s.fifo) n += p.size;
    n -= static_cast<std::uint64_t>(s.sent);
  }
  return n;
}

std::uint64_t Simulation::count_flits_in_network() const {
  std::uint64_t n = 0;
  for (const Router& r : routers_) n += static_cast<std::uint64_t>(r.occupied_flits());
  return n;
}

std::optional<DeadlockReport> Simulation::find_deadlock() const {
  // Wait-for graph per the cyclic-dependency definition: nodes are full
  // compass-output queues whose head flit cannot be forwarded; edges go to
  // the full queues among the head's possible next-hop landings. Sink
  // queues drain unconditionally and so never appear in a cycle.
  struct Cand {
    int node;
    Turn turn;
  };
  std::vector<Cand> cands;
  std::unordered_map<int, int> index_of;  // node * 25 + turn id -> candidate index
  const int n = mesh_.nodes();
  for (int r = 0; r < n; ++r) {
    const Router& router = routers_[static_cast<size_t>(r)];
    for (Port out : kCompassPorts) {
      if (!mesh_.has_neighbor(router.coord(), out)) continue;
      for (Port in : kAllPorts) {
        Turn t{in, out};
        if (!Router::queue_exists(t)) continue;
        const TurnQueue& q = router.queue(t);
        if (q.occ() < q.capacity()) continue;
        const Flit& f = q.front();
        if (!f.is_head) continue;  // draining remnant, always forwardable
        int down = mesh_.index(mesh_.neighbor(router.coord(), out));
        RouteQuery rq;
        rq.cur = mesh_.coord(down);
        rq.dst = mesh_.coord(f.dst);
        rq.input = opposite(out);
        rq.packet_size = f.size;
        rq.order = f.route_attr;
        EngineView view{this, down, false};
        RoutingPolicy::Decision dec = policy_.decide(rq, view);
        if (routers_[static_cast<size_t>(down)].queue({rq.input, dec.sel}).can_accept(f))
          continue;  // not blocked
        index_of.emplace(r * kTurnCount + t.id(), static_cast<int>(cands.size()));
        cands.push_back({r, t});
      }
    }
  }
  if (cands.empty()) return std::nullopt;

  std::vector<std::array<int, 2>> edges(cands.size(), {-1, -1});
  for (size_t i = 0; i < cands.size(); ++i) {
    const Cand& c = cands[i];
    const Router& router = routers_[static_cast<size_t>(c.node)];
    const Flit& f = router.queue(c.turn).front();
    int down = mesh_.index(mesh_.neighbor(router.coord(), c.turn.out));
    NextQueues nq = next_queues(mesh_, router.coord(), mesh_.coord(f.dst), c.turn.out);
    int ne = 0;
    for (int k = 0; k < nq.n; ++k) {
      auto it = index_of.find(down * kTurnCount + nq.q[static_cast<size_t>(k)].id());
      if (it != index_of.end()) edges[i][static_cast<size_t>(ne++)] = it->second;
    }
  }

  // Iterative DFS, 0 = unvisited, 1 = on stack, 2 = done.
  std::vector<std::uint8_t> color(cands.size(), 0);
  std::vector<int> parent(cands.size(), -1);
  for (size_t root = 0; root < cands.size(); ++root) {
    if (color[root]) continue;
    std::vector<std::pair<int, int>> stack{{static_cast<int>(root), 0}};
    color[root] = 1;
    while (!stack.empty()) {
      auto& [v, ei] = stack.back();
      if (ei < 2 && edges[static_cast<size_t>(v)][static_cast<size_t>(ei)] >= 0) {
        int w = edges[static_cast<size_t>(v)][static_cast<size_t>(ei)];
        ++ei;
        if (color[static_cast<size_t>(w)] == 1) {
          // Found a cycle; walk parents from v back to w.
          DeadlockReport rep;
          std::vector<std::pair<int, Turn>> chain;
          for (int x = v; x != -1; x = parent[static_cast<size_t>(x)]) {
            chain.emplace_back(cands[static_cast<size_t>(x)].node,
                               cands[static_cast<size_t>(x)].turn);
            if (x == w) break;
          }
          rep.cycle_queues.assign(chain.rbegin(), chain.rend());
          return rep;
        }
        if (color[static_cast<size_t>(w)] == 0) {
          color[static_cast<size_t>(w)] = 1;
          parent[static_cast<size_t>(w)] = v;
          stack.emplace_back(w, 0);
        }
      } else {
        color[static_cast<size_t>(v)] = 2;
        stack.pop_back();
      }
    }
  }
  return std::nullopt;
}

RunMetrics simulate(const SimConfig& cfg) { return Simulation(cfg).run(); }

std::vector<SweepRow> sweep(const SimConfig& base, const std::vector<double>& rates,
                            const std::vector<std::uint64_t>& seeds, int jobs) {
  if (seeds.empty()) throw std::invalid_argument("sweep needs at least one seed");
  if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::vector<SweepRow> rows;
  for (double rate : rates) {
    std::vector<RunMetrics> ms(seeds.size());
    for (size_t start = 0; start < seeds.size(); start += static_cast<size_t>(jobs)) {
      size_t end = std::min(seeds.size(), start + static_cast<size_t>(jobs));
      std::vector<std::future<RunMetrics>> futs;
      for (size_t i = start; i < end; ++i) {
        SimConfig cfg = base;
        cfg.rate = rate;
        cfg.seed = seeds[i];
        futs.push_back(std::async(std::launch::async, [cfg] { return simulate(cfg); }));
      }
      for (size_t i = start; i < end; ++i) ms[i] = futs[i - start].get();
    }
    bool rate_stopped = false;
    SweepRow mean;
    mean.rate = rate;
    mean.mean = true;
    double lat = 0, thr = 0, del = 0;
    for (size_t i = 0; i < seeds.size(); ++i) {
      rows.push_back({rate, seeds[i], false, ms[i]});
      lat += ms[i].avg_latency;
      thr += ms[i].throughput;
      del += static_cast<double>(ms[i].delivered);
      mean.metrics.early_stopped |= ms[i].early_stopped;
      if (ms[i].deadlock && !mean.metrics.deadlock) mean.metrics.deadlock = ms[i].deadlock;
      rate_stopped |= ms[i].early_stopped || ms[i].deadlock.has_value();
    }
    const double k = static_cast<double>(seeds.size());
    mean.metrics.avg_latency = lat / k;
    mean.metrics.throughput = thr / k;
    mean.metrics.delivered = static_cast<std::uint64_t>(del / k + 0.5);
    rows.push_back(std::move(mean));
    if (rate_stopped) break;  // the series stops past a saturated rate
  }
  return rows;
}

}  // namespace voqsim
