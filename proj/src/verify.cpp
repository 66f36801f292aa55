#include "voqsim/verify.hpp"

#include <algorithm>
#include <future>
#include <sstream>
#include <thread>

#include "voqsim/freedom.hpp"
#include "voqsim/queueing.hpp"

namespace voqsim {

namespace {

int effective_jobs(int jobs) {
  return jobs > 0 ? jobs : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

// Run many independent simulations, bounded concurrency, stable order.
std::vector<RunMetrics> run_batch(const std::vector<SimConfig>& cfgs, int jobs) {
  jobs = effective_jobs(jobs);
  std::vector<RunMetrics> out(cfgs.size());
  for (size_t start = 0; start < cfgs.size(); start += static_cast<size_t>(jobs)) {
    size_t end = std::min(cfgs.size(), start + static_cast<size_t>(jobs));
    std::vector<std::future<RunMetrics>> futs;
    for (size_t i = start; i < end; ++i) {
      SimConfig c = cfgs[i];
      futs.push_back(std::async(std::launch::async, [c] { return simulate(c); }));
    }
    for (size_t i = start; i < end; ++i) out[i] = futs[i - start].get();
  }
  return out;
}

std::string cell_name(const SimConfig& c) {
  std::ostringstream os;
  os << algorithm_name(c.algorithm) << " " << c.width << "x" << c.height << " "
     << queue_mode_name(c.mode) << " depth=" << c.queue_capacity << " "
     << pattern_name(c.pattern) << " seed=" << c.seed;
  return os.str();
}

}  // namespace

std::vector<Pattern> valid_patterns(const Mesh& mesh) {
  std::vector<Pattern> out;
  for (int i = 0; i <= static_cast<int>(Pattern::Hotspot); ++i) {
    auto p = static_cast<Pattern>(i);
    try {
      validate_pattern(p, mesh, 0.5, 8.0);
      out.push_back(p);
    } catch (const std::exception&) {
    }
  }
  return out;
}

CheckResult check_turn_enumeration() {
  CheckResult r{"turn-model enumeration", false, ""};
  auto combos = legal_turn_combinations();
  if (combos.size() != 12) {
    r.detail = "expected 12 combinations, got " + std::to_string(combos.size());
    return r;
  }
  int excluded = 0;
  for (int cw_id = 0; cw_id < kTurnCount; ++cw_id) {
    Turn a = Turn::from_id(cw_id);
    if (classify_turn(a) != TurnClass::Clockwise) continue;
    for (int ccw_id = 0; ccw_id < kTurnCount; ++ccw_id) {
      Turn b = Turn::from_id(ccw_id);
      if (classify_turn(b) != TurnClass::CounterClockwise) continue;
      if (turn_diagonal(a) == turn_diagonal(b)) ++excluded;
    }
  }
  if (excluded != 4) {
    r.detail = "expected 4 same-diagonal pairs excluded, got " + std::to_string(excluded);
    return r;
  }
  for (const TurnPair& p : combos) {
    RestrictionSet s = RestrictionSet::of({p.cw, p.ccw});
    if (!s.valid()) {
      r.detail = "combination failed validation: " + turn_name(p.cw) + "+" + turn_name(p.ccw);
      return r;
    }
  }
  r.passed = true;
  r.detail = "12 combinations, all valid, 4 same-diagonal pairs excluded";
  return r;
}

namespace {

// View over free-standing queues for direct F / F' evaluation: local queues
// are the deciding router's, remote the next hop's through the single sel
// under test.
struct BenchView {
  std::array<const TurnQueue*, kTurnCount> local{};
  std::array<const TurnQueue*, kTurnCount> remote{};
  int cap = 8;
  int claim = 0;

  int local_occ(Turn t) const { auto* q = local[static_cast<size_t>(t.id())]; return q ? q->occ() : 0; }
  int local_occp(Turn t) const { auto* q = local[static_cast<size_t>(t.id())]; return q ? q->occp() : 0; }
  int remote_occ(Port, Turn t) const { auto* q = remote[static_cast<size_t>(t.id())]; return q ? q->occ() : 0; }
  int remote_occp(Port, Turn t) const { auto* q = remote[static_cast<size_t>(t.id())]; return q ? q->occp() : 0; }
  int remote_cap(Port, Turn) const { return cap; }
  int claims(Port, Turn) const { return claim; }
};

static_assert(OccupancyView<BenchView>);

void fill_single_flit(TurnQueue& q, int flits, std::uint32_t& id) {
  for (int i = 0; i < flits; ++i) {
    Flit f;
    f.packet_id = id++;
    f.size = 1;
    q.enqueue(f);
  }
}

}  // namespace

CheckResult check_fprime_implies_f(int samples, std::uint64_t seed) {
  CheckResult r{"F' implies F on single-flit states", false, ""};
  Mesh mesh{4, 4};
  Rng rng(seed);
  static const RestrictionSet gate =
      RestrictionSet::of({{Port::S, Port::E}, {Port::S, Port::W}});
  std::uint32_t id = 1;
  int gated = 0;
  for (int s = 0; s < samples; ++s) {
    int cap = 2 + static_cast<int>(uniform_below(rng, 11));
    Coord cur{static_cast<int>(uniform_below(rng, 4)), static_cast<int>(uniform_below(rng, 3))};
    Coord dst;
    do {
      dst = {static_cast<int>(uniform_below(rng, 4)), static_cast<int>(uniform_below(rng, 4))};
    } while (dst == cur);
    PortSet adm = admissible_outputs(cur, dst);
    std::vector<Port> sels;
    for (Port p : kCompassPorts)
      if (adm.contains(p)) sels.push_back(p);
    Port sel = sels[uniform_below(rng, sels.size())];

    std::vector<TurnQueue> locals, remotes;
    BenchView view;
    view.cap = cap;
    for (Port in : kAllPorts) {
      Turn t{in, sel};
      if (!Router::queue_exists(t)) continue;
      locals.emplace_back(t, cap);
      fill_single_flit(locals.back(), static_cast<int>(uniform_below(rng, cap + 1)), id);
    }
    for (auto& q : locals) view.local[static_cast<size_t>(q.turn().id())] = &q;
    for (Turn t : {Turn{Port::S, Port::E}, Turn{Port::S, Port::W}}) {
      remotes.emplace_back(t, cap);
      fill_single_flit(remotes.back(), static_cast<int>(uniform_below(rng, cap + 1)), id);
    }
    for (auto& q : remotes) view.remote[static_cast<size_t>(q.turn().id())] = &q;

    bool f = eval_F(mesh, gate, cur, dst, sel, 1, view);
    bool fp = eval_F_prime(mesh, cur, dst, sel, view);
    if (f != fp) {
      r.detail = "F and F' diverged on a single-flit state (sample " + std::to_string(s) + ")";
      return r;
    }
    if (sel == Port::N) {
      NextQueues nq = next_queues(mesh, cur, dst, sel);
      for (int i = 0; i < nq.n; ++i)
        if (gate.forbids(nq.q[static_cast<size_t>(i)])) ++gated;
    }
  }
  if (gated == 0) {
    r.detail = "no sample exercised the restricted branch";
    return r;
  }

  // Strictness witness: a queue draining a departed-head packet keeps its
  // physical occupancy above the packet-granular one, so F' (physical) can
  // reject what F (packet-granular) admits.
  Mesh wm{2, 3};
  TurnQueue target({Port::S, Port::E}, 4);
  std::uint32_t wid = 1u << 20;
  Flit head;
  head.packet_id = wid;
  head.size = 4;
  head.is_head = true;
  head.is_tail = false;
  target.enqueue(head);
  for (int i = 0; i < 3; ++i) {
    Flit body;
    body.packet_id = wid;
    body.size = 4;
    body.is_head = false;
    body.is_tail = i == 2;
    target.enqueue(body);
  }
  (void)target.dequeue();  // head moves on; three body flits remain
  TurnQueue feeder({Port::S, Port::N}, 4);
  fill_single_flit(feeder, 1, wid);
  BenchView wv;
  wv.cap = 4;
  wv.local[static_cast<size_t>(Turn{Port::S, Port::N}.id())] = &feeder;
  wv.remote[static_cast<size_t>(Turn{Port::S, Port::E}.id())] = &target;
  Coord cur{0, 0}, dst{1, 2};
  bool wf = eval_F(wm, gate, cur, dst, Port::N, 1, wv);
  bool wfp = eval_F_prime(wm, cur, dst, Port::N, wv);
  if (!(wf && !wfp)) {
    r.detail = "witness state did not separate F from F'";
    return r;
  }
  r.passed = true;
  std::ostringstream os;
  os << samples << " single-flit states agree (" << gated
     << " hit the restricted branch); witness has F=true, F'=false";
  r.detail = os.str();
  return r;
}

CheckResult check_2x2_impossibility(int seeds, std::uint64_t cycles, int jobs) {
  CheckResult r{"2x2 deadlock impossibility", false, ""};
  std::vector<SimConfig> cfgs;
  for (int s = 0; s < seeds; ++s) {
    SimConfig c;
    c.width = 2;
    c.height = 2;
    c.mode = (s % 2 == 0) ? QueueMode::OQ : QueueMode::VOQ;
    c.queue_capacity = 2;
    c.algorithm = Algorithm::FullFreedom;
    c.pattern = Pattern::UniformBernoulli;
    c.rate = 1.0;
    c.warmup = 0;
    c.roi = cycles;
    c.latency_threshold = 0;
    c.seed = static_cast<std::uint64_t>(s) + 1;
    cfgs.push_back(c);
  }
  auto ms = run_batch(cfgs, jobs);
  for (size_t i = 0; i < ms.size(); ++i) {
    if (ms[i].deadlocked()) {
      r.detail = "detector fired on " + cell_name(cfgs[i]);
      return r;
    }
  }
  r.passed = true;
  r.detail = std::to_string(seeds) + " saturated full-freedom runs, no deadlock";
  return r;
}

CheckResult check_deadlock_reachability(int seeds, std::uint64_t cycles, int jobs,
                                        int packet_size, double rate) {
  CheckResult r{"full-freedom deadlock reachability (3x4, depth 2)", false, ""};
  std::vector<SimConfig> cfgs;
  for (int s = 0; s < seeds; ++s) {
    SimConfig c;
    c.width = 3;
    c.height = 4;
    c.mode = QueueMode::OQ;
    c.queue_capacity = 2;
    c.algorithm = Algorithm::FullFreedom;
    c.pattern = Pattern::UniformBernoulli;
    c.rate = rate;
    c.packet_size = packet_size;
    c.warmup = 0;
    c.roi = cycles;
    c.latency_threshold = 0;
    c.seed = static_cast<std::uint64_t>(s) + 1;
    cfgs.push_back(c);
  }
  auto ms = run_batch(cfgs, jobs);
  int hits = 0;
  std::uint64_t first = 0;
  for (auto& m : ms)
    if (m.deadlocked()) {
      ++hits;
      if (first == 0 || m.deadlock->cycle < first) first = m.deadlock->cycle;
    }
  if (hits == 0) {
    r.detail = "no seed reached a deadlock";
    return r;
  }
  r.passed = true;
  std::ostringstream os;
  os << hits << "/" << seeds << " seeds deadlocked (earliest at cycle " << first << ")";
  r.detail = os.str();
  return r;
}

CheckResult check_deadlock_freedom(const std::vector<Algorithm>& algs, const MatrixScale& scale) {
  CheckResult r{"deadlock-freedom matrix", false, ""};
  struct Meshes {
    int w, h;
  };
  const Meshes meshes[] = {{3, 4}, {4, 4}, {8, 8}};
  const int depths[] = {2, 8, 16};
  std::vector<SimConfig> cfgs;
  std::uint64_t seed = scale.seed_base;
  int per_alg = 0;
  for (Algorithm alg : algs) {
    per_alg = 0;
    for (const Meshes& m : meshes) {
      for (Pattern p : valid_patterns(Mesh{m.w, m.h})) {
        for (QueueMode mode : {QueueMode::OQ, QueueMode::VOQ}) {
          for (int depth : depths) {
            for (int s = 0; s < scale.seeds_per_cell; ++s) {
              SimConfig c;
              c.width = m.w;
              c.height = m.h;
              c.mode = mode;
              c.queue_capacity = depth;
              c.algorithm = alg;
              c.pattern = p;
              c.rate = 1.0;
              c.warmup = 0;
              c.roi = scale.cycles;
              c.latency_threshold = 0;
              c.seed = seed++;
              cfgs.push_back(c);
              ++per_alg;
            }
          }
        }
      }
    }
  }
  auto ms = run_batch(cfgs, scale.jobs);
  std::vector<std::string> failures;
  for (size_t i = 0; i < ms.size(); ++i) {
    const RunMetrics& m = ms[i];
    if (m.deadlocked()) {
      failures.push_back("deadlock: " + cell_name(cfgs[i]));
      continue;
    }
    std::uint64_t windows = scale.cycles / cfgs[i].progress_window;
    for (std::uint64_t w = 0; w < windows; ++w) {
      if (w >= m.window_deliveries.size() || m.window_deliveries[w] == 0) {
        failures.push_back("stalled window " + std::to_string(w) + ": " + cell_name(cfgs[i]));
        break;
      }
    }
  }
  if (!failures.empty()) {
    r.detail = failures.front() + (failures.size() > 1
                                       ? " (+" + std::to_string(failures.size() - 1) + " more)"
                                       : "");
    return r;
  }
  r.passed = true;
  std::ostringstream os;
  os << cfgs.size() << " saturated runs (" << per_alg
     << " distinct seeds per algorithm), no deadlock, delivery in every window";
  r.detail = os.str();
  return r;
}

namespace {

// Adversarial consumer-halt replay. The restricted queue keeps draining
// only the body flits of packets whose head already left; every feeder
// packet is forced into it; admitted arrival streams flow in behind. The
// freedom condition promised all of it fits.
struct ReplayOutcome {
  bool overflow = false;
  bool stalled = false;
};

ReplayOutcome replay_halted(TurnQueue& target, std::array<TurnQueue, 3>& feeders,
                            std::vector<std::pair<int, std::vector<Flit>>>& streams) {
  // streams: (feeder index, flits of an admitted arrival) still to arrive.
  int pinned_feeder = -1;
  std::uint32_t pinned_packet = 0;
  size_t stream_pos[8] = {0};
  int idle = 0;
  for (int cycle = 0; cycle < 4096 && idle < 4; ++cycle) {
    bool progress = false;
    // Departed-head remnants drain; space downstream is reserved.
    if (!target.empty() && !target.front().is_head) {
      target.dequeue();
      progress = true;
    }
    // One flit per cycle crosses the link into the restricted queue.
    int pick = -1;
    if (pinned_feeder >= 0) {
      if (!feeders[static_cast<size_t>(pinned_feeder)].empty()) pick = pinned_feeder;
    } else {
      for (int i = 0; i < 3; ++i) {
        if (feeders[static_cast<size_t>(i)].empty()) continue;
        const Flit& f = feeders[static_cast<size_t>(i)].front();
        if (target.can_accept(f)) {
          pick = i;
          break;
        }
      }
    }
    if (pick >= 0) {
      const Flit& f = feeders[static_cast<size_t>(pick)].front();
      if (target.can_accept(f)) {
        Flit moved = feeders[static_cast<size_t>(pick)].dequeue();
        if (target.occ() >= target.capacity()) return {true, false};
        target.enqueue(moved);
        progress = true;
        if (moved.is_head && !moved.is_tail) {
          pinned_feeder = pick;
          pinned_packet = moved.packet_id;
        } else if (!moved.is_head && moved.packet_id == pinned_packet && moved.is_tail) {
          pinned_feeder = -1;
        }
      }
    }
    // Admitted arrivals stream into their landing feeders, one flit per
    // input per cycle.
    for (size_t s = 0; s < streams.size(); ++s) {
      auto& [fi, flits] = streams[s];
      if (stream_pos[s] >= flits.size()) continue;
      const Flit& f = flits[stream_pos[s]];
      if (feeders[static_cast<size_t>(fi)].can_accept(f)) {
        feeders[static_cast<size_t>(fi)].enqueue(f);
        ++stream_pos[s];
        progress = true;
      }
    }
    idle = progress ? 0 : idle + 1;
  }
  // Everything must have made it into the restricted queue.
  for (size_t s = 0; s < streams.size(); ++s)
    if (stream_pos[s] < streams[s].second.size()) return {false, true};
  for (const TurnQueue& f : feeders)
    if (!f.empty()) return {false, true};
  return {false, false};
}

}  // namespace

CheckResult check_worst_case_replay(int samples, std::uint64_t seed) {
  CheckResult r{"worst-case replay oracle", false, ""};
  Rng rng(seed);
  Mesh mesh{3, 3};
  static const RestrictionSet gate =
      RestrictionSet::of({{Port::S, Port::E}, {Port::S, Port::W}});
  std::uint32_t id = 1;
  int admitted_total = 0, rejected_total = 0, two_arrival = 0;

  // `samples` counts replayed admissions: states where the condition said
  // yes and the adversarial replay must therefore stay within capacity.
  const int max_draws = samples * 64;
  for (int s = 0; s < max_draws && admitted_total < samples; ++s) {
    const int cap = 2 + static_cast<int>(uniform_below(rng, 7));
    const bool east = uniform_below(rng, 2) == 0;
    const Turn target_turn = east ? Turn{Port::S, Port::E} : Turn{Port::S, Port::W};
    const Coord cur = east ? Coord{0, 0} : Coord{1, 0};
    const Coord dst = east ? Coord{1, 2} : Coord{0, 2};
    const Port third = opposite(target_turn.out);  // same-axis feeder input

    TurnQueue target(target_turn, cap);
    // Resident packets; sometimes one mid-drain remnant at the front.
    if (uniform_below(rng, 2) == 0) {
      int sz = 2 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(cap - 1)));
      std::uint32_t pid = id++;
      for (int i = 0; i < sz; ++i) {
        Flit f;
        f.packet_id = pid;
        f.size = static_cast<std::uint16_t>(sz);
        f.is_head = i == 0;
        f.is_tail = i == sz - 1;
        target.enqueue(f);
      }
      (void)target.dequeue();
    }
    while (uniform_below(rng, 3) != 0) {
      int sz = 1 + static_cast<int>(uniform_below(rng, 3));
      Flit probe;
      probe.size = static_cast<std::uint16_t>(sz);
      if (!target.can_accept(probe)) break;
      std::uint32_t pid = id++;
      for (int i = 0; i < sz; ++i) {
        Flit f;
        f.packet_id = pid;
        f.size = static_cast<std::uint16_t>(sz);
        f.is_head = i == 0;
        f.is_tail = i == sz - 1;
        target.enqueue(f);
      }
    }

    const std::array<Port, 3> feeder_inputs = {Port::C, Port::S, third};
    std::array<TurnQueue, 3> feeders = {TurnQueue{{Port::C, Port::N}, cap},
                                        TurnQueue{{Port::S, Port::N}, cap},
                                        TurnQueue{{third, Port::N}, cap}};
    for (auto& fq : feeders) {
      while (uniform_below(rng, 3) != 0) {
        int sz = 1 + static_cast<int>(uniform_below(rng, 3));
        Flit probe;
        probe.size = static_cast<std::uint16_t>(sz);
        if (!fq.can_accept(probe)) break;
        std::uint32_t pid = id++;
        for (int i = 0; i < sz; ++i) {
          Flit f;
          f.packet_id = pid;
          f.size = static_cast<std::uint16_t>(sz);
          f.is_head = i == 0;
          f.is_tail = i == sz - 1;
          fq.enqueue(f);
        }
      }
    }

    BenchView view;
    view.cap = cap;
    for (auto& fq : feeders) view.local[static_cast<size_t>(fq.turn().id())] = &fq;
    view.remote[static_cast<size_t>(target_turn.id())] = &target;

    // One or two same-cycle head arrivals on distinct feeder inputs,
    // evaluated serially with claims.
    int arrivals = uniform_below(rng, 4) == 0 ? 2 : 1;
    if (arrivals == 2) ++two_arrival;
    std::vector<std::pair<int, std::vector<Flit>>> streams;
    int claims = 0;
    int first_input = -1;
    (void)feeder_inputs;
    for (int a = 0; a < arrivals; ++a) {
      int fi = static_cast<int>(uniform_below(rng, 3));
      if (fi == first_input) fi = (fi + 1) % 3;  // same-cycle arrivals use distinct inputs
      if (a == 0) first_input = fi;
      int sz = 1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(std::min(3, cap))));
      view.claim = claims;
      bool ok = eval_F(mesh, gate, cur, dst, Port::N, sz, view);
      if (!ok) {
        ++rejected_total;
        continue;
      }
      ++admitted_total;
      claims += sz;
      std::uint32_t pid = id++;
      std::vector<Flit> flits;
      for (int i = 0; i < sz; ++i) {
        Flit f;
        f.packet_id = pid;
        f.size = static_cast<std::uint16_t>(sz);
        f.is_head = i == 0;
        f.is_tail = i == sz - 1;
        flits.push_back(f);
      }
      streams.emplace_back(fi, std::move(flits));
    }
    if (streams.empty()) continue;

    ReplayOutcome out = replay_halted(target, feeders, streams);
    if (out.overflow) {
      r.detail = "restricted queue overflowed (sample " + std::to_string(s) + ")";
      return r;
    }
    if (out.stalled) {
      r.detail = "admitted packet failed to reach the restricted queue (sample " +
                 std::to_string(s) + ")";
      return r;
    }
  }
  if (admitted_total == 0) {
    r.detail = "no sample admitted a packet";
    return r;
  }
  r.passed = true;
  std::ostringstream os;
  os << admitted_total << " admissions replayed without overflow (" << rejected_total
     << " rejections, " << two_arrival << " two-arrival cases)";
  r.detail = os.str();
  return r;
}

std::vector<CheckResult> run_verification(bool quick, int jobs) {
  std::vector<CheckResult> out;
  out.push_back(check_turn_enumeration());
  out.push_back(check_fprime_implies_f(quick ? 20000 : 100000, 12345));
  out.push_back(check_2x2_impossibility(quick ? 100 : 1000, quick ? 5000 : 10000, jobs));
  // Quick mode provokes the deadlock with two-flit packets at moderate load;
  // the full run uses the saturated single-flit configuration.
  if (quick) out.push_back(check_deadlock_reachability(20, 30000, jobs, 2, 0.5));
  else out.push_back(check_deadlock_reachability(100, 50000, jobs));
  MatrixScale scale;
  scale.cycles = quick ? 5000 : 50000;
  scale.jobs = jobs;
  out.push_back(check_deadlock_freedom(
      {Algorithm::XY, Algorithm::YX, Algorithm::WestFirst, Algorithm::NorthLast,
       Algorithm::NegativeFirst, Algorithm::OddEven, Algorithm::XYAdaptive, Algorithm::XYO1Turn},
      scale));
  out.push_back(check_worst_case_replay(quick ? 2000 : 10000, 99));
  return out;
}

}  // namespace voqsim
