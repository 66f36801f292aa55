#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "voqsim/freedom.hpp"
#include "voqsim/geometry.hpp"
#include "voqsim/router.hpp"
#include "voqsim/routing.hpp"
#include "voqsim/traffic.hpp"

namespace voqsim {

struct SimConfig {
  int width = 8;
  int height = 8;
  QueueMode mode = QueueMode::OQ;
  int queue_capacity = 8;
  Algorithm algorithm = Algorithm::XY;
  Pattern pattern = Pattern::UniformBernoulli;
  std::string trace_path;  // non-empty selects trace-driven injection
  bool trace_strict = true;
  double rate = 0.1;    // per node per cycle
  int packet_size = 1;  // constant flits per packet
  std::uint64_t warmup = 1000;
  std::uint64_t roi = 5000;
  std::uint64_t max_cycles = 0;     // 0: warmup + roi
  double latency_threshold = 1500;  // <= 0 disables early stopping
  std::uint64_t seed = 1;
  int hotspot_node = -1;  // -1: mesh centre
  double burst_mean = 8.0;
  std::uint64_t detector_period = 1024;
  std::uint64_t progress_window = 10000;

  std::uint64_t duration() const {
    std::uint64_t d = warmup + roi;
    return max_cycles && max_cycles < d ? max_cycles : d;
  }
  void validate() const;  // throws std::invalid_argument
};

struct DeadlockReport {
  std::uint64_t cycle = 0;
  std::vector<std::pair<int, Turn>> cycle_queues;  // (node, turn) along the cycle
};

struct RunMetrics {
  std::uint64_t injected_packets = 0;
  std::uint64_t delivered = 0;  // extracted during the ROI window
  std::uint64_t delivered_total = 0;
  double avg_latency = 0.0;  // over ROI extractions; tail extraction - injection - 1
  double throughput = 0.0;   // ROI extractions per node per ROI cycle
  bool early_stopped = false;
  std::uint64_t cycles_run = 0;
  std::optional<DeadlockReport> deadlock;
  std::vector<std::uint64_t> window_deliveries;  // extractions per progress window

  bool deadlocked() const { return deadlock.has_value(); }
};

class Simulation {
 public:
  explicit Simulation(const SimConfig& cfg);

  RunMetrics run();

  // Single two-phase cycle: decide every transfer from the cycle-start
  // state, then apply them all.
  void tick();

  // Wait-for analysis over the current state: a directed cycle of full
  // queues whose blocked heads can only proceed into other full queues of
  // the same cycle.
  std::optional<DeadlockReport> find_deadlock() const;

  const Mesh& mesh() const { return mesh_; }
  const SimConfig& config() const { return cfg_; }
  std::uint64_t cycle() const { return cycle_; }
  Router& router_at(int node) { return routers_[static_cast<size_t>(node)]; }
  const Router& router_at(int node) const { return routers_[static_cast<size_t>(node)]; }
  const RoutingPolicy& policy() const { return policy_; }

  // Spec-level probes, also used by the test suites.
  bool lookahead_can_forward(int node, Turn q) const;
  bool freedom_eval(int node, int dst_node, Port sel, int packet_size) const;
  bool freedom_eval_prime(int node, int dst_node, Port sel) const;

  // Test scaffolding: fill a queue with synthetic resident single-flit
  // packets, or schedule a packet by hand.
  void test_fill_queue(int node, Turn t, int flits, int dst_node);
  void test_push_packet(int node, int dst_node, int size);

  std::uint64_t count_flits_in_sources() const;
  std::uint64_t count_flits_in_network() const;
  std::uint64_t flits_ejected() const { return flits_ejected_; }
  std::uint64_t flits_injected() const { return flits_injected_; }

 private:
  struct SourcePacket {
    std::uint32_t id = 0;
    std::uint32_t inject = 0;
    std::uint16_t dst = 0;
    std::uint16_t size = 1;
    DorOrder attr = DorOrder::XYFirst;
  };
  struct Source {
    std::deque<SourcePacket> fifo;
    int sent = 0;  // flits of the front packet already injected
  };
  struct LinkMove {
    std::uint16_t from, to;
    Turn from_q, to_q;
  };
  struct Eject {
    std::uint16_t node;
    Turn q;
  };
  struct Inject {
    std::uint16_t node;
    Port sel;
  };

  friend struct EngineView;

  void generate_traffic();
  void make_packet(int src, int dst, int size);
  void arbitrate_link(int up, Port out, int down);
  void arbitrate_ejection(int node);
  void decide_injection(int node);
  void voq_arbitrate(int up);

  struct Plan {
    bool ok = false;
    RoutingPolicy::Decision dec{};
  };
  Plan plan_arrival(int node, Port input, const Flit& f) const;
  void commit_claims(int node, const RoutingPolicy::Decision& dec, int size);

  void apply_move(const LinkMove& m);
  void apply_eject(const Eject& e);
  void apply_inject(const Inject& i);
  void note_pin_dequeue(Router& r, Turn from_q, const Flit& f);
  void note_pin_enqueue(Router& r, Turn to_q, const Flit& f);
  void record_extraction(const Flit& tail);
  Flit next_source_flit(int node) const;

  SimConfig cfg_;
  Mesh mesh_{};
  RoutingPolicy policy_;
  TrafficGen traffic_;
  std::vector<TraceEvent> trace_;
  size_t trace_pos_ = 0;
  Rng rng_;

  std::vector<Router> routers_;
  std::vector<Source> sources_;
  std::vector<CycleClaims> claims_;
  std::vector<LinkMove> moves_;
  std::vector<Eject> ejects_;
  std::vector<Inject> injects_;

  std::uint64_t cycle_ = 0;
  bool stopped_ = false;
  std::uint32_t next_packet_id_ = 0;

  // Accounting.
  std::uint64_t injected_packets_ = 0;
  std::uint64_t flits_injected_ = 0;
  std::uint64_t flits_ejected_ = 0;
  std::uint64_t delivered_total_ = 0;
  std::uint64_t delivered_roi_ = 0;
  std::uint64_t latency_sum_ = 0;
  std::int64_t network_flits_ = 0;
  int quiescent_streak_ = 0;
  RunMetrics metrics_;

  // Oldest in-flight packet tracking for the saturation early stop.
  std::deque<std::pair<std::uint32_t, std::uint32_t>> order_;  // (id, inject)
  std::vector<std::uint8_t> done_;
};

RunMetrics simulate(const SimConfig& cfg);

// Per-packet O1-Turn order; pure in (seed, packet id) so traffic stays
// identical across algorithms under one seed.
DorOrder packet_order_for(std::uint64_t seed, std::uint32_t id);

struct SweepRow {
  double rate = 0;
  std::uint64_t seed = 0;
  bool mean = false;  // aggregate row over the seeds of one rate
  RunMetrics metrics;
};

// Cross product of rates x seeds, run independently (up to `jobs` at a
// time), aggregated per rate. Rates past the first whose runs early-stop or
// deadlock are not simulated.
std::vector<SweepRow> sweep(const SimConfig& base, const std::vector<double>& rates,
                            const std::vector<std::uint64_t>& seeds, int jobs = 0);

}  // namespace voqsim
