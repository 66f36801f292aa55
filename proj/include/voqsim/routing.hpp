#pragma once

#include <cassert>
#include <memory>
#include <optional>
#include <string_view>

#include "voqsim/freedom.hpp"
#include "voqsim/geometry.hpp"
#include "voqsim/queueing.hpp"
#include "voqsim/turnmodel.hpp"

namespace voqsim {

enum class Algorithm : std::uint8_t {
  XY,
  YX,
  WestFirst,
  NorthLast,
  NegativeFirst,
  OddEven,
  O1Turn,
  FullFreedom,
  XYAdaptive,
  XYO1Turn,
};

const char* algorithm_name(Algorithm a);
std::optional<Algorithm> algorithm_from_name(std::string_view name);

// Algorithms backed by a plain restriction set (restricted_turns applies).
bool is_turn_model(Algorithm a);
bool is_bimodal(Algorithm a);

// Forbidden-turn set of a turn-model algorithm; throws for others.
RestrictionSet restricted_turns(Algorithm fallback);

// The turn-model subset the freedom condition gates on when `fallback`
// backs a bimodal algorithm. DOR fallbacks are gated through their
// minimal two-turn equivalent (north-last for XY), every decision they make
// already rules the remaining restricted turns out.
RestrictionSet freedom_restriction(Algorithm fallback);

struct RouteQuery {
  Coord cur{};
  Coord dst{};
  Port input = Port::C;
  int packet_size = 1;
  DorOrder order = DorOrder::XYFirst;
};

Port route_dor(Coord cur, Coord dst, DorOrder order);

inline constexpr std::array<Port, 4> kTieBreakOrder = {Port::E, Port::N, Port::W, Port::S};

// Selection pool of a turn-restricted adaptive decision: admissible outputs
// after wait-free filtering on the current-hop turn, minus candidates with
// no permitted continuation along the rest of the minimal path. A single
// survivor of the current-hop filter is returned as-is.
PortSet restricted_candidates(const Mesh& mesh, const TurnRule& rule, const ReachTable& reach,
                              Coord cur, Coord dst, Port input);

// Least-occupancy adaptive selection over the restricted candidate pool.
// Tie-break: fixed port order E, N, W, S.
template <OccupancyView V>
Port route_turn_restricted(const Mesh& mesh, const TurnRule& rule, const ReachTable& reach,
                           const RouteQuery& q, const V& view) {
  PortSet pool = restricted_candidates(mesh, rule, reach, q.cur, q.dst, q.input);
  if (pool.contains(Port::C)) return Port::C;
  Port best = Port::C;
  int best_occ = 0;
  for (Port d : kTieBreakOrder) {
    if (!pool.contains(d)) continue;
    int o = view.local_occ({q.input, d});
    if (best == Port::C || o < best_occ) {
      best = d;
      best_occ = o;
    }
  }
  assert(best != Port::C);
  return best;
}

// Single-algorithm decision state; bimodal algorithms wire a base and a
// fallback policy plus the freedom restriction between them.
class RoutingPolicy {
 public:
  RoutingPolicy() = default;
  RoutingPolicy(Algorithm alg, const Mesh& mesh);

  Algorithm algorithm() const { return alg_; }
  bool uses_freedom() const { return bimodal_; }
  const RestrictionSet& gate() const { return freedom_restr_; }

  struct Decision {
    Port sel = Port::C;
    bool freedom = true;   // F outcome; true when F was not consulted
    bool claimed = false;  // F true with a restricted target: claim it
    Turn claim_target{};
    Port claim_sel = Port::C;
  };

  template <OccupancyView V>
  Decision decide(const RouteQuery& q, const V& view) const {
    Decision d;
    if (q.cur == q.dst) {
      d.sel = Port::C;
      return d;
    }
    if (!bimodal_) {
      d.sel = plain_decide(q, view);
      return d;
    }
    Port sel_base = base_->plain_decide(q, view);
    NextQueues nq = next_queues(mesh_, q.cur, q.dst, sel_base);
    for (int i = 0; i < nq.n; ++i) {
      Turn target = nq.q[i];
      if (!freedom_restr_.forbids(target)) continue;
      if (eval_F(mesh_, freedom_restr_, q.cur, q.dst, sel_base, q.packet_size, view)) {
        d.sel = sel_base;
        d.claimed = true;
        d.claim_target = target;
        d.claim_sel = sel_base;
      } else {
        d.freedom = false;
        d.sel = fallback_->plain_decide(q, view);
      }
      return d;
    }
    d.sel = sel_base;  // no restricted turn reachable: F trivially true
    return d;
  }

  template <OccupancyView V>
  Port plain_decide(const RouteQuery& q, const V& view) const {
    switch (alg_) {
      case Algorithm::XY:
        return route_dor(q.cur, q.dst, DorOrder::XYFirst);
      case Algorithm::YX:
        return route_dor(q.cur, q.dst, DorOrder::YXFirst);
      case Algorithm::O1Turn:
        return route_dor(q.cur, q.dst, q.order);
      case Algorithm::WestFirst:
      case Algorithm::NorthLast:
      case Algorithm::NegativeFirst:
      case Algorithm::OddEven:
      case Algorithm::FullFreedom:
        return route_turn_restricted(mesh_, rule_, reach_, q, view);
      default:
        break;
    }
    assert(false && "bimodal algorithms decide through decide()");
    return Port::C;
  }

 private:
  RoutingPolicy(Algorithm base, Algorithm fallback, const Mesh& mesh, Algorithm self);

  Algorithm alg_ = Algorithm::XY;
  Mesh mesh_{};
  TurnRule rule_{};
  ReachTable reach_{};
  bool bimodal_ = false;
  RestrictionSet freedom_restr_{};
  std::shared_ptr<const RoutingPolicy> base_;
  std::shared_ptr<const RoutingPolicy> fallback_;

  friend RoutingPolicy make_bimodal_policy(Algorithm base, Algorithm fallback, const Mesh& mesh);
};

// Explicit bimodal wiring, mainly for tests; base must not itself be
// bimodal, fallback must be a turn-model algorithm.
RoutingPolicy make_bimodal_policy(Algorithm base, Algorithm fallback, const Mesh& mesh);

}  // namespace voqsim
