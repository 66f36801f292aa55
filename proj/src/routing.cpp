#include "voqsim/routing.hpp"

#include <stdexcept>

namespace voqsim {

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::XY: return "xy";
    case Algorithm::YX: return "yx";
    case Algorithm::WestFirst: return "west-first";
    case Algorithm::NorthLast: return "north-last";
    case Algorithm::NegativeFirst: return "negative-first";
    case Algorithm::OddEven: return "odd-even";
    case Algorithm::O1Turn: return "o1turn";
    case Algorithm::FullFreedom: return "full-freedom";
    case Algorithm::XYAdaptive: return "xy-adaptive";
    case Algorithm::XYO1Turn: return "xy-o1turn";
  }
  return "?";
}

std::optional<Algorithm> algorithm_from_name(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(Algorithm::XYO1Turn); ++i) {
    auto a = static_cast<Algorithm>(i);
    if (name == algorithm_name(a)) return a;
  }
  return std::nullopt;
}

bool is_turn_model(Algorithm a) {
  switch (a) {
    case Algorithm::XY:
    case Algorithm::YX:
    case Algorithm::WestFirst:
    case Algorithm::NorthLast:
    case Algorithm::NegativeFirst:
      return true;
    default:
      return false;
  }
}

bool is_bimodal(Algorithm a) {
  return a == Algorithm::XYAdaptive || a == Algorithm::XYO1Turn;
}

RestrictionSet restricted_turns(Algorithm fallback) {
  using P = Port;
  switch (fallback) {
    case Algorithm::XY:
      return RestrictionSet::of({{P::S, P::E}, {P::S, P::W}, {P::N, P::E}, {P::N, P::W}});
    case Algorithm::YX:
      return RestrictionSet::of({{P::E, P::N}, {P::E, P::S}, {P::W, P::N}, {P::W, P::S}});
    case Algorithm::NorthLast:
      return RestrictionSet::of({{P::S, P::E}, {P::S, P::W}});
    case Algorithm::WestFirst:
      return RestrictionSet::of({{P::S, P::W}, {P::N, P::W}});
    case Algorithm::NegativeFirst:
      return RestrictionSet::of({{P::S, P::W}, {P::W, P::S}});
    default:
      throw std::invalid_argument(std::string("not a turn-model algorithm: ") +
                                  algorithm_name(fallback));
  }
}

RestrictionSet freedom_restriction(Algorithm fallback) {
  using P = Port;
  switch (fallback) {
    case Algorithm::XY:  // north-last equivalent: XY never turns out of y-travel
      return RestrictionSet::of({{P::S, P::E}, {P::S, P::W}});
    case Algorithm::YX:  // mirrored: YX never turns out of x-travel
      return RestrictionSet::of({{P::E, P::N}, {P::E, P::S}});
    case Algorithm::NorthLast:
    case Algorithm::WestFirst:
    case Algorithm::NegativeFirst:
      return restricted_turns(fallback);
    default:
      throw std::invalid_argument(std::string("no freedom restriction for: ") +
                                  algorithm_name(fallback));
  }
}

PortSet restricted_candidates(const Mesh& mesh, const TurnRule& rule, const ReachTable& reach,
                              Coord cur, Coord dst, Port input) {
  PortSet cands = admissible_outputs(cur, dst);
  if (cands.contains(Port::C)) return cands;

  // Wait-free filtering happens on the current-hop turn only.
  PortSet legal;
  for (Port d : kTieBreakOrder)
    if (cands.contains(d) && (input == Port::C || !rule.forbids({input, d}, cur.x)))
      legal.add(d);
  if (legal.empty()) return cands;  // off-model state; minimal progress wins
  if (legal.size() == 1) return legal;

  // Drop candidates that would strand the packet further on.
  PortSet viable;
  for (Port d : kTieBreakOrder) {
    if (!legal.contains(d)) continue;
    Coord next = mesh.neighbor(cur, d);
    if (reach.reach(opposite(d), next.x & 1, dst.x - next.x, dst.y - next.y)) viable.add(d);
  }
  return viable.empty() ? legal : viable;
}

Port route_dor(Coord cur, Coord dst, DorOrder order) {
  if (cur == dst) return Port::C;
  if (order == DorOrder::XYFirst) {
    if (dst.x > cur.x) return Port::E;
    if (dst.x < cur.x) return Port::W;
    return dst.y > cur.y ? Port::N : Port::S;
  }
  if (dst.y > cur.y) return Port::N;
  if (dst.y < cur.y) return Port::S;
  return dst.x > cur.x ? Port::E : Port::W;
}

RoutingPolicy::RoutingPolicy(Algorithm alg, const Mesh& mesh) : alg_(alg), mesh_(mesh) {
  switch (alg) {
    case Algorithm::XY:
    case Algorithm::YX:
    case Algorithm::O1Turn:
      return;
    case Algorithm::WestFirst:
    case Algorithm::NorthLast:
    case Algorithm::NegativeFirst:
      rule_ = TurnRule::uniform(restricted_turns(alg));
      rule_.even.validate();
      reach_ = ReachTable(rule_, mesh);
      return;
    case Algorithm::OddEven:
      rule_ = odd_even_rule();
      reach_ = ReachTable(rule_, mesh);
      return;
    case Algorithm::FullFreedom:
      return;  // empty rule, no reach table needed
    case Algorithm::XYAdaptive:
      *this = make_bimodal_policy(Algorithm::FullFreedom, Algorithm::XY, mesh);
      alg_ = Algorithm::XYAdaptive;
      return;
    case Algorithm::XYO1Turn:
      *this = make_bimodal_policy(Algorithm::O1Turn, Algorithm::XY, mesh);
      alg_ = Algorithm::XYO1Turn;
      return;
  }
}

RoutingPolicy make_bimodal_policy(Algorithm base, Algorithm fallback, const Mesh& mesh) {
  if (is_bimodal(base)) throw std::invalid_argument("bimodal base algorithms cannot nest");
  if (!is_turn_model(fallback))
    throw std::invalid_argument("fallback must be a turn-model algorithm");
  RoutingPolicy p;
  p.alg_ = base;
  p.mesh_ = mesh;
  p.bimodal_ = true;
  p.freedom_restr_ = freedom_restriction(fallback);
  p.base_ = std::make_shared<RoutingPolicy>(base, mesh);
  p.fallback_ = std::make_shared<RoutingPolicy>(fallback, mesh);
  return p;
}

}  // namespace voqsim
