#pragma once

#include <algorithm>
#include <array>
#include <concepts>
#include <cstring>
#include <vector>

#include "voqsim/geometry.hpp"
#include "voqsim/turnmodel.hpp"

namespace voqsim {

// Occupancy information a routing decision may consult. `local_*` address
// queues of the deciding router, `remote_*` queues of the neighbour in
// direction sel; `claims` are same-cycle reservations made by
// earlier-arbitrated packets of this router against restricted remote
// queues (the serial application of the freedom condition).
template <class V>
concept OccupancyView = requires(const V& v, Port sel, Turn t) {
  { v.local_occ(t) } -> std::convertible_to<int>;
  { v.local_occp(t) } -> std::convertible_to<int>;
  { v.remote_occ(sel, t) } -> std::convertible_to<int>;
  { v.remote_occp(sel, t) } -> std::convertible_to<int>;
  { v.remote_cap(sel, t) } -> std::convertible_to<int>;
  { v.claims(sel, t) } -> std::convertible_to<int>;
};

struct NextQueues {
  std::array<Turn, 2> q{};
  int n = 0;
};

// All queues of the next-hop router (through sel) the packet could land in
// under minimal routing; {(opposite(sel), C)} iff the neighbour is the
// destination.
NextQueues next_queues(const Mesh& mesh, Coord cur, Coord dst, Port sel);

// The three local queues with output sel whose packets can legally reach
// `target` (a clockwise/counterclockwise turn queue at neighbour(sel)):
// ingress, straight, and the one same-axis turn queue that does not reverse
// the target's direction of travel.
std::array<Turn, 3> feeders(Port sel, Turn target);

// Per-router, per-cycle scratch recording worst-case space already claimed
// against restricted queues of neighbouring routers by this cycle's
// earlier-arbitrated arrivals.
class CycleClaims {
 public:
  void reset() { std::memset(v_, 0, sizeof v_); }
  int get(Port sel, Turn target) const {
    return v_[static_cast<int>(sel)][static_cast<int>(target.out)];
  }
  void add(Port sel, Turn target, int flits) {
    v_[static_cast<int>(sel)][static_cast<int>(target.out)] += flits;
  }

 private:
  std::uint16_t v_[5][5] = {};
};

// Freedom condition F: when forwarding through sel could land the packet in
// a restricted turn queue of the next hop, admit the plan only if the
// worst case — every packet currently in that queue or in any queue feeding
// it ending up there, plus same-cycle claims, plus this packet — still fits.
template <OccupancyView V>
bool eval_F(const Mesh& mesh, const RestrictionSet& restricted, Coord cur, Coord dst,
            Port sel, int packet_size, const V& view) {
  if (sel == Port::C) return true;
  NextQueues nq = next_queues(mesh, cur, dst, sel);
  for (int i = 0; i < nq.n; ++i) {
    Turn target = nq.q[i];
    if (!restricted.forbids(target)) continue;
    // Clockwise and counterclockwise at the next hop are mutually
    // exclusive under minimal routing, so at most one branch applies.
    int sum = packet_size + view.remote_occp(sel, target) + view.claims(sel, target);
    for (Turn f : feeders(sel, target)) sum += view.local_occp(f);
    return sum <= view.remote_cap(sel, target);
  }
  return true;
}

// Overlay of per-cycle claims on top of another view.
template <class V>
struct ClaimedView {
  const V* base;
  const CycleClaims* extra;

  int local_occ(Turn t) const { return base->local_occ(t); }
  int local_occp(Turn t) const { return base->local_occp(t); }
  int remote_occ(Port sel, Turn t) const { return base->remote_occ(sel, t); }
  int remote_occp(Port sel, Turn t) const { return base->remote_occp(sel, t); }
  int remote_cap(Port sel, Turn t) const { return base->remote_cap(sel, t); }
  int claims(Port sel, Turn t) const { return base->claims(sel, t) + extra->get(sel, t); }
};

struct SerialArrival {
  Port input = Port::C;
  Coord dst{};
  Port sel = Port::C;  // the base algorithm's choice for this packet
  int packet_size = 1;
};

// Serial application of F over one router's same-cycle arrivals: fixed
// input-port priority E, S, W, N, C; every true outcome whose selection
// leads toward a restricted remote queue claims its packet size against
// that queue before the next evaluation. Outcomes are returned in the order
// the arrivals were given.
template <OccupancyView V>
std::vector<bool> arbitrate_serial(const Mesh& mesh, const RestrictionSet& restricted, Coord cur,
                                   const std::vector<SerialArrival>& arrivals, const V& view,
                                   CycleClaims& claims) {
  std::vector<size_t> order(arrivals.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return static_cast<int>(arrivals[a].input) < static_cast<int>(arrivals[b].input);
  });
  std::vector<bool> out(arrivals.size(), true);
  ClaimedView<V> cv{&view, &claims};
  for (size_t i : order) {
    const SerialArrival& a = arrivals[i];
    bool ok = eval_F(mesh, restricted, cur, a.dst, a.sel, a.packet_size, cv);
    out[i] = ok;
    if (!ok || a.sel == Port::C) continue;
    NextQueues nq = next_queues(mesh, cur, a.dst, a.sel);
    for (int k = 0; k < nq.n; ++k)
      if (restricted.forbids(nq.q[static_cast<size_t>(k)]))
        claims.add(a.sel, nq.q[static_cast<size_t>(k)], a.packet_size);
  }
  return out;
}

// North-last adaptation F': physical occupancies and unit packet size. Both
// restricted turns start from the north output, so only sel == N can be
// gated. F' == F on states whose packets are all single-flit.
template <OccupancyView V>
bool eval_F_prime(const Mesh& mesh, Coord cur, Coord dst, Port sel, const V& view) {
  if (sel != Port::N) return true;
  static const RestrictionSet north_last =
      RestrictionSet::of({{Port::S, Port::E}, {Port::S, Port::W}});
  NextQueues nq = next_queues(mesh, cur, dst, sel);
  for (int i = 0; i < nq.n; ++i) {
    Turn target = nq.q[i];
    if (!north_last.forbids(target)) continue;
    int sum = 1 + view.remote_occ(sel, target) + view.claims(sel, target);
    for (Turn f : feeders(sel, target)) sum += view.local_occ(f);
    return sum <= view.remote_cap(sel, target);
  }
  return true;
}

}  // namespace voqsim
