#include "voqsim/turnmodel.hpp"

#include <stdexcept>

namespace voqsim {

RestrictionSet RestrictionSet::of(std::initializer_list<Turn> turns) {
  RestrictionSet s;
  for (Turn t : turns) s.add(t);
  return s;
}

void RestrictionSet::add(Turn t) {
  TurnClass c = classify_turn(t);
  if (c != TurnClass::Clockwise && c != TurnClass::CounterClockwise)
    throw std::invalid_argument("restriction sets hold clockwise/counterclockwise turns only: " +
                                turn_name(t));
  mask_ |= 1u << t.id();
}

std::vector<Turn> RestrictionSet::turns() const {
  std::vector<Turn> out;
  for (int id = 0; id < kTurnCount; ++id)
    if ((mask_ >> id) & 1u) out.push_back(Turn::from_id(id));
  return out;
}

int turn_diagonal(Turn t) {
  Port heading = opposite(t.in);
  Port a = heading, b = t.out;
  // Normalise to (x-direction, y-direction).
  if (a == Port::N || a == Port::S) std::swap(a, b);
  return static_cast<int>(a == Port::E) * 2 + static_cast<int>(b == Port::N);
}

bool RestrictionSet::valid() const {
  int cw = 0, ccw = 0;
  bool diagonal_closed[4] = {false, false, false, false};
  int diagonal_hits[4] = {0, 0, 0, 0};
  for (Turn t : turns()) {
    TurnClass c = classify_turn(t);
    if (c == TurnClass::Clockwise) ++cw;
    if (c == TurnClass::CounterClockwise) ++ccw;
    if (++diagonal_hits[turn_diagonal(t)] == 2) diagonal_closed[turn_diagonal(t)] = true;
  }
  if (cw < 1 || ccw < 1) return false;
  for (bool closed : diagonal_closed)
    if (closed) return false;
  return true;
}

void RestrictionSet::validate() const {
  int cw = 0, ccw = 0;
  int diagonal_hits[4] = {0, 0, 0, 0};
  for (Turn t : turns()) {
    TurnClass c = classify_turn(t);
    if (c == TurnClass::Clockwise) ++cw;
    if (c == TurnClass::CounterClockwise) ++ccw;
    ++diagonal_hits[turn_diagonal(t)];
  }
  if (cw < 1) throw std::invalid_argument("turn model needs a forbidden clockwise turn");
  if (ccw < 1) throw std::invalid_argument("turn model needs a forbidden counterclockwise turn");
  for (int d = 0; d < 4; ++d)
    if (diagonal_hits[d] >= 2)
      throw std::invalid_argument("turn model closes off a diagonal travel direction");
}

std::vector<TurnPair> legal_turn_combinations() {
  std::vector<Turn> cw, ccw;
  for (int id = 0; id < kTurnCount; ++id) {
    Turn t = Turn::from_id(id);
    TurnClass c = classify_turn(t);
    if (c == TurnClass::Clockwise) cw.push_back(t);
    if (c == TurnClass::CounterClockwise) ccw.push_back(t);
  }
  std::vector<TurnPair> out;
  for (Turn a : cw)
    for (Turn b : ccw)
      if (turn_diagonal(a) != turn_diagonal(b)) out.push_back({a, b});
  return out;
}

TurnRule odd_even_rule() {
  TurnRule r;
  // Even columns: no turn out of eastward travel (EN, ES in heading terms).
  r.even = RestrictionSet::of({{Port::W, Port::N}, {Port::W, Port::S}});
  // Odd columns: no turn into westward travel (NW, SW in heading terms).
  r.odd = RestrictionSet::of({{Port::S, Port::W}, {Port::N, Port::W}});
  return r;
}

int ReachTable::idx(Port input, int parity, int dx, int dy) const {
  int nx = 2 * w_ - 1, ny = 2 * h_ - 1;
  return ((static_cast<int>(input) * 2 + parity) * nx + (dx + w_ - 1)) * ny + (dy + h_ - 1);
}

ReachTable::ReachTable(const TurnRule& rule, const Mesh& mesh) : w_(mesh.width), h_(mesh.height) {
  trivial_ = rule.even.empty() && rule.odd.empty();
  if (trivial_) return;
  int nx = 2 * w_ - 1, ny = 2 * h_ - 1;
  table_.assign(static_cast<size_t>(5 * 2 * nx * ny), 0);

  // Fill in order of increasing Manhattan distance; each entry depends only
  // on entries one hop closer to the destination.
  int maxd = (w_ - 1) + (h_ - 1);
  for (int dist = 0; dist <= maxd; ++dist) {
    for (int dx = -(w_ - 1); dx <= w_ - 1; ++dx) {
      for (int dy = -(h_ - 1); dy <= h_ - 1; ++dy) {
        if (std::abs(dx) + std::abs(dy) != dist) continue;
        for (Port input : kAllPorts) {
          for (int par = 0; par < 2; ++par) {
            bool ok = false;
            if (dist == 0) {
              ok = true;  // eject; egress is never restricted
            } else {
              PortSet cands = admissible_outputs({0, 0}, {dx, dy});
              for (Port d : kCompassPorts) {
                if (!cands.contains(d)) continue;
                if (input != Port::C && rule.forbids_at_parity({input, d}, par)) continue;
                int ndx = dx - (d == Port::E) + (d == Port::W);
                int ndy = dy - (d == Port::N) + (d == Port::S);
                int npar = (d == Port::E || d == Port::W) ? (par ^ 1) : par;
                if (table_[static_cast<size_t>(idx(opposite(d), npar, ndx, ndy))]) {
                  ok = true;
                  break;
                }
              }
            }
            table_[static_cast<size_t>(idx(input, par, dx, dy))] = ok ? 1 : 0;
          }
        }
      }
    }
  }
}

bool ReachTable::reach(Port input, int col_parity, int dx, int dy) const {
  if (trivial_) return true;
  return table_[static_cast<size_t>(idx(input, col_parity, dx, dy))] != 0;
}

}  // namespace voqsim
