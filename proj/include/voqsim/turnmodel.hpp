#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

#include "voqsim/geometry.hpp"

namespace voqsim {

// Set of forbidden compass-to-compass turns. A valid turn-model set keeps
// at least one clockwise and one counterclockwise turn forbidden while
// every diagonal travel direction retains at least one permitted turn.
class RestrictionSet {
 public:
  RestrictionSet() = default;
  static RestrictionSet of(std::initializer_list<Turn> turns);

  void add(Turn t);
  bool forbids(Turn t) const { return (mask_ >> t.id()) & 1u; }
  bool empty() const { return mask_ == 0; }
  int count() const { return __builtin_popcount(mask_); }
  std::vector<Turn> turns() const;

  bool valid() const;
  void validate() const;  // throws std::invalid_argument with the reason

  friend bool operator==(const RestrictionSet&, const RestrictionSet&) = default;

 private:
  std::uint32_t mask_ = 0;
};

struct TurnPair {
  Turn cw;
  Turn ccw;
};

// All two-restriction combinations permitted by the turn model: one
// clockwise and one counterclockwise forbidden turn that do not close off
// a diagonal. Exactly 12.
std::vector<TurnPair> legal_turn_combinations();

// Diagonal a clockwise/counterclockwise turn serves, encoded as a bit pair
// over {E,W} x {N,S} headings. Turns serving the same diagonal must not
// both be forbidden.
int turn_diagonal(Turn t);

// Column-parity-dependent restrictions (odd-even routing). Plain turn-model
// algorithms use the same set for both parities.
struct TurnRule {
  RestrictionSet even;
  RestrictionSet odd;

  static TurnRule uniform(RestrictionSet s) { return {s, s}; }
  bool forbids(Turn t, int x) const {
    return (x % 2 == 0 ? even : odd).forbids(t);
  }
  bool forbids_at_parity(Turn t, int parity) const {
    return (parity == 0 ? even : odd).forbids(t);
  }
  bool parity_dependent() const { return !(even == odd); }
};

// Odd-even rule set (Chiu): turns out of eastward travel are forbidden in
// even columns, turns into westward travel in odd columns.
TurnRule odd_even_rule();

// Minimal-path reachability: can a packet that entered through `input` at a
// column of the given parity complete a remaining offset of (dx, dy) without
// ever taking a forbidden turn? Adaptive turn-restricted routing uses this
// to drop candidates that would strand the packet.
class ReachTable {
 public:
  ReachTable() = default;
  ReachTable(const TurnRule& rule, const Mesh& mesh);

  bool reach(Port input, int col_parity, int dx, int dy) const;
  bool trivial() const { return trivial_; }

 private:
  int idx(Port input, int parity, int dx, int dy) const;
  int w_ = 0, h_ = 0;
  bool trivial_ = true;  // empty rule: everything reachable
  std::vector<std::uint8_t> table_;
};

}  // namespace voqsim
