#include "voqsim/freedom.hpp"

#include <stdexcept>

namespace voqsim {

NextQueues next_queues(const Mesh& mesh, Coord cur, Coord dst, Port sel) {
  if (!is_compass(sel)) throw std::invalid_argument("next_queues: sel must be a compass port");
  if (!mesh.has_neighbor(cur, sel)) throw std::invalid_argument("next_queues: no neighbour there");
  Coord nb = mesh.neighbor(cur, sel);
  Port in = opposite(sel);
  NextQueues out;
  admissible_outputs(nb, dst).for_each([&](Port d) {
    if (out.n < 2) out.q[static_cast<size_t>(out.n++)] = Turn{in, d};
  });
  return out;
}

std::array<Turn, 3> feeders(Port sel, Turn target) {
  if (!is_compass(sel)) throw std::invalid_argument("feeders: sel must be a compass port");
  if (target.in != opposite(sel))
    throw std::invalid_argument("feeders: target is not fed through sel");
  TurnClass c = classify_turn(target);
  if (c != TurnClass::Clockwise && c != TurnClass::CounterClockwise)
    throw std::invalid_argument("feeders: target must be a clockwise/counterclockwise turn");
  // A packet already moving along the target's output axis in the opposite
  // direction can never take the target turn (it would reverse progress),
  // so the same-axis feeder is the queue fed from opposite(target.out).
  return {Turn{Port::C, sel}, Turn{opposite(sel), sel}, Turn{opposite(target.out), sel}};
}

}  // namespace voqsim
