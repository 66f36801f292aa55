#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace voqsim {

// Compass ports plus the local centre. A flit leaving a router through E
// enters the eastern neighbour through W. Axis convention: x grows east,
// y grows north, so a flit entering through port S is heading north.
enum class Port : std::uint8_t { E = 0, S = 1, W = 2, N = 3, C = 4 };

inline constexpr std::array<Port, 5> kAllPorts = {Port::E, Port::S, Port::W,
                                                  Port::N, Port::C};
inline constexpr std::array<Port, 4> kCompassPorts = {Port::E, Port::S,
                                                      Port::W, Port::N};

constexpr bool is_compass(Port p) { return p != Port::C; }

const char* port_name(Port p);
Port port_from_name(char c);

// Facing port: E<->W, N<->S. The centre has no opposite.
Port opposite(Port p);

struct Coord {
  int x = 0;
  int y = 0;
  friend bool operator==(const Coord&, const Coord&) = default;
};

int manhattan(Coord a, Coord b);

struct Mesh {
  int width = 0;
  int height = 0;

  int nodes() const { return width * height; }
  bool contains(Coord c) const {
    return c.x >= 0 && c.x < width && c.y >= 0 && c.y < height;
  }
  int index(Coord c) const { return c.y * width + c.x; }
  Coord coord(int idx) const { return {idx % width, idx / width}; }
  bool has_neighbor(Coord c, Port d) const;
  Coord neighbor(Coord c, Port d) const;  // precondition: has_neighbor
};

// (input port, output port) pair; names one queue within one router.
struct Turn {
  Port in = Port::C;
  Port out = Port::C;

  constexpr int id() const { return static_cast<int>(in) * 5 + static_cast<int>(out); }
  static constexpr Turn from_id(int id) {
    return {static_cast<Port>(id / 5), static_cast<Port>(id % 5)};
  }
  friend bool operator==(const Turn&, const Turn&) = default;
};

inline constexpr int kTurnCount = 25;

std::string turn_name(Turn t);  // e.g. "SE" for {S, E}

enum class TurnClass : std::uint8_t {
  Straight,
  Clockwise,
  CounterClockwise,
  Ingress,
  Egress,
  UTurn,
};

// Classification under the fixed convention: heading = opposite of the
// input port, clockwise heading order E->S->W->N->E.
TurnClass classify_turn(Turn t);

// Small set of ports; iteration helpers preserve no particular order, use
// explicit orderings at call sites where tie-breaking matters.
class PortSet {
 public:
  constexpr PortSet() = default;

  constexpr void add(Port p) { bits_ |= mask(p); }
  constexpr bool contains(Port p) const { return bits_ & mask(p); }
  constexpr int size() const { return __builtin_popcount(bits_); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint8_t raw() const { return bits_; }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (Port p : kAllPorts)
      if (contains(p)) fn(p);
  }

  friend constexpr bool operator==(PortSet a, PortSet b) = default;

 private:
  static constexpr std::uint8_t mask(Port p) {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(p));
  }
  std::uint8_t bits_ = 0;
};

// Output ports that strictly reduce the Manhattan distance to dst;
// {C} iff cur == dst. Size is 1 or 2 otherwise.
PortSet admissible_outputs(Coord cur, Coord dst);

}  // namespace voqsim
