#include "voqsim/geometry.hpp"

#include <stdexcept>

namespace voqsim {

const char* port_name(Port p) {
  switch (p) {
    case Port::E: return "E";
    case Port::S: return "S";
    case Port::W: return "W";
    case Port::N: return "N";
    case Port::C: return "C";
  }
  return "?";
}

Port port_from_name(char c) {
  switch (c) {
    case 'E': case 'e': return Port::E;
    case 'S': case 's': return Port::S;
    case 'W': case 'w': return Port::W;
    case 'N': case 'n': return Port::N;
    case 'C': case 'c': return Port::C;
  }
  throw std::invalid_argument(std::string("unknown port name: ") + c);
}

Port opposite(Port p) {
  switch (p) {
    case Port::E: return Port::W;
    case Port::W: return Port::E;
    case Port::N: return Port::S;
    case Port::S: return Port::N;
    case Port::C: break;
  }
  throw std::invalid_argument("opposite(): centre port has no opposite");
}

int manhattan(Coord a, Coord b) {
  return std::abs(a.x - b.x) + std::abs(a.y - b.y);
}

bool Mesh::has_neighbor(Coord c, Port d) const {
  switch (d) {
    case Port::E: return c.x + 1 < width;
    case Port::W: return c.x - 1 >= 0;
    case Port::N: return c.y + 1 < height;
    case Port::S: return c.y - 1 >= 0;
    case Port::C: return false;
  }
  return false;
}

Coord Mesh::neighbor(Coord c, Port d) const {
  switch (d) {
    case Port::E: return {c.x + 1, c.y};
    case Port::W: return {c.x - 1, c.y};
    case Port::N: return {c.x, c.y + 1};
    case Port::S: return {c.x, c.y - 1};
    case Port::C: break;
  }
  throw std::invalid_argument("neighbor(): not a compass direction");
}

std::string turn_name(Turn t) {
  return std::string(port_name(t.in)) + port_name(t.out);
}

namespace {

// Next heading when turning clockwise; headings ordered E->S->W->N->E.
Port clockwise_next(Port heading) {
  switch (heading) {
    case Port::E: return Port::S;
    case Port::S: return Port::W;
    case Port::W: return Port::N;
    case Port::N: return Port::E;
    default: break;
  }
  throw std::logic_error("clockwise_next: compass heading expected");
}

}  // namespace

TurnClass classify_turn(Turn t) {
  if (t.in == Port::C) return TurnClass::Ingress;
  if (t.out == Port::C) return TurnClass::Egress;
  if (t.in == t.out) return TurnClass::UTurn;
  if (t.out == opposite(t.in)) return TurnClass::Straight;
  Port heading = opposite(t.in);
  return t.out == clockwise_next(heading) ? TurnClass::Clockwise
                                          : TurnClass::CounterClockwise;
}

PortSet admissible_outputs(Coord cur, Coord dst) {
  PortSet out;
  if (cur == dst) {
    out.add(Port::C);
    return out;
  }
  if (dst.x > cur.x) out.add(Port::E);
  if (dst.x < cur.x) out.add(Port::W);
  if (dst.y > cur.y) out.add(Port::N);
  if (dst.y < cur.y) out.add(Port::S);
  return out;
}

}  // namespace voqsim
