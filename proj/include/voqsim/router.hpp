#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "voqsim/geometry.hpp"
#include "voqsim/queueing.hpp"

namespace voqsim {

enum class QueueMode : std::uint8_t { OQ, VOQ };

const char* queue_mode_name(QueueMode m);

// Output-side arbitration state. Dequeuing a head flit pins the output to
// that packet until its tail has been dequeued, so packets never interleave
// on a link.
struct OutputArb {
  int rr = 0;  // next input index to consider
  bool pinned = false;
  std::uint32_t pin_packet = 0;
  Port pin_input = Port::E;
  int pin_remaining = 0;  // flits of the pinned packet still to dequeue
};

// Arrival-side pin: body flits of a packet whose head has been routed go to
// the head's landing queue without consulting the routing logic again.
struct LandingPin {
  bool active = false;
  std::uint32_t packet = 0;
  Port sel = Port::C;
  int remaining = 0;  // body flits still to arrive
};

// One mesh node: up to 5x5 turn queues (U-turns and centre-to-centre are
// never used), per-output arbiters, per-input landing pins, and the VOQ
// accept pointers.
class Router {
 public:
  Router() = default;
  Router(Coord coord, int capacity);

  Coord coord() const { return coord_; }

  static bool queue_exists(Turn t) {
    if (t.in == t.out) return false;  // U-turns and (C,C)
    return true;
  }

  TurnQueue& queue(Turn t) { return queues_[static_cast<size_t>(t.id())]; }
  const TurnQueue& queue(Turn t) const { return queues_[static_cast<size_t>(t.id())]; }

  OutputArb& out_arb(Port p) { return out_[static_cast<size_t>(p)]; }
  const OutputArb& out_arb(Port p) const { return out_[static_cast<size_t>(p)]; }

  LandingPin& landing(Port in) { return landing_[static_cast<size_t>(in)]; }
  const LandingPin& landing(Port in) const { return landing_[static_cast<size_t>(in)]; }

  int& accept_rr(Port in) { return accept_rr_[static_cast<size_t>(in)]; }

  int occupied_flits() const;

 private:
  Coord coord_{};
  std::vector<TurnQueue> queues_;
  std::array<OutputArb, 5> out_{};
  std::array<LandingPin, 5> landing_{};
  std::array<int, 5> accept_rr_{};
};

}  // namespace voqsim
