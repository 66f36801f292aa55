#pragma once

#include <cstdint>
#include <vector>

#include "voqsim/geometry.hpp"

namespace voqsim {

// O1-Turn order pinned per packet at injection.
enum class DorOrder : std::uint8_t { XYFirst = 0, YXFirst = 1 };

struct Flit {
  std::uint32_t packet_id = 0;
  std::uint16_t src = 0;   // node index
  std::uint16_t dst = 0;   // node index
  std::uint16_t size = 1;  // declared packet size, carried on every flit
  std::uint32_t inject_cycle = 0;
  bool is_head = true;
  bool is_tail = true;
  DorOrder route_attr = DorOrder::XYFirst;
};

// FIFO of flits for one (input, output) turn. Tracks three occupancy
// measures:
//   occ       physical flits present
//   occp      packet-granular: declared sizes of packets whose head flit is
//             currently in the queue (a packet counts fully from head
//             arrival; it stops counting here once its head moves on, the
//             downstream queue counts it from then)
//   reserved  admission ledger: declared sizes of packets from head enqueue
//             until tail dequeue; WPF admission checks against this so body
//             flits always find a physical slot
class TurnQueue {
 public:
  TurnQueue() = default;
  TurnQueue(Turn turn, int capacity);

  Turn turn() const { return turn_; }
  int capacity() const { return capacity_; }
  bool empty() const { return count_ == 0; }
  int occ() const { return count_; }
  int occp() const { return occp_; }
  int reserved() const { return reserved_; }
  bool awaiting_tail() const { return awaiting_tail_; }

  // WPF admission. Head flits: the whole packet must fit beside every
  // already-admitted, not-yet-departed packet, and the previously admitted
  // packet must be complete. Body flits of an admitted packet always fit.
  bool can_accept(const Flit& f) const;

  void enqueue(const Flit& f);
  Flit dequeue();
  const Flit& front() const;
  const Flit& at(int i) const;  // 0 = front, for inspection only

 private:
  Turn turn_{};
  int capacity_ = 0;
  std::vector<Flit> slots_;
  int head_ = 0;
  int count_ = 0;
  int occp_ = 0;
  int reserved_ = 0;
  bool awaiting_tail_ = false;
  std::uint32_t open_packet_ = 0;  // packet whose body flits are still arriving
};

}  // namespace voqsim
