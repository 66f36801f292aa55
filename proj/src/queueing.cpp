#include "voqsim/queueing.hpp"

#include <stdexcept>

namespace voqsim {

TurnQueue::TurnQueue(Turn turn, int capacity)
    : turn_(turn), capacity_(capacity), slots_(static_cast<size_t>(capacity)) {
  if (capacity <= 0) throw std::invalid_argument("queue capacity must be positive");
}

bool TurnQueue::can_accept(const Flit& f) const {
  if (f.is_head) {
    if (awaiting_tail_) return false;
    return capacity_ - reserved_ >= static_cast<int>(f.size);
  }
  // Body flit: space was reserved when its head was admitted.
  return awaiting_tail_ && f.packet_id == open_packet_;
}

void TurnQueue::enqueue(const Flit& f) {
  if (!can_accept(f)) throw std::logic_error("enqueue into non-accepting queue");
  if (count_ >= capacity_) throw std::logic_error("queue overflow");
  slots_[static_cast<size_t>((head_ + count_) % capacity_)] = f;
  ++count_;
  if (f.is_head) {
    occp_ += f.size;
    reserved_ += f.size;
  }
  if (f.is_tail) {
    awaiting_tail_ = false;
  } else {
    awaiting_tail_ = true;
    open_packet_ = f.packet_id;
  }
}

Flit TurnQueue::dequeue() {
  if (count_ == 0) throw std::logic_error("dequeue from empty queue");
  Flit f = slots_[static_cast<size_t>(head_)];
  head_ = (head_ + 1) % capacity_;
  --count_;
  if (f.is_head) occp_ -= f.size;
  if (f.is_tail) reserved_ -= f.size;
  return f;
}

const Flit& TurnQueue::front() const {
  if (count_ == 0) throw std::logic_error("front of empty queue");
  return slots_[static_cast<size_t>(head_)];
}

const Flit& TurnQueue::at(int i) const {
  if (i < 0 || i >= count_) throw std::out_of_range("queue index");
  return slots_[static_cast<size_t>((head_ + i) % capacity_)];
}

}  // namespace voqsim
