#include "voqsim/router.hpp"

namespace voqsim {

const char* queue_mode_name(QueueMode m) { return m == QueueMode::OQ ? "oq" : "voq"; }

Router::Router(Coord coord, int capacity) : coord_(coord) {
  queues_.reserve(kTurnCount);
  for (int id = 0; id < kTurnCount; ++id) queues_.emplace_back(Turn::from_id(id), capacity);
}

int Router::occupied_flits() const {
  int n = 0;
  for (const TurnQueue& q : queues_) n += q.occ();
  return n;
}

}  // namespace voqsim
