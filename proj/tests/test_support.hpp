#pragma once

#include <map>
#include <utility>

#include "voqsim/freedom.hpp"
#include "voqsim/queueing.hpp"

namespace voqsim::test {

// Occupancy view backed by explicit tables; anything unset reads as zero.
struct StubView {
  std::map<int, int> locc, loccp;                    // by turn id
  std::map<std::pair<int, int>, int> rocc, roccp;    // by (sel, turn id)
  std::map<std::pair<int, int>, int> claim;
  int cap = 8;

  void set_local(Turn t, int occ, int occp) {
    locc[t.id()] = occ;
    loccp[t.id()] = occp;
  }
  void set_remote(Port sel, Turn t, int occ, int occp) {
    rocc[{static_cast<int>(sel), t.id()}] = occ;
    roccp[{static_cast<int>(sel), t.id()}] = occp;
  }

  static int get(const std::map<int, int>& m, int k) {
    auto it = m.find(k);
    return it == m.end() ? 0 : it->second;
  }
  static int get(const std::map<std::pair<int, int>, int>& m, std::pair<int, int> k) {
    auto it = m.find(k);
    return it == m.end() ? 0 : it->second;
  }

  int local_occ(Turn t) const { return get(locc, t.id()); }
  int local_occp(Turn t) const { return get(loccp, t.id()); }
  int remote_occ(Port sel, Turn t) const { return get(rocc, {static_cast<int>(sel), t.id()}); }
  int remote_occp(Port sel, Turn t) const { return get(roccp, {static_cast<int>(sel), t.id()}); }
  int remote_cap(Port, Turn) const { return cap; }
  int claims(Port sel, Turn t) const { return get(claim, {static_cast<int>(sel), t.id()}); }
};

static_assert(OccupancyView<StubView>);

inline Flit make_flit(std::uint32_t id, int size, int i) {
  Flit f;
  f.packet_id = id;
  f.size = static_cast<std::uint16_t>(size);
  f.is_head = i == 0;
  f.is_tail = i == size - 1;
  return f;
}

}  // namespace voqsim::test
