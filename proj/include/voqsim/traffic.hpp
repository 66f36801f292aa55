#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "voqsim/geometry.hpp"

namespace voqsim {

enum class Pattern : std::uint8_t {
  UniformBernoulli,
  UniformBursty,
  BitComplement,
  BitReverse,
  BitRotate,
  Butterfly,
  Transpose,
  Hotspot,
};

const char* pattern_name(Pattern p);
std::optional<Pattern> pattern_from_name(std::string_view name);

using Rng = std::mt19937_64;

// Stable across platforms; plain modulo keeps draws deterministic and the
// bias at 64-bit width is irrelevant here.
inline double uniform01(Rng& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }
inline std::uint64_t uniform_below(Rng& g, std::uint64_t n) { return g() % n; }

bool pattern_needs_pow2(Pattern p);
bool pattern_needs_square(Pattern p);

// Node addresses are y * width + x; bit rotation goes right.
int gen_destination(Pattern p, const Mesh& mesh, int src, int hotspot_node, Rng& rng);

// Throws std::invalid_argument on incompatible pattern/mesh/rate settings.
void validate_pattern(Pattern p, const Mesh& mesh, double rate, double burst_mean);

int default_hotspot(const Mesh& mesh);  // centre node, floor(w/2), floor(h/2)

// Open-loop injection. Bernoulli: every node independently generates a
// packet with probability `rate` per cycle. Bursty: per-node on/off process
// with geometric burst lengths of the given mean, off lengths calibrated so
// the long-run injection probability equals `rate`.
class TrafficGen {
 public:
  TrafficGen() = default;
  TrafficGen(Pattern p, const Mesh& mesh, double rate, int hotspot_node, double burst_mean);

  // Calls emit(src, dst) for each packet generated this cycle, in node order.
  template <class Fn>
  void step(Rng& rng, Fn&& emit) {
    int n = mesh_.nodes();
    if (pattern_ == Pattern::UniformBursty) {
      for (int src = 0; src < n; ++src) {
        if (on_[static_cast<size_t>(src)]) {
          emit(src, gen_destination(pattern_, mesh_, src, hotspot_, rng));
          if (p_off_ > 0 && uniform01(rng) < p_off_) on_[static_cast<size_t>(src)] = 0;
        } else {
          if (p_on_ > 0 && uniform01(rng) < p_on_) on_[static_cast<size_t>(src)] = 1;
        }
      }
      return;
    }
    for (int src = 0; src < n; ++src) {
      if (rate_ >= 1.0 || (rate_ > 0 && uniform01(rng) < rate_))
        emit(src, gen_destination(pattern_, mesh_, src, hotspot_, rng));
    }
  }

 private:
  Pattern pattern_ = Pattern::UniformBernoulli;
  Mesh mesh_{};
  double rate_ = 0;
  int hotspot_ = 0;
  double p_on_ = 0, p_off_ = 0;
  std::vector<std::uint8_t> on_;
};

struct TraceEvent {
  std::uint64_t cycle = 0;
  int src = 0;
  int dst = 0;
  int size = 1;
};

// Plain-text trace: one `cycle src dst size` event per line, `#` comments,
// blank lines ignored, the size column optional (default 1). Events must be
// sorted by cycle unless strict is off, in which case they are sorted.
std::vector<TraceEvent> parse_trace(std::istream& in, const std::string& name, const Mesh& mesh,
                                    bool strict = true);
std::vector<TraceEvent> load_trace(const std::string& path, const Mesh& mesh, bool strict = true);

}  // namespace voqsim
