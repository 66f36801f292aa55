#include "voqsim/traffic.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace voqsim {

const char* pattern_name(Pattern p) {
  switch (p) {
    case Pattern::UniformBernoulli: return "uniform";
    case Pattern::UniformBursty: return "bursty";
    case Pattern::BitComplement: return "bit-complement";
    case Pattern::BitReverse: return "bit-reverse";
    case Pattern::BitRotate: return "bit-rotate";
    case Pattern::Butterfly: return "butterfly";
    case Pattern::Transpose: return "transpose";
    case Pattern::Hotspot: return "hotspot";
  }
  return "?";
}

std::optional<Pattern> pattern_from_name(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(Pattern::Hotspot); ++i) {
    auto p = static_cast<Pattern>(i);
    if (name == pattern_name(p)) return p;
  }
  if (name == "uniform-bernoulli") return Pattern::UniformBernoulli;
  if (name == "uniform-bursty") return Pattern::UniformBursty;
  return std::nullopt;
}

bool pattern_needs_pow2(Pattern p) {
  switch (p) {
    case Pattern::BitComplement:
    case Pattern::BitReverse:
    case Pattern::BitRotate:
    case Pattern::Butterfly:
      return true;
    default:
      return false;
  }
}

bool pattern_needs_square(Pattern p) { return p == Pattern::Transpose; }

namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

int bit_width(int n) {
  int b = 0;
  while ((1 << b) < n) ++b;
  return b;
}

}  // namespace

int default_hotspot(const Mesh& mesh) {
  return mesh.index({mesh.width / 2, mesh.height / 2});
}

void validate_pattern(Pattern p, const Mesh& mesh, double rate, double burst_mean) {
  if (rate < 0.0 || rate > 1.0) throw std::invalid_argument("injection rate must be in [0, 1]");
  if (pattern_needs_pow2(p) && !is_pow2(mesh.nodes()))
    throw std::invalid_argument(std::string(pattern_name(p)) +
                                " needs a power-of-two node count");
  if (pattern_needs_square(p) && mesh.width != mesh.height)
    throw std::invalid_argument("transpose needs a square mesh");
  if (p == Pattern::UniformBursty) {
    if (burst_mean < 1.0) throw std::invalid_argument("burst mean must be >= 1");
    if (rate < 1.0 && rate / (burst_mean * (1.0 - rate)) > 1.0)
      throw std::invalid_argument("bursty rate infeasible for this burst mean");
  }
}

int gen_destination(Pattern p, const Mesh& mesh, int src, int hotspot_node, Rng& rng) {
  const int n = mesh.nodes();
  switch (p) {
    case Pattern::UniformBernoulli:
    case Pattern::UniformBursty: {
      if (n == 1) return src;
      int d = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n - 1)));
      return d >= src ? d + 1 : d;
    }
    case Pattern::BitComplement:
      return ~src & (n - 1);
    case Pattern::BitReverse: {
      int b = bit_width(n), out = 0;
      for (int i = 0; i < b; ++i)
        if (src & (1 << i)) out |= 1 << (b - 1 - i);
      return out;
    }
    case Pattern::BitRotate: {
      int b = bit_width(n);
      return (src >> 1) | ((src & 1) << (b - 1));
    }
    case Pattern::Butterfly: {
      int b = bit_width(n);
      if (b < 2) return src;
      int msb = (src >> (b - 1)) & 1, lsb = src & 1;
      int out = src & ~((1 << (b - 1)) | 1);
      return out | (lsb << (b - 1)) | msb;
    }
    case Pattern::Transpose: {
      Coord c = mesh.coord(src);
      return mesh.index({c.y, c.x});
    }
    case Pattern::Hotspot: {
      if (n == 1) return src;
      if (src == hotspot_node) {
        int d = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n - 1)));
        return d >= src ? d + 1 : d;
      }
      // Hotspot weighted 4, everyone else 1, src excluded.
      std::uint64_t total = static_cast<std::uint64_t>(n - 2) + 4;
      std::uint64_t r = uniform_below(rng, total);
      if (r < 4) return hotspot_node;
      int d = static_cast<int>(r - 4);
      // Map onto nodes excluding src and hotspot, in index order.
      int lo = std::min(src, hotspot_node), hi = std::max(src, hotspot_node);
      if (d >= lo) ++d;
      if (d >= hi) ++d;
      return d;
    }
  }
  return src;
}

TrafficGen::TrafficGen(Pattern p, const Mesh& mesh, double rate, int hotspot_node,
                       double burst_mean)
    : pattern_(p), mesh_(mesh), rate_(rate), hotspot_(hotspot_node) {
  if (p == Pattern::UniformBursty) {
    on_.assign(static_cast<size_t>(mesh.nodes()), 0);
    if (rate >= 1.0) {
      p_on_ = 1.0;
      p_off_ = 0.0;
      std::fill(on_.begin(), on_.end(), 1);
    } else if (rate > 0.0) {
      p_off_ = 1.0 / burst_mean;
      p_on_ = rate / (burst_mean * (1.0 - rate));
    }
  }
}

std::vector<TraceEvent> parse_trace(std::istream& in, const std::string& name, const Mesh& mesh,
                                    bool strict) {
  std::vector<TraceEvent> events;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw std::runtime_error(name + ":" + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    long long cycle = 0, src = 0, dst = 0, size = 1;
    if (!(ls >> cycle)) {
      std::string junk;
      if (ls.clear(), ls >> junk) fail("expected `cycle src dst [size]`");
      continue;  // blank or comment-only line
    }
    if (!(ls >> src >> dst)) fail("expected `cycle src dst [size]`");
    if (!(ls >> size)) size = 1;
    std::string extra;
    if (ls >> extra) fail("trailing fields: " + extra);
    if (cycle < 0) fail("negative cycle");
    if (src < 0 || src >= mesh.nodes()) fail("source node out of range: " + std::to_string(src));
    if (dst < 0 || dst >= mesh.nodes())
      fail("destination node out of range: " + std::to_string(dst));
    if (size < 1) fail("packet size must be >= 1");
    if (!events.empty() && static_cast<std::uint64_t>(cycle) < events.back().cycle) {
      if (strict) fail("events not sorted by cycle");
    }
    events.push_back({static_cast<std::uint64_t>(cycle), static_cast<int>(src),
                      static_cast<int>(dst), static_cast<int>(size)});
  }
  if (!strict)
    std::stable_sort(events.begin(), events.end(),
                     [](const TraceEvent& a, const TraceEvent& b) { return a.cycle < b.cycle; });
  return events;
}

std::vector<TraceEvent> load_trace(const std::string& path, const Mesh& mesh, bool strict) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open trace file");
  return parse_trace(in, path, mesh, strict);
}

}  // namespace voqsim
