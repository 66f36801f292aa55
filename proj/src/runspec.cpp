#include "voqsim/runspec.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace voqsim {

std::pair<int, int> parse_mesh(const std::string& s) {
  auto x = s.find('x');
  if (x == std::string::npos) x = s.find('X');
  if (x == std::string::npos) throw std::invalid_argument("mesh must look like 8x8: " + s);
  try {
    int w = std::stoi(s.substr(0, x));
    int h = std::stoi(s.substr(x + 1));
    if (w < 1 || h < 1) throw std::invalid_argument("");
    return {w, h};
  } catch (const std::exception&) {
    throw std::invalid_argument("mesh must look like 8x8: " + s);
  }
}

std::vector<double> parse_rates(const std::string& s) {
  std::vector<double> out;
  if (s.find(':') != std::string::npos) {
    double lo, hi, step;
    char c1, c2;
    std::istringstream is(s);
    if (!(is >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0)
      throw std::invalid_argument("rates must be lo:hi:step or a comma list: " + s);
    for (double r = lo; r <= hi + step * 1e-9; r += step) out.push_back(r);
    return out;
  }
  std::istringstream is(s);
  std::string item;
  while (std::getline(is, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  if (out.empty()) throw std::invalid_argument("no rates given");
  return out;
}

std::vector<std::uint64_t> parse_seeds(const std::string& s) {
  std::vector<std::uint64_t> out;
  auto dots = s.find("..");
  if (dots != std::string::npos) {
    std::uint64_t lo = std::stoull(s.substr(0, dots));
    std::uint64_t hi = std::stoull(s.substr(dots + 2));
    if (hi < lo) throw std::invalid_argument("seed range is reversed: " + s);
    for (std::uint64_t v = lo; v <= hi; ++v) out.push_back(v);
    return out;
  }
  std::istringstream is(s);
  std::string item;
  while (std::getline(is, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stoull(item));
  }
  if (out.empty()) throw std::invalid_argument("no seeds given");
  return out;
}

void validate_spec(const SimConfig& cfg, bool pattern_given, bool rate_given) {
  if (!cfg.trace_path.empty()) {
    if (pattern_given)
      throw std::invalid_argument("trace mode and --pattern are mutually exclusive");
    if (rate_given) throw std::invalid_argument("trace mode and --rate are mutually exclusive");
  }
  cfg.validate();
}

}  // namespace voqsim
