#pragma once

#include <string>
#include <vector>

#include "voqsim/engine.hpp"

namespace voqsim {

// Parse "WxH", e.g. "8x8".
std::pair<int, int> parse_mesh(const std::string& s);

// Parse "lo:hi:step" (inclusive endpoints, tolerant of float drift) or a
// comma-separated list.
std::vector<double> parse_rates(const std::string& s);

// Parse "a..b" (inclusive) or a comma-separated list.
std::vector<std::uint64_t> parse_seeds(const std::string& s);

// Cross-field validation beyond SimConfig::validate (e.g. trace vs pattern
// flags). Throws std::invalid_argument.
void validate_spec(const SimConfig& cfg, bool pattern_given, bool rate_given);

}  // namespace voqsim
