#pragma once

#include <string>
#include <vector>

#include "voqsim/engine.hpp"

namespace voqsim {

// CSV schema: algorithm,pattern,mode,rate,seed,avg_latency,throughput,
// delivered,early_stopped,deadlock; one row per run, aggregate rows carry
// seed=mean. Output is byte-stable for identical inputs.
std::string csv_header();
std::string csv_row(const SimConfig& cfg, const std::string& seed_field, const RunMetrics& m,
                    double rate);
std::string sweep_to_csv(const SimConfig& base, const std::vector<SweepRow>& rows);
std::string run_to_csv(const SimConfig& cfg, const RunMetrics& m);
void write_file(const std::string& path, const std::string& contents);

}  // namespace voqsim
