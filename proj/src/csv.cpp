#include "voqsim/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace voqsim {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::string csv_header() {
  return "algorithm,pattern,mode,rate,seed,avg_latency,throughput,delivered,early_stopped,"
         "deadlock\n";
}

std::string csv_row(const SimConfig& cfg, const std::string& seed_field, const RunMetrics& m,
                    double rate) {
  std::string pattern = cfg.trace_path.empty() ? pattern_name(cfg.pattern) : "trace";
  std::string row;
  row += algorithm_name(cfg.algorithm);
  row += ',';
  row += pattern;
  row += ',';
  row += queue_mode_name(cfg.mode);
  row += ',';
  row += fmt(rate);
  row += ',';
  row += seed_field;
  row += ',';
  row += fmt(m.avg_latency);
  row += ',';
  row += fmt(m.throughput);
  row += ',';
  row += std::to_string(m.delivered);
  row += ',';
  row += m.early_stopped ? "true" : "false";
  row += ',';
  row += m.deadlocked() ? "true" : "false";
  row += '\n';
  return row;
}

std::string sweep_to_csv(const SimConfig& base, const std::vector<SweepRow>& rows) {
  std::string out = csv_header();
  for (const SweepRow& r : rows)
    out += csv_row(base, r.mean ? "mean" : std::to_string(r.seed), r.metrics, r.rate);
  return out;
}

std::string run_to_csv(const SimConfig& cfg, const RunMetrics& m) {
  std::string out = csv_header();
  out += csv_row(cfg, std::to_string(cfg.seed), m, cfg.rate);
  out += csv_row(cfg, "mean", m, cfg.rate);
  return out;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error(path + ": cannot open for writing");
  f << contents;
  if (!f) throw std::runtime_error(path + ": write failed");
}

}  // namespace voqsim
