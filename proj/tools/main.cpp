#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "voqsim/csv.hpp"
#include "voqsim/engine.hpp"
#include "voqsim/runspec.hpp"
#include "voqsim/verify.hpp"

namespace {

using namespace voqsim;

struct CommonOpts {
  std::string mesh = "8x8";
  std::string mode = "oq";
  std::string alg = "xy";
  std::string pattern;
  std::string trace;
  double rate = 0.1;
  int capacity = 8;
  int packet_size = 1;
  std::uint64_t warmup = 1000;
  std::uint64_t roi = 5000;
  std::uint64_t max_cycles = 0;
  double latency_threshold = 1500;
  std::uint64_t seed = 1;
  int hotspot = -1;
  double burst_mean = 8.0;
  bool no_strict_trace = false;
  std::string csv_path;
  bool pattern_given = false;
  bool rate_given = false;
};

// key=value config file mirroring the flags; command-line flags win because
// the file is applied to the defaults before parsing.
void apply_config_file(CommonOpts& o, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument(path + ": cannot read config file");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      size_t a = s.find_first_not_of(" \t\r");
      size_t b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::string entry = trim(line);
    if (entry.empty()) continue;
    auto eq = entry.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(entry.substr(0, eq));
    std::string value = trim(entry.substr(eq + 1));
    if (key == "mesh") o.mesh = value;
    else if (key == "mode") o.mode = value;
    else if (key == "alg" || key == "algorithm") o.alg = value;
    else if (key == "pattern") { o.pattern = value; o.pattern_given = true; }
    else if (key == "trace") o.trace = value;
    else if (key == "rate") { o.rate = std::stod(value); o.rate_given = true; }
    else if (key == "capacity") o.capacity = std::stoi(value);
    else if (key == "packet-size") o.packet_size = std::stoi(value);
    else if (key == "warmup") o.warmup = std::stoull(value);
    else if (key == "roi") o.roi = std::stoull(value);
    else if (key == "max-cycles") o.max_cycles = std::stoull(value);
    else if (key == "latency-threshold") o.latency_threshold = std::stod(value);
    else if (key == "seed") o.seed = std::stoull(value);
    else if (key == "hotspot-node") o.hotspot = std::stoi(value);
    else if (key == "burst-mean") o.burst_mean = std::stod(value);
    else if (key == "csv") o.csv_path = value;
    else
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": unknown key " + key);
  }
}

// The file must be known before CLI11 parses so that flags override it.
std::string prescan_config(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) return argv[i + 1];
    if (a.rfind("--config=", 0) == 0) return a.substr(9);
  }
  return {};
}

void add_common(CLI::App* app, CommonOpts& o) {
  app->add_option("--mesh", o.mesh, "Mesh dimensions, e.g. 8x8");
  app->add_option("--mode", o.mode, "Queue mode: oq or voq")
      ->check(CLI::IsMember({"oq", "voq"}));
  app->add_option("--alg", o.alg,
                  "Routing algorithm: xy, yx, west-first, north-last, negative-first, "
                  "odd-even, o1turn, full-freedom, xy-adaptive, xy-o1turn");
  app->add_option("--pattern", o.pattern,
                  "Traffic pattern: uniform, bursty, bit-complement, bit-reverse, "
                  "bit-rotate, butterfly, transpose, hotspot");
  app->add_option("--trace", o.trace, "Trace file (cycle src dst [size] per line)");
  app->add_option("--rate", o.rate, "Injection rate per node per cycle");
  app->add_option("--capacity", o.capacity, "Queue depth in flits");
  app->add_option("--packet-size", o.packet_size, "Flits per packet");
  app->add_option("--warmup", o.warmup, "Warmup cycles before the ROI");
  app->add_option("--roi", o.roi, "Measured cycles");
  app->add_option("--max-cycles", o.max_cycles, "Hard cycle cap (0: warmup+roi)");
  app->add_option("--latency-threshold", o.latency_threshold,
                  "Early-stop mean latency threshold (0 disables)");
  app->add_option("--seed", o.seed, "RNG seed");
  app->add_option("--hotspot-node", o.hotspot, "Hotspot node index (-1: centre)");
  app->add_option("--burst-mean", o.burst_mean, "Mean burst length for bursty traffic");
  app->add_flag("--no-strict-trace", o.no_strict_trace, "Sort unsorted trace input");
  app->add_option("--csv", o.csv_path, "Write results to this CSV file");
  // Handled by a prescan before parsing so flags override the file.
  app->add_option("--config")->description("Read options from a key=value file");
}

SimConfig to_config(const CommonOpts& o) {
  SimConfig cfg;
  auto [w, h] = parse_mesh(o.mesh);
  cfg.width = w;
  cfg.height = h;
  cfg.mode = o.mode == "voq" ? QueueMode::VOQ : QueueMode::OQ;
  auto alg = algorithm_from_name(o.alg);
  if (!alg) throw std::invalid_argument("unknown algorithm: " + o.alg);
  cfg.algorithm = *alg;
  if (!o.pattern.empty()) {
    auto p = pattern_from_name(o.pattern);
    if (!p) throw std::invalid_argument("unknown pattern: " + o.pattern);
    cfg.pattern = *p;
  }
  cfg.trace_path = o.trace;
  cfg.trace_strict = !o.no_strict_trace;
  cfg.rate = o.rate;
  cfg.queue_capacity = o.capacity;
  cfg.packet_size = o.packet_size;
  cfg.warmup = o.warmup;
  cfg.roi = o.roi;
  cfg.max_cycles = o.max_cycles;
  cfg.latency_threshold = o.latency_threshold;
  cfg.seed = o.seed;
  cfg.hotspot_node = o.hotspot;
  cfg.burst_mean = o.burst_mean;
  validate_spec(cfg, o.pattern_given, o.rate_given);
  return cfg;
}

void print_metrics(const SimConfig& cfg, const RunMetrics& m) {
  std::printf("cycles run      : %llu\n", static_cast<unsigned long long>(m.cycles_run));
  std::printf("injected packets: %llu\n", static_cast<unsigned long long>(m.injected_packets));
  std::printf("delivered (ROI) : %llu\n", static_cast<unsigned long long>(m.delivered));
  std::printf("avg latency     : %.3f cycles\n", m.avg_latency);
  std::printf("throughput      : %.4f packets/node/cycle\n", m.throughput);
  std::printf("early stopped   : %s\n", m.early_stopped ? "yes" : "no");
  if (m.deadlock) {
    std::printf("deadlock        : cycle %llu, %zu queues:\n",
                static_cast<unsigned long long>(m.deadlock->cycle),
                m.deadlock->cycle_queues.size());
    for (auto& [node, turn] : m.deadlock->cycle_queues) {
      Coord c{node % cfg.width, node / cfg.width};
      std::printf("  node (%d,%d) queue %s\n", c.x, c.y, turn_name(turn).c_str());
    }
  } else {
    std::printf("deadlock        : none\n");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"voqsim: flit-level 2D-mesh NoC simulator with OQ/VOQ routers"};
  app.require_subcommand(1);

  CommonOpts run_o, sweep_o;
  std::string rates_s = "0.05:0.95:0.05", seeds_s = "1..5";
  int jobs = 0;
  bool quick = false;

  CLI::App* run_cmd = app.add_subcommand("run", "Simulate one configuration");
  add_common(run_cmd, run_o);

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Sweep injection rates x seeds");
  add_common(sweep_cmd, sweep_o);
  sweep_cmd->add_option("--rates", rates_s, "lo:hi:step or comma list");
  sweep_cmd->add_option("--seeds", seeds_s, "a..b or comma list");
  sweep_cmd->add_option("--jobs", jobs, "Concurrent simulations (0: hardware)");

  CLI::App* verify_cmd =
      app.add_subcommand("verify", "Run the deadlock-freedom and freedom-condition suites");
  verify_cmd->add_flag("--quick", quick, "Reduced scale for smoke testing");
  verify_cmd->add_option("--jobs", jobs, "Concurrent simulations (0: hardware)");

  CLI::App* enum_cmd =
      app.add_subcommand("enumerate-turns", "List the legal two-restriction combinations");

  try {
    const std::string cfg_file = prescan_config(argc, argv);
    if (!cfg_file.empty()) {
      apply_config_file(run_o, cfg_file);
      apply_config_file(sweep_o, cfg_file);
    }
    app.parse(argc, argv);

    if (run_cmd->parsed()) {
      run_o.pattern_given |= run_cmd->count("--pattern") > 0;
      run_o.rate_given |= run_cmd->count("--rate") > 0;
      SimConfig cfg = to_config(run_o);
      RunMetrics m = simulate(cfg);
      print_metrics(cfg, m);
      if (!run_o.csv_path.empty()) write_file(run_o.csv_path, run_to_csv(cfg, m));
      return 0;
    }

    if (sweep_cmd->parsed()) {
      sweep_o.pattern_given |= sweep_cmd->count("--pattern") > 0;
      sweep_o.rate_given |= sweep_cmd->count("--rate") > 0;
      if (!sweep_o.trace.empty())
        throw std::invalid_argument("sweep uses synthetic traffic; trace mode has fixed timestamps");
      SimConfig base = to_config(sweep_o);
      auto rates = parse_rates(rates_s);
      auto seeds = parse_seeds(seeds_s);
      auto rows = sweep(base, rates, seeds, jobs);
      std::string csv = sweep_to_csv(base, rows);
      if (!sweep_o.csv_path.empty()) {
        write_file(sweep_o.csv_path, csv);
        std::printf("%zu rows -> %s\n", rows.size(), sweep_o.csv_path.c_str());
      } else {
        std::fputs(csv.c_str(), stdout);
      }
      return 0;
    }

    if (verify_cmd->parsed()) {
      auto results = run_verification(quick, jobs);
      bool all = true;
      for (const CheckResult& r : results) {
        std::printf("[%s] %s: %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.c_str());
        all &= r.passed;
      }
      return all ? 0 : 2;
    }

    if (enum_cmd->parsed()) {
      auto combos = legal_turn_combinations();
      for (const TurnPair& p : combos)
        std::printf("forbid %s (clockwise) + %s (counterclockwise)\n", turn_name(p.cw).c_str(),
                    turn_name(p.ccw).c_str());
      std::printf("%zu combinations\n", combos.size());
      return 0;
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
