#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "voqsim/csv.hpp"
#include "voqsim/engine.hpp"
#include "voqsim/verify.hpp"

namespace py = pybind11;
using namespace voqsim;

namespace {

SimConfig config_from_kwargs(const py::kwargs& kw) {
  SimConfig cfg;
  for (auto item : kw) {
    std::string key = py::cast<std::string>(item.first);
    py::handle v = item.second;
    if (key == "width") cfg.width = py::cast<int>(v);
    else if (key == "height") cfg.height = py::cast<int>(v);
    else if (key == "mode") {
      std::string s = py::cast<std::string>(v);
      if (s != "oq" && s != "voq") throw std::invalid_argument("mode must be 'oq' or 'voq'");
      cfg.mode = s == "voq" ? QueueMode::VOQ : QueueMode::OQ;
    } else if (key == "capacity") cfg.queue_capacity = py::cast<int>(v);
    else if (key == "algorithm") {
      auto a = algorithm_from_name(py::cast<std::string>(v));
      if (!a) throw std::invalid_argument("unknown algorithm");
      cfg.algorithm = *a;
    } else if (key == "pattern") {
      auto p = pattern_from_name(py::cast<std::string>(v));
      if (!p) throw std::invalid_argument("unknown pattern");
      cfg.pattern = *p;
    } else if (key == "trace") cfg.trace_path = py::cast<std::string>(v);
    else if (key == "rate") cfg.rate = py::cast<double>(v);
    else if (key == "packet_size") cfg.packet_size = py::cast<int>(v);
    else if (key == "warmup") cfg.warmup = py::cast<std::uint64_t>(v);
    else if (key == "roi") cfg.roi = py::cast<std::uint64_t>(v);
    else if (key == "max_cycles") cfg.max_cycles = py::cast<std::uint64_t>(v);
    else if (key == "latency_threshold") cfg.latency_threshold = py::cast<double>(v);
    else if (key == "seed") cfg.seed = py::cast<std::uint64_t>(v);
    else if (key == "hotspot_node") cfg.hotspot_node = py::cast<int>(v);
    else if (key == "burst_mean") cfg.burst_mean = py::cast<double>(v);
    else throw std::invalid_argument("unknown option: " + key);
  }
  return cfg;
}

py::dict metrics_to_dict(const RunMetrics& m) {
  py::dict d;
  d["injected_packets"] = m.injected_packets;
  d["delivered"] = m.delivered;
  d["delivered_total"] = m.delivered_total;
  d["avg_latency"] = m.avg_latency;
  d["throughput"] = m.throughput;
  d["early_stopped"] = m.early_stopped;
  d["cycles_run"] = m.cycles_run;
  d["window_deliveries"] = m.window_deliveries;
  d["deadlock"] = m.deadlocked();
  if (m.deadlock) {
    py::list cyc;
    for (auto& [node, turn] : m.deadlock->cycle_queues)
      cyc.append(py::make_tuple(node, turn_name(turn)));
    d["deadlock_cycle"] = cyc;
    d["deadlock_at"] = m.deadlock->cycle;
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_voqsim, m) {
  m.doc() = "Flit-level 2D-mesh NoC simulator with OQ/VOQ routers and "
            "freedom-condition deadlock avoidance";

  m.def(
      "simulate", [](const py::kwargs& kw) { return metrics_to_dict(simulate(config_from_kwargs(kw))); },
      "Run one simulation; keyword arguments mirror the CLI flags");

  m.def(
      "sweep",
      [](const std::vector<double>& rates, const std::vector<std::uint64_t>& seeds, int jobs,
         const py::kwargs& kw) {
        SimConfig base = config_from_kwargs(kw);
        auto rows = sweep(base, rates, seeds, jobs);
        py::list out;
        for (const SweepRow& r : rows) {
          py::dict d = metrics_to_dict(r.metrics);
          d["rate"] = r.rate;
          d["seed"] = r.mean ? py::object(py::str("mean")) : py::object(py::int_(r.seed));
          out.append(d);
        }
        return out;
      },
      py::arg("rates"), py::arg("seeds"), py::arg("jobs") = 0);

  m.def(
      "sweep_csv",
      [](const std::vector<double>& rates, const std::vector<std::uint64_t>& seeds, int jobs,
         const py::kwargs& kw) {
        SimConfig base = config_from_kwargs(kw);
        return sweep_to_csv(base, sweep(base, rates, seeds, jobs));
      },
      py::arg("rates"), py::arg("seeds"), py::arg("jobs") = 0);

  m.def("enumerate_turn_combinations", [] {
    py::list out;
    for (const TurnPair& p : legal_turn_combinations())
      out.append(py::make_tuple(turn_name(p.cw), turn_name(p.ccw)));
    return out;
  });

  m.def(
      "classify_turn",
      [](const std::string& in, const std::string& out) {
        Turn t{port_from_name(in.at(0)), port_from_name(out.at(0))};
        switch (classify_turn(t)) {
          case TurnClass::Straight: return "straight";
          case TurnClass::Clockwise: return "clockwise";
          case TurnClass::CounterClockwise: return "counterclockwise";
          case TurnClass::Ingress: return "ingress";
          case TurnClass::Egress: return "egress";
          case TurnClass::UTurn: return "u-turn";
        }
        return "?";
      },
      py::arg("input"), py::arg("output"));

  m.def(
      "admissible_outputs",
      [](int width, int height, std::pair<int, int> cur, std::pair<int, int> dst) {
        Mesh m{width, height};
        if (!m.contains({cur.first, cur.second}) || !m.contains({dst.first, dst.second}))
          throw std::invalid_argument("coordinate outside the mesh");
        std::vector<std::string> out;
        admissible_outputs({cur.first, cur.second}, {dst.first, dst.second})
            .for_each([&](Port p) { out.emplace_back(port_name(p)); });
        return out;
      },
      py::arg("width"), py::arg("height"), py::arg("cur"), py::arg("dst"));

  m.def(
      "freedom_condition",
      [](int capacity, int packet_size, int target_occp, const std::vector<int>& feeder_occp,
         int claims) {
        if (feeder_occp.size() != 3)
          throw std::invalid_argument("three feeder occupancies expected");
        // A northbound decision one hop below a restricted SE turn.
        struct View {
          int cap, target, c, s, w, claim;
          int local_occ(Turn t) const { return local_occp(t); }
          int local_occp(Turn t) const {
            if (t == Turn{Port::C, Port::N}) return c;
            if (t == Turn{Port::S, Port::N}) return s;
            if (t == Turn{Port::W, Port::N}) return w;
            return 0;
          }
          int remote_occ(Port, Turn) const { return target; }
          int remote_occp(Port, Turn) const { return target; }
          int remote_cap(Port, Turn) const { return cap; }
          int claims(Port, Turn) const { return claim; }
        } view{capacity, target_occp, feeder_occp[0], feeder_occp[1], feeder_occp[2], claims};
        static const RestrictionSet gate =
            RestrictionSet::of({{Port::S, Port::E}, {Port::S, Port::W}});
        Mesh mesh{2, 2};
        return eval_F(mesh, gate, Coord{0, 0}, Coord{1, 1}, Port::N, packet_size, view);
      },
      py::arg("capacity"), py::arg("packet_size"), py::arg("target_occp"),
      py::arg("feeder_occp"), py::arg("claims") = 0,
      "Worst-case admission check for a restricted next-hop queue");

  m.def(
      "verify", [](bool quick, int jobs) {
        py::list out;
        for (const CheckResult& r : run_verification(quick, jobs)) {
          py::dict d;
          d["name"] = r.name;
          d["passed"] = r.passed;
          d["detail"] = r.detail;
          out.append(d);
        }
        return out;
      },
      py::arg("quick") = true, py::arg("jobs") = 0);

#ifdef VOQSIM_VERSION
#define VOQSIM_STR2(x) #x
#define VOQSIM_STR(x) VOQSIM_STR2(x)
  m.attr("__version__") = VOQSIM_STR(VOQSIM_VERSION);
#else
  m.attr("__version__") = "0.1.0";
#endif
}
