#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "srptq/analytics.hpp"
#include "srptq/config.hpp"
#include "srptq/engine.hpp"
#include "srptq/error.hpp"
#include "srptq/scenarios.hpp"
#include "srptq/stats.hpp"
#include "srptq/verify.hpp"

namespace py = pybind11;
using namespace srptq;

namespace {

py::dict table_dict(const Table& t) {
  py::dict d;
  d["name"] = t.name;
  d["columns"] = t.columns;
  d["rows"] = t.rows;
  return d;
}

py::dict threshold_dict(const ThresholdResult& r) {
  py::dict d;
  d["tau"] = r.tau;
  d["g_tau"] = r.g_tau;
  d["scaled_capacity"] = r.scaled_capacity;
  return d;
}

py::dict report_dict(const AsymptoticReport& r) {
  py::dict d = threshold_dict(r.threshold);
  d["rho"] = r.rho;
  d["srpt_throughput_per_arrival"] = r.srpt_throughput_per_arrival;
  d["srpt_wait"] = r.srpt_wait;
  d["srpt_wait_given_served"] = r.srpt_wait_given_served;
  d["srpt_wait_given_abandon"] = r.srpt_wait_given_abandon;
  d["blind_throughput_per_arrival"] = r.blind_throughput_per_arrival;
  d["fcfs_fluid_boundary_wait"] = r.fcfs_fluid_boundary_wait;
  d["fcfs_fluid_wait"] = r.fcfs_fluid_wait;
  d["lcfs_fluid_wait"] = r.lcfs_fluid_wait;
  return d;
}

std::vector<double> grid_or_default(std::optional<std::vector<double>> g, std::vector<double> fallback) {
  return g ? *g : std::move(fallback);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "C++ core of srptq";

  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  py::enum_<Family>(m, "Family")
      .value("Exponential", Family::Exponential)
      .value("Weibull", Family::Weibull)
      .value("Pareto", Family::Pareto)
      .value("Deterministic", Family::Deterministic);

  py::enum_<Discipline>(m, "Discipline")
      .value("SRPT", Discipline::SRPT)
      .value("FCFS", Discipline::FCFS)
      .value("LCFS", Discipline::LCFS)
      .value("PriorityLoss", Discipline::PriorityLoss);

  py::enum_<Metric> metric(m, "Metric");
  for (Metric x : all_metrics()) metric.value(std::string(to_string(x)).c_str(), x);

  py::class_<Distribution>(m, "Distribution")
      .def_static("exponential", &Distribution::exponential, py::arg("mean"))
      .def_static("weibull", &Distribution::weibull, py::arg("shape"), py::arg("scale"))
      .def_static("pareto", &Distribution::pareto, py::arg("shape"), py::arg("scale"))
      .def_static("deterministic", &Distribution::deterministic, py::arg("value"))
      .def_static("with_mean", &Distribution::with_mean, py::arg("family"), py::arg("shape"), py::arg("mean"))
      .def_property_readonly("family", &Distribution::family)
      .def_property_readonly("shape", &Distribution::shape)
      .def_property_readonly("scale", &Distribution::scale)
      .def("mean", &Distribution::mean)
      .def("cdf", &Distribution::cdf, py::arg("x"))
      .def("survival", &Distribution::survival, py::arg("x"))
      .def("pdf", &Distribution::pdf, py::arg("x"))
      .def("hazard", &Distribution::hazard, py::arg("x"))
      .def("truncated_first_moment", &Distribution::truncated_first_moment, py::arg("tau"))
      .def("quantile", &Distribution::quantile, py::arg("p"))
      .def("__eq__", [](const Distribution& a, const Distribution& b) { return a == b; })
      .def("__repr__", &Distribution::describe);

  py::class_<SystemConfig>(m, "SystemConfig")
      .def(py::init<>())
      .def_static("from_json", &parse_config, py::arg("text"))
      .def_static("load", [](const std::string& path) { return load_config(path); }, py::arg("path"))
      .def("to_json", &to_json)
      .def("with_servers", &SystemConfig::with_servers, py::arg("servers"))
      .def("validate", &SystemConfig::validate)
      .def("threshold", &SystemConfig::threshold)
      .def_readwrite("lambda_", &SystemConfig::lambda)
      .def_readwrite("servers", &SystemConfig::servers)
      .def_readwrite("rho", &SystemConfig::rho)
      .def_readwrite("service", &SystemConfig::service)
      .def_readwrite("patience", &SystemConfig::patience)
      .def_readwrite("discipline", &SystemConfig::discipline)
      .def_readwrite("horizon", &SystemConfig::horizon)
      .def_readwrite("warmup", &SystemConfig::warmup)
      .def_readwrite("seeds", &SystemConfig::seeds)
      .def_readwrite("batches", &SystemConfig::batches)
      .def_readwrite("debug_invariants", &SystemConfig::debug_invariants);

  m.def(
      "solve_threshold",
      [](const Distribution& service, double rho, std::optional<double> mu) {
        return threshold_dict(mu ? solve_threshold(service, rho, *mu) : solve_threshold(service, rho));
      },
      py::arg("service"), py::arg("rho"), py::arg("mu") = py::none());
  m.def(
      "asymptotic_report",
      [](const Distribution& s, const Distribution& p, double rho) { return report_dict(asymptotic_report(s, p, rho)); },
      py::arg("service"), py::arg("patience"), py::arg("rho"));
  m.def("fcfs_fluid_boundary_wait", &fcfs_fluid_boundary_wait, py::arg("patience"), py::arg("rho"));
  m.def("fcfs_fluid_wait", &fcfs_fluid_wait, py::arg("patience"), py::arg("rho"));
  m.def("lcfs_fluid_wait", &lcfs_fluid_wait, py::arg("patience_mean"), py::arg("rho"));
  m.def("erlang_blocking", &erlang_blocking, py::arg("servers"), py::arg("offered_load"));
  m.def("erlang_blocking_integral", &erlang_blocking_integral, py::arg("servers"), py::arg("offered_load"));
  m.def("loss_class1_throughput", &loss_class1_throughput, py::arg("lam"), py::arg("servers"), py::arg("g_tau"));
  m.def(
      "throughput_bound_oracle",
      [](const Distribution& s, double tau, std::size_t grid, bool min_workload) {
        return throughput_bound_oracle(s, tau, grid,
                                       min_workload ? KnapsackMode::MinWorkload : KnapsackMode::MaxThroughput);
      },
      py::arg("service"), py::arg("tau"), py::arg("grid_size") = 100'000, py::arg("min_workload") = false);

  m.def(
      "simulate",
      [](const SystemConfig& cfg, int workers) {
        SimMetrics metrics;
        {
          py::gil_scoped_release release;
          metrics = summarize(run_replications(cfg, cfg.seeds, workers));
        }
        py::dict out;
        for (Metric x : all_metrics()) {
          const auto& e = metrics[x];
          out[py::str(std::string(to_string(x)))] = py::make_tuple(e.value, e.half_width, e.samples);
        }
        return out;
      },
      py::arg("config"), py::arg("workers") = 1,
      "Batch-means estimates over cfg.seeds: {metric: (estimate, half_width, batches)}.");

  m.def(
      "run_coupled",
      [](const SystemConfig& cfg, std::uint64_t seed, std::optional<double> tau) {
        CoupledCounters c;
        {
          py::gil_scoped_release release;
          c = run_coupled(cfg, tau.value_or(cfg.threshold()), seed, false).counters;
        }
        py::dict d;
        d["n_L1"] = c.n_L1;
        d["n_O"] = c.n_O;
        d["epochs_checked"] = c.epochs_checked;
        d["violations"] = c.violations;
        d["min_slack"] = c.min_slack;
        return d;
      },
      py::arg("config"), py::arg("seed"), py::arg("tau") = py::none());

  m.def(
      "figure1",
      [](std::optional<std::vector<double>> grid, Family family) {
        return table_dict(figure1(grid_or_default(grid, default_figure1_grid(family)), family));
      },
      py::arg("grid") = py::none(), py::arg("family") = Family::Weibull);
  m.def(
      "figure2",
      [](std::optional<std::vector<double>> grid, Family family) {
        return table_dict(figure2(grid_or_default(grid, default_figure2_grid(family)), family));
      },
      py::arg("grid") = py::none(), py::arg("family") = Family::Weibull);
  m.def(
      "figure3",
      [](std::optional<std::vector<double>> grid, double patience_shape) {
        return table_dict(figure3(grid_or_default(grid, default_figure3_grid()), patience_shape));
      },
      py::arg("grid") = py::none(), py::arg("patience_shape") = 0.4);

  m.def(
      "verify",
      [](std::vector<int> criteria, const SystemConfig& base) {
        VerifyPlan plan;
        plan.criteria = std::move(criteria);
        std::vector<CheckResult> results;
        {
          py::gil_scoped_release release;
          results = run_verification(base, plan);
        }
        py::list out;
        for (const auto& r : results) {
          py::dict d;
          d["id"] = r.id;
          d["name"] = r.name;
          d["passed"] = r.passed;
          d["detail"] = r.detail;
          out.append(d);
        }
        return out;
      },
      py::arg("criteria"), py::arg("base") = SystemConfig{});
}
