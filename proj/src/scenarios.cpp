#include "srptq/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "srptq/csv.hpp"
#include "srptq/error.hpp"

namespace srptq {

std::size_t Table::column(std::string_view col) const {
  const auto it = std::find(columns.begin(), columns.end(), col);
  if (it == columns.end()) throw Error(ErrorCode::InvalidArgument, "no column " + std::string(col));
  return static_cast<std::size_t>(it - columns.begin());
}

std::vector<double> Table::column_values(std::string_view col) const {
  const std::size_t j = column(col);
  std::vector<double> v;
  v.reserve(rows.size());
  for (const auto& r : rows) v.push_back(r[j]);
  return v;
}

void write_table_csv(std::ostream& os, const Table& t) {
  os << "# srptq " << t.name << " v1\n";
  CsvRow header;
  for (const auto& c : t.columns) header.add(c);
  os << header.str() << '\n';
  for (const auto& r : t.rows) {
    CsvRow row;
    for (double v : r) row.add(v);
    os << row.str() << '\n';
  }
}

std::string gnuplot_script(const Table& t, const std::string& csv_file) {
  std::ostringstream gp;
  gp << "set datafile separator ','\n"
     << "set key autotitle columnhead\n"
     << "set xlabel '" << t.columns.front() << "'\n"
     << "set title '" << t.name << "'\n"
     << "plot ";
  for (std::size_t j = 1; j < t.columns.size(); ++j) {
    if (j > 1) gp << ", \\\n     ";
    // First line is the version comment, second the header.
    gp << "'" << csv_file << "' every ::1 using 1:" << (j + 1) << " with linespoints";
  }
  gp << '\n';
  return gp.str();
}

std::vector<double> shape_grid(double start, double stop, double step) {
  if (!(step > 0.0) || stop < start) throw Error(ErrorCode::InvalidArgument, "bad shape grid");
  std::vector<double> g;
  for (int i = 0;; ++i) {
    const double v = std::round((start + i * step) * 1e10) / 1e10;
    if (v > stop + 1e-12) break;
    g.push_back(v);
  }
  return g;
}

std::vector<double> default_figure1_grid(Family patience_family) {
  return patience_family == Family::Pareto ? shape_grid(1.1, 3.0, 0.1) : shape_grid(0.2, 2.0, 0.1);
}

std::vector<double> default_figure2_grid(Family service_family) {
  return service_family == Family::Pareto ? shape_grid(1.2, 3.0, 0.2) : shape_grid(0.4, 1.6, 0.2);
}

std::vector<double> default_figure3_grid() { return shape_grid(0.3, 2.0, 0.1); }

Table figure1(std::span<const double> shapes, Family patience_family, double rho) {
  if (patience_family != Family::Weibull && patience_family != Family::Pareto)
    throw Error(ErrorCode::InvalidArgument, "figure1 varies a Weibull or Pareto patience shape");
  const auto service = Distribution::exponential(1.0);
  Table t{"figure1_" + std::string(to_string(patience_family)),
          {"shape", "srpt_wait", "fcfs_wait", "lcfs_wait", "fcfs_boundary_wait"},
          {}};
  for (double a : shapes) {
    const auto patience = Distribution::with_mean(patience_family, a, 1.0);
    const auto r = asymptotic_report(service, patience, rho);
    t.rows.push_back({a, r.srpt_wait, r.fcfs_fluid_wait, r.lcfs_fluid_wait, r.fcfs_fluid_boundary_wait});
  }
  return t;
}

Table figure2(std::span<const double> shapes, Family service_family, double rho) {
  if (service_family != Family::Weibull && service_family != Family::Pareto)
    throw Error(ErrorCode::InvalidArgument, "figure2 varies a Weibull or Pareto service shape");
  const auto patience = Distribution::with_mean(Family::Weibull, 0.4, 1.0);
  Table t{"figure2_" + std::string(to_string(service_family)),
          {"shape", "tau", "srpt_throughput", "blind_throughput"},
          {}};
  for (double a : shapes) {
    const auto service = Distribution::with_mean(service_family, a, 1.0);
    const auto r = asymptotic_report(service, patience, rho);
    t.rows.push_back({a, r.threshold.tau, r.srpt_throughput_per_arrival, r.blind_throughput_per_arrival});
  }
  return t;
}

Table figure3(std::span<const double> service_shapes, double patience_shape, double rho) {
  const auto patience = Distribution::with_mean(Family::Weibull, patience_shape, 1.0);
  Table t{"figure3_patience_shape_" + format_number(patience_shape),
          {"shape", "tau", "g_tau", "srpt_wait", "fcfs_wait", "lcfs_wait"},
          {}};
  for (double a : service_shapes) {
    const auto service = Distribution::with_mean(Family::Weibull, a, 1.0);
    const auto r = asymptotic_report(service, patience, rho);
    t.rows.push_back({a, r.threshold.tau, r.threshold.g_tau, r.srpt_wait, r.fcfs_fluid_wait,
                      r.lcfs_fluid_wait});
  }
  return t;
}

double figure1_wait_difference(double weibull_patience_shape, double rho) {
  const auto r = asymptotic_report(Distribution::exponential(1.0),
                                   Distribution::with_mean(Family::Weibull, weibull_patience_shape, 1.0), rho);
  return r.fcfs_fluid_wait - r.srpt_wait;
}

double figure1_crossover(double lo, double hi, double rho, double tol) {
  double f_lo = figure1_wait_difference(lo, rho);
  const double f_hi = figure1_wait_difference(hi, rho);
  if ((f_lo < 0.0) == (f_hi < 0.0))
    throw Error(ErrorCode::NoBracket, "wait difference has the same sign at both ends");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = figure1_wait_difference(mid, rho);
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Table report_table(std::span<const AsymptoticReport> reports) {
  Table t{"limits",
          {"rho", "tau", "g_tau", "scaled_capacity", "srpt_throughput_per_arrival",
           "blind_throughput_per_arrival", "srpt_wait", "srpt_wait_given_served",
           "srpt_wait_given_abandon", "fcfs_fluid_boundary_wait", "fcfs_fluid_wait",
           "lcfs_fluid_wait"},
          {}};
  for (const auto& r : reports)
    t.rows.push_back({r.rho, r.threshold.tau, r.threshold.g_tau, r.threshold.scaled_capacity,
                      r.srpt_throughput_per_arrival, r.blind_throughput_per_arrival, r.srpt_wait,
                      r.srpt_wait_given_served, r.srpt_wait_given_abandon,
                      r.fcfs_fluid_boundary_wait, r.fcfs_fluid_wait, r.lcfs_fluid_wait});
  return t;
}

Table threshold_table(const ThresholdResult& r, double rho) {
  return Table{"threshold", {"rho", "tau", "g_tau", "scaled_capacity"},
               {{rho, r.tau, r.g_tau, r.scaled_capacity}}};
}

}  // namespace srptq
