#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "srptq/analytics.hpp"
#include "srptq/dists.hpp"

namespace srptq {

/// A numeric table emitted as CSV; figure studies produce one per run.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::size_t column(std::string_view name) const;
  std::vector<double> column_values(std::string_view name) const;
};

void write_table_csv(std::ostream& os, const Table& t);

/// Companion gnuplot script plotting every column against the first.
std::string gnuplot_script(const Table& t, const std::string& csv_file);

inline constexpr double kFigureRho = 1.4;

/// start, start+step, ... up to `stop` inclusive, rounded to 10 decimals.
std::vector<double> shape_grid(double start, double stop, double step);
std::vector<double> default_figure1_grid(Family patience_family);
std::vector<double> default_figure2_grid(Family service_family);
std::vector<double> default_figure3_grid();

/// Waits vs patience shape; service Exp(1), patience mean 1.
/// Columns: shape, srpt_wait, fcfs_wait, lcfs_wait, fcfs_boundary_wait.
Table figure1(std::span<const double> shapes, Family patience_family, double rho = kFigureRho);

/// Per-arrival throughput vs service shape; service mean 1, patience Weibull(0.4, mean 1).
/// Columns: shape, tau, srpt_throughput, blind_throughput.
Table figure2(std::span<const double> shapes, Family service_family, double rho = kFigureRho);

/// Waits vs Weibull service shape; patience Weibull(patience_shape, mean 1).
/// Columns: shape, tau, g_tau, srpt_wait, fcfs_wait, lcfs_wait.
Table figure3(std::span<const double> service_shapes, double patience_shape,
              double rho = kFigureRho);

/// FCFS fluid wait minus SRPT limit wait for Exp(1) service and Weibull(shape,
/// mean 1) patience.
double figure1_wait_difference(double weibull_patience_shape, double rho = kFigureRho);

/// Bisection for the Weibull patience shape where figure1_wait_difference
/// changes sign inside [lo, hi]. Throws NoBracket if the signs agree.
double figure1_crossover(double lo, double hi, double rho = kFigureRho, double tol = 1e-10);

/// One-row table with every AsymptoticReport field, in a fixed column order.
Table report_table(std::span<const AsymptoticReport> reports);

/// One-row table with tau, G(tau) and s/lambda.
Table threshold_table(const ThresholdResult& r, double rho);

}  // namespace srptq
