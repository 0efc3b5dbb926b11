#include "srptq/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "srptq/error.hpp"
#include "srptq/quadrature.hpp"

namespace srptq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_overloaded(double rho) {
  if (!(rho > 1.0))
    throw Error(ErrorCode::NotOverloaded, "rho=" + std::to_string(rho) + " must exceed 1");
}

// Greedy order: by ratio descending, index ascending on ties. Free items
// (zero weight) come first.
std::vector<std::size_t> greedy_order(const std::vector<double>& gain,
                                      const std::vector<double>& cost) {
  std::vector<double> ratio(gain.size());
  for (std::size_t i = 0; i < gain.size(); ++i)
    ratio[i] = cost[i] > 0.0 ? gain[i] / cost[i] : kInf;
  std::vector<std::size_t> order(gain.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return ratio[a] > ratio[b]; });
  return order;
}

// max sum v_i x_i  s.t. sum w_i x_i <= capacity, x in [0,1]
std::vector<double> fractional_knapsack(const std::vector<double>& value,
                                        const std::vector<double>& weight, double capacity) {
  std::vector<double> x(value.size(), 0.0);
  double room = capacity;
  for (std::size_t i : greedy_order(value, weight)) {
    if (weight[i] <= 0.0) {
      x[i] = 1.0;
      continue;
    }
    if (room <= 0.0) break;
    x[i] = std::min(1.0, room / weight[i]);
    room -= x[i] * weight[i];
  }
  return x;
}

// min sum c_i x_i  s.t. sum a_i x_i >= requirement, x in [0,1]
std::vector<double> fractional_cover(const std::vector<double>& cost,
                                     const std::vector<double>& gain, double requirement) {
  std::vector<double> x(cost.size(), 0.0);
  double need = requirement;
  for (std::size_t i : greedy_order(gain, cost)) {
    if (cost[i] <= 0.0) {
      x[i] = 1.0;
      need -= gain[i];
      continue;
    }
    if (need <= 0.0) break;
    if (gain[i] <= 0.0) continue;
    x[i] = std::min(1.0, need / gain[i]);
    need -= x[i] * gain[i];
  }
  return x;
}

}  // namespace

ThresholdResult solve_threshold(const Distribution& service, double rho, double mu) {
  require_overloaded(rho);
  if (!service.is_continuous())
    throw Error(ErrorCode::InvalidArgument, "threshold requires a continuous service distribution");
  if (!(mu > 0.0)) throw Error(ErrorCode::InvalidArgument, "mu must be positive");

  const double target = 1.0 / (rho * mu);
  if (!(target < service.mean()))
    throw Error(ErrorCode::NoBracket, "truncated moment never reaches 1/(rho mu)");

  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; service.truncated_first_moment(hi) < target; ++i) {
    lo = hi;
    hi *= 2.0;
    if (i > 1100 || std::isinf(hi))
      throw Error(ErrorCode::NoBracket, "truncated moment never reaches 1/(rho mu)");
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (service.truncated_first_moment(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  const double tau =
      std::fabs(service.truncated_first_moment(lo) - target) <
              std::fabs(service.truncated_first_moment(hi) - target)
          ? lo
          : hi;
  return {tau, service.cdf(tau), target};
}

AsymptoticReport srpt_limits(const Distribution& service, double patience_mean, double rho,
                             double mu) {
  if (!(patience_mean > 0.0))
    throw Error(ErrorCode::InvalidArgument, "patience mean must be positive");
  AsymptoticReport r;
  r.rho = rho;
  r.threshold = solve_threshold(service, rho, mu);
  r.srpt_throughput_per_arrival = r.threshold.g_tau;
  r.srpt_wait = (1.0 - r.threshold.g_tau) * patience_mean;
  r.srpt_wait_given_served = 0.0;
  r.srpt_wait_given_abandon = patience_mean;
  r.blind_throughput_per_arrival = 1.0 / rho;
  return r;
}

double fcfs_fluid_boundary_wait(const Distribution& patience, double rho) {
  require_overloaded(rho);
  if (!patience.is_continuous())
    throw Error(ErrorCode::QuantileUndefined, "patience distribution has an atom");
  const double level = 1.0 - 1.0 / rho;
  const double w = patience.quantile(level);
  if (!std::isfinite(w) || std::fabs(patience.cdf(w) - level) > 1e-9)
    throw Error(ErrorCode::QuantileUndefined, "F never reaches 1 - 1/rho");
  return w;
}

double fcfs_fluid_wait(const Distribution& patience, double rho) {
  const double w = fcfs_fluid_boundary_wait(patience, rho);
  return patience.truncated_first_moment(w) + w * patience.survival(w);
}

double lcfs_fluid_wait(double patience_mean, double rho) {
  require_overloaded(rho);
  return (1.0 - 1.0 / rho) * patience_mean;
}

AsymptoticReport asymptotic_report(const Distribution& service, const Distribution& patience,
                                   double rho) {
  auto r = srpt_limits(service, patience.mean(), rho, 1.0 / service.mean());
  r.fcfs_fluid_boundary_wait = fcfs_fluid_boundary_wait(patience, rho);
  r.fcfs_fluid_wait = fcfs_fluid_wait(patience, rho);
  r.lcfs_fluid_wait = lcfs_fluid_wait(patience.mean(), rho);
  return r;
}

double erlang_blocking(int servers, double offered_load) {
  if (servers < 1) throw Error(ErrorCode::InvalidArgument, "servers must be >= 1");
  if (!(offered_load > 0.0)) throw Error(ErrorCode::InvalidArgument, "offered load must be positive");
  double b = 1.0;
  for (int k = 1; k <= servers; ++k) b = offered_load * b / (k + offered_load * b);
  return b;
}

double erlang_blocking_integral(int servers, double offered_load) {
  if (servers < 1) throw Error(ErrorCode::InvalidArgument, "servers must be >= 1");
  if (!(offered_load > 0.0)) throw Error(ErrorCode::InvalidArgument, "offered load must be positive");
  const double s = servers;
  const double r = offered_load;
  // (1 + t/r)^s e^{-t} in log space; the power alone overflows for large s.
  auto integrand = [s, r](double t) { return std::exp(s * std::log1p(t / r) - t); };
  QuadratureOptions opts;
  opts.abs_tol = 1e-11;
  return 1.0 / integrate_to_infinity(integrand, 0.0, 1e-22, opts).value;
}

double loss_class1_throughput(double lambda, int servers, double g_tau) {
  return lambda * g_tau * (1.0 - erlang_blocking(servers, static_cast<double>(servers)));
}

KnapsackSolution solve_admission_knapsack(const Distribution& service, double tau,
                                          std::size_t grid_size, KnapsackMode mode) {
  if (grid_size < 1) throw Error(ErrorCode::InvalidArgument, "grid_size must be positive");
  if (!(tau >= 0.0)) throw Error(ErrorCode::InvalidArgument, "tau must be nonnegative");

  // Uniform cells on [0, 2 tau] plus one tail cell; cells above tau are never
  // needed beyond the boundary, so resolution is spent below it.
  const double upper = tau > 0.0 && std::isfinite(tau) ? 2.0 * tau : service.quantile(0.999);
  const double h = upper / static_cast<double>(grid_size);

  KnapsackSolution sol;
  sol.cell_lower.resize(grid_size + 1);
  std::vector<double> mass(grid_size + 1), work(grid_size + 1);
  double prev_cdf = 0.0;
  for (std::size_t i = 0; i < grid_size; ++i) {
    const double a = h * static_cast<double>(i);
    const double b = i + 1 == grid_size ? upper : h * static_cast<double>(i + 1);
    const double cdf_b = service.cdf(b);
    sol.cell_lower[i] = a;
    mass[i] = cdf_b - prev_cdf;
    work[i] = 0.5 * (a + b) * mass[i];
    prev_cdf = cdf_b;
  }
  sol.cell_lower[grid_size] = upper;
  mass[grid_size] = service.survival(upper);
  work[grid_size] = service.mean() - service.truncated_first_moment(upper);

  double value = 0.0;
  if (mode == KnapsackMode::MaxThroughput) {
    sol.selection = fractional_knapsack(mass, work, service.truncated_first_moment(tau));
    for (std::size_t i = 0; i <= grid_size; ++i) value += mass[i] * sol.selection[i];
  } else {
    sol.selection = fractional_cover(work, mass, service.cdf(tau));
    for (std::size_t i = 0; i <= grid_size; ++i) value += work[i] * sol.selection[i];
  }
  sol.value = value;
  return sol;
}

double throughput_bound_oracle(const Distribution& service, double tau, std::size_t grid_size,
                               KnapsackMode mode) {
  if (grid_size < 100) throw Error(ErrorCode::InvalidArgument, "grid_size must be >= 100");
  const double fine = solve_admission_knapsack(service, tau, grid_size, mode).value;
  const double coarse = solve_admission_knapsack(service, tau, grid_size / 2, mode).value;
  const double scale = std::max(std::fabs(fine), std::fabs(coarse));
  if (scale > 0.0 && std::fabs(fine - coarse) > 1e-3 * scale)
    throw Error(ErrorCode::GridTooCoarse, "grid estimates differ by more than 1e-3 relative");
  return fine;
}

}  // namespace srptq
