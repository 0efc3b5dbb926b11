#pragma once

#include <cstddef>
#include <vector>

#include "srptq/dists.hpp"

namespace srptq {

struct ThresholdResult {
  double tau = 0.0;              // +inf when the system is not overloaded
  double g_tau = 1.0;            // G(tau)
  double scaled_capacity = 0.0;  // s / lambda = 1 / (rho mu)
};

/// Limiting SRPT measures next to the blind-policy fluid values.
struct AsymptoticReport {
  double rho = 0.0;
  ThresholdResult threshold;
  double srpt_throughput_per_arrival = 0.0;
  double srpt_wait = 0.0;
  double srpt_wait_given_served = 0.0;
  double srpt_wait_given_abandon = 0.0;
  double blind_throughput_per_arrival = 0.0;
  double fcfs_fluid_boundary_wait = 0.0;
  double fcfs_fluid_wait = 0.0;
  double lcfs_fluid_wait = 0.0;
};

/// Finds tau with E[S 1(S <= tau)] = 1/(rho mu) by bisection.
/// Throws NotOverloaded for rho <= 1.
ThresholdResult solve_threshold(const Distribution& service, double rho, double mu);
inline ThresholdResult solve_threshold(const Distribution& service, double rho) {
  return solve_threshold(service, rho, 1.0 / service.mean());
}

/// SRPT fields of the report; patience enters only through its mean.
AsymptoticReport srpt_limits(const Distribution& service, double patience_mean, double rho,
                             double mu);

/// w = F^{-1}(1 - 1/rho).
double fcfs_fluid_boundary_wait(const Distribution& patience, double rho);

/// E[T 1(T <= w)] + w (1 - F(w)).
double fcfs_fluid_wait(const Distribution& patience, double rho);

/// (1 - 1/rho) E[T].
double lcfs_fluid_wait(double patience_mean, double rho);

/// Every field, SRPT and blind.
AsymptoticReport asymptotic_report(const Distribution& service, const Distribution& patience,
                                   double rho);

/// Erlang-B by the recursion B(k) = r B(k-1) / (k + r B(k-1)).
double erlang_blocking(int servers, double offered_load);

/// Erlang-B as (int_0^inf (1 + t/r)^s e^{-t} dt)^{-1}. Test oracle for the recursion.
double erlang_blocking_integral(int servers, double offered_load);

/// lambda G(tau) (1 - B(s, s)).
double loss_class1_throughput(double lambda, int servers, double g_tau);

enum class KnapsackMode { MaxThroughput, MinWorkload };

struct KnapsackSolution {
  double value = 0.0;
  std::vector<double> cell_lower;   // grid cell edges; the last cell runs to +inf
  std::vector<double> selection;    // gamma per cell, in [0,1]
};

/// Discretized admission LP over the service support, solved greedily.
/// MaxThroughput: max sum p_i g_i subject to sum w_i g_i <= E[S 1(S <= tau)].
/// MinWorkload:   min sum w_i g_i subject to sum p_i g_i >= G(tau).
/// p_i is the exact cell mass and w_i = midpoint * p_i.
KnapsackSolution solve_admission_knapsack(const Distribution& service, double tau,
                                          std::size_t grid_size, KnapsackMode mode);

/// Value of solve_admission_knapsack, checked against the half-size grid.
/// Throws GridTooCoarse if the two differ by more than 1e-3 relative.
double throughput_bound_oracle(const Distribution& service, double tau, std::size_t grid_size,
                               KnapsackMode mode);

}  // namespace srptq
