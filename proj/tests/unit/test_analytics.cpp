#include <cmath>

#include "catch_amalgamated.hpp"
#include "srptq/analytics.hpp"
#include "srptq/error.hpp"
#include "srptq/quadrature.hpp"

using namespace srptq;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Frozen from bisection over adaptive quadrature of x e^{-x} (rho = 1.4).
constexpr double kTauExp = 2.5077328998;
constexpr double kGExp = 0.918547308511;

const Distribution kExp = Distribution::exponential(1.0);

}  // namespace

TEST_CASE("threshold for exponential service", "[threshold]") {
  const auto r = solve_threshold(kExp, 1.4);
  CHECK_THAT(r.tau, WithinAbs(kTauExp, 1e-9));
  CHECK_THAT(r.g_tau, WithinAbs(kGExp, 1e-11));
  CHECK_THAT(r.scaled_capacity, WithinAbs(1.0 / 1.4, 1e-15));
  CHECK(std::fabs(1.0 - std::exp(-r.tau) * (1.0 + r.tau) - 1.0 / 1.4) <= 1e-10);
}

TEST_CASE("threshold near critical load", "[threshold]") {
  CHECK(solve_threshold(kExp, 1.0001).tau > 9.0);
}

TEST_CASE("threshold preconditions", "[threshold]") {
  CHECK_THROWS_WITH(solve_threshold(kExp, 0.9), ContainsSubstring("not overloaded"));
  CHECK_THROWS_WITH(solve_threshold(kExp, 1.0), ContainsSubstring("not overloaded"));
  CHECK_THROWS_AS(solve_threshold(Distribution::deterministic(1.0), 1.4), Error);
}

TEST_CASE("threshold fills capacity for every family", "[threshold]") {
  for (const auto& s : {Distribution::exponential(0.5), Distribution::with_mean(Family::Weibull, 0.4, 1.0),
                        Distribution::with_mean(Family::Weibull, 1.6, 2.0),
                        Distribution::with_mean(Family::Pareto, 1.5, 1.0)}) {
    for (double rho : {1.1, 1.4, 2.0, 5.0}) {
      const auto r = solve_threshold(s, rho);
      INFO(s.describe() << " rho=" << rho);
      CHECK_THAT(s.truncated_first_moment(r.tau) / s.mean(), WithinAbs(1.0 / rho, 1e-10));
      CHECK(r.g_tau > 1.0 / rho);
      CHECK(r.g_tau < 1.0);
    }
  }
}

TEST_CASE("SRPT limit measures", "[limits]") {
  const auto r = srpt_limits(kExp, 1.0, 1.4, 1.0);
  CHECK_THAT(r.srpt_wait, WithinAbs(0.0814526914893, 1e-11));
  CHECK_THAT(r.srpt_wait, WithinAbs(0.081, 5e-4));
  CHECK(r.srpt_wait_given_abandon == 1.0);
  CHECK(r.srpt_wait_given_served == 0.0);
  CHECK_THAT(r.srpt_throughput_per_arrival, WithinAbs(kGExp, 1e-11));
  CHECK_THAT(r.blind_throughput_per_arrival, WithinAbs(1.0 / 1.4, 1e-15));
  CHECK(srpt_limits(Distribution::with_mean(Family::Weibull, 0.7, 1.0), 0.5, 1.4, 1.0).srpt_wait_given_abandon == 0.5);
}

TEST_CASE("SRPT limits ignore the patience law beyond its mean", "[limits]") {
  const auto a = asymptotic_report(kExp, Distribution::exponential(1.0), 1.4);
  const auto b = asymptotic_report(kExp, Distribution::with_mean(Family::Weibull, 0.4, 1.0), 1.4);
  const auto c = asymptotic_report(kExp, Distribution::with_mean(Family::Pareto, 2.0, 1.0), 1.4);
  for (const auto* x : {&b, &c}) {
    CHECK_THAT(x->srpt_wait, WithinAbs(a.srpt_wait, 1e-12));
    CHECK_THAT(x->srpt_wait_given_abandon, WithinAbs(a.srpt_wait_given_abandon, 1e-12));
    CHECK(x->srpt_throughput_per_arrival == a.srpt_throughput_per_arrival);
    CHECK(x->threshold.tau == a.threshold.tau);
  }
}

TEST_CASE("FCFS fluid wait", "[fluid]") {
  const auto pat = Distribution::exponential(1.0);
  CHECK_THAT(fcfs_fluid_boundary_wait(pat, 1.4), WithinAbs(std::log(1.4), 1e-12));
  CHECK_THAT(fcfs_fluid_wait(pat, 1.4), WithinAbs(0.285714285714, 1e-11));
  CHECK_THAT(fcfs_fluid_wait(pat, 1.4), WithinAbs(lcfs_fluid_wait(1.0, 1.4), 1e-12));
  CHECK_THAT(fcfs_fluid_wait(pat, 1e9), WithinAbs(pat.mean(), 1e-8));
}

TEST_CASE("FCFS fluid wait against integrated survival", "[fluid]") {
  // E[min(T, w)] = int_0^w (1 - F(t)) dt, an identity independent of the
  // truncated-moment route.
  for (double shape : {0.4, 0.8, 1.6}) {
    const auto pat = Distribution::with_mean(Family::Weibull, shape, 1.0);
    for (double rho : {1.1, 1.4, 3.0}) {
      const double w = fcfs_fluid_boundary_wait(pat, rho);
      const double oracle = adaptive_simpson([&](double t) { return pat.survival(t); }, 0.0, w, {1e-13, 1'000'000}).value;
      INFO("shape=" << shape << " rho=" << rho);
      CHECK_THAT(fcfs_fluid_wait(pat, rho), WithinAbs(oracle, 1e-9));
    }
  }
}

TEST_CASE("LCFS fluid wait", "[fluid]") {
  CHECK_THAT(lcfs_fluid_wait(1.0, 1.4), WithinAbs(0.285714285714, 1e-11));
  CHECK_THAT(lcfs_fluid_wait(1.0, 1.0 + 1e-12), WithinAbs(0.0, 1e-11));
  CHECK_THAT(lcfs_fluid_wait(0.5, 2.0), WithinAbs(0.25, 1e-15));
  CHECK_THROWS_AS(lcfs_fluid_wait(1.0, 0.9), Error);
}

TEST_CASE("Erlang-B", "[erlang]") {
  CHECK_THAT(erlang_blocking(1, 1.0), WithinAbs(0.5, 1e-15));
  CHECK_THAT(erlang_blocking(2, 2.0), WithinAbs(0.4, 1e-15));
  CHECK_THAT(erlang_blocking(10, 10.0), WithinAbs(0.214582343107347, 1e-13));
  CHECK_THAT(erlang_blocking_integral(1, 1.0), WithinAbs(0.5, 1e-9));
  CHECK_THAT(erlang_blocking_integral(200, 200.0), WithinAbs(erlang_blocking(200, 200.0), 1e-9));
  CHECK_THROWS_AS(erlang_blocking(0, 1.0), Error);
}

TEST_CASE("Erlang-B blocking decreases along s = r", "[erlang]") {
  double prev = 1.0;
  for (int s = 1; s <= 400; ++s) {
    const double b = erlang_blocking(s, s);
    REQUIRE(b < prev);
    prev = b;
  }
}

TEST_CASE("loss class-1 throughput", "[erlang]") {
  CHECK_THAT(loss_class1_throughput(1.4, 1, 0.919), WithinAbs(0.6433, 1e-12));
  const double scaled = loss_class1_throughput(1.4 * 5000, 5000, kGExp) / (1.4 * 5000);
  CHECK_THAT(scaled, WithinAbs(kGExp, 0.02));
  CHECK(scaled < kGExp);
}

TEST_CASE("admission knapsack", "[knapsack]") {
  const double tau = solve_threshold(kExp, 1.4).tau;
  CHECK_THAT(throughput_bound_oracle(kExp, tau, 100'000, KnapsackMode::MaxThroughput), WithinRel(kGExp, 1e-3));
  CHECK_THAT(throughput_bound_oracle(kExp, tau, 100'000, KnapsackMode::MinWorkload), WithinRel(1.0 / 1.4, 1e-3));
  CHECK(throughput_bound_oracle(kExp, 0.0, 1'000, KnapsackMode::MaxThroughput) == 0.0);
  CHECK_THROWS_AS(throughput_bound_oracle(kExp, tau, 10, KnapsackMode::MaxThroughput), Error);
}

TEST_CASE("knapsack selection is the short-job indicator", "[knapsack]") {
  const auto pareto = Distribution::with_mean(Family::Pareto, 2.0, 1.0);
  for (const auto& s : {kExp, pareto}) {
    const double tau = solve_threshold(s, 1.4).tau;
    for (auto mode : {KnapsackMode::MaxThroughput, KnapsackMode::MinWorkload}) {
      const auto sol = solve_admission_knapsack(s, tau, 20'000, mode);
      for (std::size_t i = 0; i < sol.selection.size(); ++i) {
        const double lo = sol.cell_lower[i];
        const double hi = i + 1 < sol.cell_lower.size() ? sol.cell_lower[i + 1] : INFINITY;
        if (lo <= tau && tau <= hi) continue;
        REQUIRE_THAT(sol.selection[i], WithinAbs(hi <= tau ? 1.0 : 0.0, 1e-6));
      }
    }
  }
}
