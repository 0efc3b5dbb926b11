#include <algorithm>
#include <cmath>
#include <vector>

#include "catch_amalgamated.hpp"
#include "srptq/dists.hpp"
#include "srptq/error.hpp"
#include "srptq/quadrature.hpp"
#include "srptq/random.hpp"

using namespace srptq;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("cdf at reference points", "[dists]") {
  CHECK(Distribution::exponential(1.0).cdf(0.0) == 0.0);
  CHECK_THAT(Distribution::weibull(1.0, 1.0).cdf(1.0), WithinAbs(1.0 - std::exp(-1.0), 1e-15));
  CHECK_THAT(Distribution::pareto(2.0, 1.0).cdf(2.0), WithinAbs(0.75, 1e-15));
  CHECK(Distribution::pareto(2.0, 1.0).cdf(0.5) == 0.0);
  CHECK(Distribution::deterministic(1.0).cdf(0.999) == 0.0);
  CHECK(Distribution::deterministic(1.0).cdf(1.0) == 1.0);
}

TEST_CASE("hazard rates", "[dists]") {
  const auto e = Distribution::exponential(1.0);
  for (double x : {0.0, 0.3, 2.0, 17.0}) CHECK_THAT(e.hazard(x), WithinAbs(1.0, 1e-12));
  CHECK_THAT(Distribution::weibull(2.0, 1.0).hazard(1.0), WithinAbs(2.0, 1e-12));
  CHECK(Distribution::pareto(2.0, 1.0).hazard(0.5) == 0.0);
  CHECK_THAT(Distribution::pareto(2.0, 1.0).hazard(4.0), WithinAbs(0.5, 1e-12));
  CHECK_THROWS_AS(e.hazard(1e4), Error);
}

TEST_CASE("truncated first moment", "[dists]") {
  const auto e = Distribution::exponential(1.0);
  CHECK(e.truncated_first_moment(0.0) == 0.0);
  CHECK_THAT(e.truncated_first_moment(200.0), WithinAbs(1.0, 1e-12));
  // Independent quadrature of x e^{-x} on [0, 2.51].
  CHECK_THAT(e.truncated_first_moment(2.51), WithinAbs(0.714748480264, 1e-11));

  for (const auto& d : {Distribution::exponential(2.0), Distribution::weibull(0.4, 0.3),
                        Distribution::weibull(1.7, 2.0), Distribution::pareto(1.5, 1.0 / 3.0),
                        Distribution::pareto(3.0, 2.0)}) {
    double prev = 0.0;
    for (double tau : {0.1, 0.5, 1.0, 2.5, 7.0, 30.0}) {
      const double closed = d.truncated_first_moment(tau);
      CHECK(closed >= prev);
      prev = closed;
      const double quad = truncated_first_moment_quadrature(d, tau);
      CHECK_THAT(quad, WithinAbs(closed, 1e-8 * std::max(1.0, closed)));
    }
    CHECK(prev <= d.mean() * (1.0 + 1e-12));
  }
}

TEST_CASE("weibull with shape 1 is exponential", "[dists]") {
  const auto w = Distribution::weibull(1.0, 1.3);
  const auto e = Distribution::exponential(1.3);
  for (double x : {0.01, 0.5, 1.0, 3.0, 10.0}) {
    CHECK_THAT(w.cdf(x), WithinAbs(e.cdf(x), 1e-12));
    CHECK_THAT(w.pdf(x), WithinAbs(e.pdf(x), 1e-12));
    CHECK_THAT(w.truncated_first_moment(x), WithinAbs(e.truncated_first_moment(x), 1e-12));
  }
  CHECK_THAT(w.mean(), WithinAbs(e.mean(), 1e-12));
}

TEST_CASE("with_mean calibrates the scale", "[dists]") {
  for (double a : {0.2, 0.4, 1.0, 1.6, 2.0})
    CHECK_THAT(Distribution::with_mean(Family::Weibull, a, 1.0).mean(), WithinRel(1.0, 1e-12));
  for (double a : {1.1, 2.0, 3.0})
    CHECK_THAT(Distribution::with_mean(Family::Pareto, a, 2.5).mean(), WithinRel(2.5, 1e-12));
  CHECK(Distribution::with_mean(Family::Exponential, 1.0, 3.0).scale() == 3.0);
}

TEST_CASE("invalid parameters throw", "[dists]") {
  CHECK_THROWS_AS(Distribution::exponential(0.0), Error);
  CHECK_THROWS_AS(Distribution::weibull(-1.0, 1.0), Error);
  CHECK_THROWS_AS(Distribution::pareto(1.0, 1.0), Error);
  CHECK_THROWS_AS(Distribution::pareto(0.8, 1.0), Error);
  CHECK_THROWS_AS(Distribution::exponential(1.0).quantile(1.5), Error);
  CHECK(std::isinf(Distribution::exponential(1.0).quantile(1.0)));
  CHECK_THROWS_AS(parse_family("gamma"), Error);
}

TEST_CASE("quantile inverts the cdf", "[dists]") {
  CHECK_THAT(Distribution::exponential(1.0).quantile(0.5), WithinAbs(std::log(2.0), 1e-15));
  CHECK(Distribution::deterministic(1.0).quantile(0.01) == 1.0);
  CHECK(Distribution::deterministic(1.0).quantile(0.99) == 1.0);
  for (const auto& d : {Distribution::weibull(0.4, 0.3), Distribution::pareto(2.0, 0.5)})
    for (double p : {1e-6, 0.1, 0.5, 0.9, 0.999999}) CHECK_THAT(d.cdf(d.quantile(p)), WithinAbs(p, 1e-12));
}

namespace {

double ks_statistic(std::vector<double> xs, const Distribution& d) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double dmax = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = d.cdf(xs[i]);
    dmax = std::max({dmax, (i + 1) / n - f, f - i / n});
  }
  return dmax;
}

}  // namespace

TEST_CASE("samples follow the distribution", "[dists]") {
  RandomStream rng(derive_seed(42, StreamId::Service));
  for (const auto& d : {Distribution::exponential(1.0), Distribution::with_mean(Family::Weibull, 0.4, 1.0),
                        Distribution::with_mean(Family::Pareto, 2.0, 1.0)}) {
    std::vector<double> xs(100'000);
    for (auto& x : xs) x = d.sample(rng);
    INFO(d.describe());
    CHECK(ks_statistic(xs, d) <= 0.01);
  }
}

TEST_CASE("weibull 0.4 sample mean", "[dists]") {
  const auto d = Distribution::with_mean(Family::Weibull, 0.4, 1.0);
  RandomStream rng(derive_seed(7, StreamId::Patience));
  double sum = 0.0;
  for (int i = 0; i < 1'000'000; ++i) sum += d.sample(rng);
  CHECK_THAT(sum / 1e6, WithinAbs(1.0, 0.01));
}

TEST_CASE("uniform draws stay inside the open unit interval", "[random]") {
  RandomStream a(derive_seed(1, StreamId::Interarrival));
  RandomStream b(derive_seed(1, StreamId::Interarrival));
  RandomStream c(derive_seed(1, StreamId::Service));
  bool differs = false;
  for (int i = 0; i < 10'000; ++i) {
    const double u = a.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    REQUIRE(u == b.uniform());
    differs = differs || u != c.uniform();
  }
  CHECK(differs);
}

TEST_CASE("adaptive simpson", "[quadrature]") {
  const auto r = adaptive_simpson([](double x) { return std::sin(x); }, 0.0, M_PI);
  CHECK(r.converged);
  CHECK_THAT(r.value, WithinAbs(2.0, 1e-10));
  const auto tail = integrate_to_infinity([](double x) { return std::exp(-x); }, 0.0);
  CHECK_THAT(tail.value, WithinAbs(1.0, 1e-9));
}
