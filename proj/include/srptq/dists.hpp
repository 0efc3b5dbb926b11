#pragma once

#include <string>
#include <string_view>

#include "srptq/random.hpp"

namespace srptq {

enum class Family { Exponential, Weibull, Pareto, Deterministic };

std::string_view to_string(Family family);
Family parse_family(std::string_view name);

/// A parametric positive distribution with the analytic surface the limit
/// formulas need.
///
/// Parameterization:
///   Exponential   scale = mean, shape unused
///   Weibull       F(x) = 1 - exp(-(x/scale)^shape)
///   Pareto        F(x) = 1 - (scale/x)^shape for x >= scale, shape > 1
///   Deterministic point mass at scale (engine hand traces only)
///
/// Immutable after construction; invalid parameters throw at construction.
class Distribution {
 public:
  static Distribution exponential(double mean);
  static Distribution weibull(double shape, double scale);
  static Distribution pareto(double shape, double scale);
  static Distribution deterministic(double value);

  /// Solves for the scale that gives `mean`, in closed form.
  static Distribution with_mean(Family family, double shape, double mean);

  Family family() const noexcept { return family_; }
  double shape() const noexcept { return shape_; }
  double scale() const noexcept { return scale_; }
  bool is_continuous() const noexcept { return family_ != Family::Deterministic; }

  double mean() const;
  double cdf(double x) const;
  double survival(double x) const;
  double pdf(double x) const;

  /// f(x) / (1 - F(x)). Throws DegenerateTail once the survival underflows 1e-300.
  double hazard(double x) const;

  /// E[X 1(X <= tau)], closed form.
  double truncated_first_moment(double tau) const;

  /// Smallest x with F(x) >= p, for p in (0,1).
  double quantile(double p) const;

  double sample(RandomStream& stream) const { return quantile(stream.uniform()); }

  std::string describe() const;

  friend bool operator==(const Distribution&, const Distribution&) = default;

 private:
  Distribution(Family family, double shape, double scale);

  Family family_;
  double shape_;
  double scale_;
};

/// Same quantity as Distribution::truncated_first_moment, by adaptive
/// quadrature of x g(x). Pareto is integrated after the substitution u = m/x.
double truncated_first_moment_quadrature(const Distribution& d, double tau,
                                         double abs_tol = 1e-10);

}  // namespace srptq
