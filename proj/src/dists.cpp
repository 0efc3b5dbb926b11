#include "srptq/dists.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "srptq/error.hpp"
#include "srptq/quadrature.hpp"

namespace srptq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be positive and finite");
}

}  // namespace

std::string_view to_string(Family family) {
  switch (family) {
    case Family::Exponential: return "exponential";
    case Family::Weibull: return "weibull";
    case Family::Pareto: return "pareto";
    case Family::Deterministic: return "deterministic";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  if (name == "exponential" || name == "exp") return Family::Exponential;
  if (name == "weibull") return Family::Weibull;
  if (name == "pareto") return Family::Pareto;
  if (name == "deterministic") return Family::Deterministic;
  throw Error(ErrorCode::InvalidArgument, "unknown distribution family '" + std::string(name) + "'");
}

Distribution::Distribution(Family family, double shape, double scale)
    : family_(family), shape_(shape), scale_(scale) {
  require_positive(scale, "scale");
  switch (family) {
    case Family::Weibull:
      require_positive(shape, "shape");
      break;
    case Family::Pareto:
      require_positive(shape, "shape");
      if (!(shape > 1.0))
        throw Error(ErrorCode::InvalidArgument, "Pareto shape must exceed 1 for a finite mean");
      break;
    case Family::Exponential:
    case Family::Deterministic:
      shape_ = 1.0;
      break;
  }
}

Distribution Distribution::exponential(double mean) { return {Family::Exponential, 1.0, mean}; }
Distribution Distribution::weibull(double shape, double scale) { return {Family::Weibull, shape, scale}; }
Distribution Distribution::pareto(double shape, double scale) { return {Family::Pareto, shape, scale}; }
Distribution Distribution::deterministic(double value) { return {Family::Deterministic, 1.0, value}; }

Distribution Distribution::with_mean(Family family, double shape, double mean) {
  require_positive(mean, "mean");
  switch (family) {
    case Family::Exponential: return exponential(mean);
    case Family::Deterministic: return deterministic(mean);
    case Family::Weibull:
      require_positive(shape, "shape");
      return weibull(shape, mean / boost::math::tgamma(1.0 + 1.0 / shape));
    case Family::Pareto:
      if (!(shape > 1.0))
        throw Error(ErrorCode::InvalidArgument, "Pareto shape must exceed 1 for a finite mean");
      return pareto(shape, mean * (shape - 1.0) / shape);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown family");
}

double Distribution::mean() const {
  switch (family_) {
    case Family::Exponential:
    case Family::Deterministic: return scale_;
    case Family::Weibull: return scale_ * boost::math::tgamma(1.0 + 1.0 / shape_);
    case Family::Pareto: return shape_ * scale_ / (shape_ - 1.0);
  }
  return 0.0;
}

double Distribution::survival(double x) const {
  if (x <= 0.0) return 1.0;
  switch (family_) {
    case Family::Exponential: return std::exp(-x / scale_);
    case Family::Weibull: return std::exp(-std::pow(x / scale_, shape_));
    case Family::Pareto: return x < scale_ ? 1.0 : std::pow(scale_ / x, shape_);
    case Family::Deterministic: return x < scale_ ? 1.0 : 0.0;
  }
  return 0.0;
}

double Distribution::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  switch (family_) {
    case Family::Exponential: return -std::expm1(-x / scale_);
    case Family::Weibull: return -std::expm1(-std::pow(x / scale_, shape_));
    default: return 1.0 - survival(x);
  }
}

double Distribution::pdf(double x) const {
  if (x < 0.0) return 0.0;
  switch (family_) {
    case Family::Exponential: return std::exp(-x / scale_) / scale_;
    case Family::Weibull: {
      if (x == 0.0) return shape_ < 1.0 ? kInf : (shape_ == 1.0 ? 1.0 / scale_ : 0.0);
      const double z = x / scale_;
      return shape_ / scale_ * std::pow(z, shape_ - 1.0) * std::exp(-std::pow(z, shape_));
    }
    case Family::Pareto:
      return x < scale_ ? 0.0 : shape_ / x * std::pow(scale_ / x, shape_);
    case Family::Deterministic: return 0.0;
  }
  return 0.0;
}

double Distribution::hazard(double x) const {
  if (survival(x) < 1e-300)
    throw Error(ErrorCode::DegenerateTail, "survival function underflows at x=" + std::to_string(x));
  switch (family_) {
    case Family::Exponential: return 1.0 / scale_;
    case Family::Weibull:
      if (x == 0.0) return pdf(0.0);
      return shape_ / scale_ * std::pow(x / scale_, shape_ - 1.0);
    case Family::Pareto: return x < scale_ ? 0.0 : shape_ / x;
    case Family::Deterministic: return 0.0;
  }
  return 0.0;
}

double Distribution::truncated_first_moment(double tau) const {
  if (!(tau > 0.0)) return 0.0;
  if (std::isinf(tau)) return mean();
  switch (family_) {
    case Family::Exponential: {
      const double z = tau / scale_;
      return scale_ * (-std::expm1(-z) - z * std::exp(-z));
    }
    case Family::Weibull: {
      const double z = std::pow(tau / scale_, shape_);
      return scale_ * boost::math::tgamma_lower(1.0 + 1.0 / shape_, z);
    }
    case Family::Pareto:
      if (tau < scale_) return 0.0;
      return shape_ * scale_ / (shape_ - 1.0) * -std::expm1((shape_ - 1.0) * std::log(scale_ / tau));
    case Family::Deterministic: return tau >= scale_ ? scale_ : 0.0;
  }
  return 0.0;
}

double Distribution::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return family_ == Family::Pareto ? scale_ : 0.0;
    if (p == 1.0) return family_ == Family::Deterministic ? scale_ : kInf;
    throw Error(ErrorCode::InvalidArgument, "quantile level outside [0,1]");
  }
  switch (family_) {
    case Family::Exponential: return -scale_ * std::log1p(-p);
    case Family::Weibull: return scale_ * std::pow(-std::log1p(-p), 1.0 / shape_);
    case Family::Pareto: return scale_ * std::exp(-std::log1p(-p) / shape_);
    case Family::Deterministic: return scale_;
  }
  return 0.0;
}

std::string Distribution::describe() const {
  std::ostringstream os;
  os.precision(12);
  os << to_string(family_) << "(shape=" << shape_ << ", scale=" << scale_ << ", mean=" << mean() << ")";
  return os.str();
}

double truncated_first_moment_quadrature(const Distribution& d, double tau, double abs_tol) {
  if (!(tau > 0.0)) return 0.0;
  QuadratureOptions opts;
  opts.abs_tol = abs_tol;
  const double m = d.scale();
  const double a = d.shape();

  switch (d.family()) {
    case Family::Deterministic:
      return tau >= m ? m : 0.0;
    case Family::Pareto: {
      if (tau <= m) return 0.0;
      // x = m/u maps [m, tau] onto [m/tau, 1]; x g(x) dx becomes a m u^(a-2) du.
      auto integrand = [m, a](double u) { return u > 0.0 ? a * m * std::pow(u, a - 2.0) : 0.0; };
      const double lo = std::isinf(tau) ? 0.0 : m / tau;
      return adaptive_simpson(integrand, lo, 1.0, opts).value;
    }
    case Family::Exponential:
    case Family::Weibull: {
      // x g(x) written without the x^(a-1) factor so the origin is finite.
      auto integrand = [m, a](double x) {
        const double z = std::pow(x / m, a);
        return a * z * std::exp(-z);
      };
      if (std::isinf(tau)) return integrate_to_infinity(integrand, 0.0, 1e-22, opts).value;
      return adaptive_simpson(integrand, 0.0, tau, opts).value;
    }
  }
  return 0.0;
}

}  // namespace srptq
