#include "srptq/quadrature.hpp"

#include <cmath>
#include <vector>

#include "srptq/error.hpp"

namespace srptq {

namespace {

struct Panel {
  double a, m, b;
  double fa, fm, fb;
  double whole;
  double tol;
};

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  const QuadratureOptions& opts) {
  QuadratureResult out;
  if (!(b > a)) return out;

  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  std::vector<Panel> stack;
  stack.push_back({a, m, b, fa, fm, fb, simpson(a, b, fa, fm, fb), opts.abs_tol});

  // Depth-first keeps the summation order fixed for a given integrand.
  while (!stack.empty()) {
    Panel p = stack.back();
    stack.pop_back();

    const double lm = 0.5 * (p.a + p.m);
    const double rm = 0.5 * (p.m + p.b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(p.a, p.m, p.fa, flm, p.fm);
    const double right = simpson(p.m, p.b, p.fm, frm, p.fb);
    const double delta = left + right - p.whole;

    const bool too_narrow = !(lm > p.a && rm < p.b);
    if (std::fabs(delta) <= 15.0 * p.tol || too_narrow ||
        out.subdivisions >= opts.max_subdivisions) {
      if (out.subdivisions >= opts.max_subdivisions && std::fabs(delta) > 15.0 * p.tol)
        out.converged = false;
      out.value += left + right + delta / 15.0;
      out.error_estimate += std::fabs(delta) / 15.0;
      continue;
    }
    ++out.subdivisions;
    stack.push_back({p.m, rm, p.b, p.fm, frm, p.fb, right, 0.5 * p.tol});
    stack.push_back({p.a, lm, p.m, p.fa, flm, p.fm, left, 0.5 * p.tol});
  }
  return out;
}

QuadratureResult integrate_to_infinity(const std::function<double(double)>& f, double a,
                                       double negligible, const QuadratureOptions& opts) {
  double upper = a + 1.0;
  for (int i = 0; f(upper) > negligible; ++i) {
    if (i > 1100) throw Error(ErrorCode::NoBracket, "integrand does not decay");
    upper = a + 2.0 * (upper - a);
  }
  // Split into unit-ish panels so a narrow peak near `a` is not skipped by the
  // first coarse Simpson estimate.
  QuadratureResult total;
  double lo = a;
  double width = 1.0;
  while (lo < upper) {
    const double hi = std::fmin(upper, lo + width);
    QuadratureOptions sub = opts;
    sub.abs_tol = opts.abs_tol * (hi - lo) / (upper - a);
    const auto piece = adaptive_simpson(f, lo, hi, sub);
    total.value += piece.value;
    total.error_estimate += piece.error_estimate;
    total.subdivisions += piece.subdivisions;
    total.converged = total.converged && piece.converged;
    lo = hi;
    width *= 2.0;
  }
  return total;
}

}  // namespace srptq
