#include "glspace/optimize.hpp"

#include <cmath>
#include <limits>

#include "glspace/error.hpp"

namespace glspace {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double finite_or_neg_inf(double v) { return std::isnan(v) ? kNegInf : v; }

}  // namespace

SupResult golden_section_max(const std::function<double(double)>& objective, double lo, double hi, double rel_tol,
                             int max_iter) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = finite_or_neg_inf(objective(c));
  double fd = finite_or_neg_inf(objective(d));
  SupResult best{fc, c, 0};
  if (fd > best.value) best = {fd, d, 0};
  for (int it = 0; it < max_iter; ++it) {
    if (b - a <= rel_tol * (std::abs(c) + std::abs(d)) * 0.5) break;
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = finite_or_neg_inf(objective(c));
      if (fc > best.value) best = {fc, c, 0};
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = finite_or_neg_inf(objective(d));
      if (fd > best.value) best = {fd, d, 0};
    }
  }
  return best;
}

SupResult maximize_on_grid(std::span<const double> points, const std::function<double(double)>& objective,
                           const SupOptions& opts) {
  SupResult best{kNegInf, 0.0, 0};
  bool any = false;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double v = finite_or_neg_inf(objective(points[i]));
    if (v == kNegInf) continue;
    if (!any || v > best.value) best = {v, points[i], i};
    any = true;
  }
  if (!any) throw DomainError("objective is -infinity on every grid point");
  if (!opts.refine || points.size() < 2) return best;

  const std::size_t i = best.grid_index;
  const double lo = points[i == 0 ? 0 : i - 1];
  const double hi = points[i + 1 < points.size() ? i + 1 : i];
  if (!(hi > lo)) return best;
  SupResult polished = golden_section_max(objective, lo, hi, opts.rel_tol, opts.max_iter);
  if (polished.value > best.value) {
    polished.grid_index = i;
    return polished;
  }
  return best;
}

namespace {

struct Panel {
  double a, b, fa, fm, fb, whole;
};

double simpson(double a, double b, double fa, double fm, double fb) { return (b - a) / 6.0 * (fa + 4.0 * fm + fb); }

double refine_panel(const std::function<double(double)>& f, const Panel& p, double tol, int depth, bool& ok) {
  const double m = 0.5 * (p.a + p.b);
  const double lm = 0.5 * (p.a + m), rm = 0.5 * (m + p.b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(p.a, m, p.fa, flm, p.fm);
  const double right = simpson(m, p.b, p.fm, frm, p.fb);
  const double delta = left + right - p.whole;
  if (depth <= 0) {
    ok = false;
    return left + right + delta / 15.0;
  }
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return refine_panel(f, {p.a, m, p.fa, flm, p.fm, left}, 0.5 * tol, depth - 1, ok) +
         refine_panel(f, {m, p.b, p.fm, frm, p.fb, right}, 0.5 * tol, depth - 1, ok);
}

}  // namespace

Integral adaptive_simpson(const std::function<double(double)>& f, double lo, double hi, double rel_tol,
                          int max_depth) {
  if (!(hi > lo)) return {0.0, true};
  // Start from four panels so that integrands vanishing at the ends and the
  // midpoint are not mistaken for zero.
  constexpr int kPanels = 4;
  const double h = (hi - lo) / kPanels;
  double xs[2 * kPanels + 1], fs[2 * kPanels + 1];
  for (int k = 0; k <= 2 * kPanels; ++k) {
    xs[k] = k == 2 * kPanels ? hi : lo + 0.5 * h * k;
    fs[k] = f(xs[k]);
  }
  double coarse = 0.0;
  for (int k = 0; k < kPanels; ++k) coarse += std::abs(simpson(xs[2 * k], xs[2 * k + 2], fs[2 * k], fs[2 * k + 1], fs[2 * k + 2]));
  const double tol = std::max(rel_tol * coarse, std::numeric_limits<double>::min());
  bool ok = true;
  double total = 0.0;
  for (int k = 0; k < kPanels; ++k) {
    const Panel p{xs[2 * k], xs[2 * k + 2], fs[2 * k], fs[2 * k + 1], fs[2 * k + 2],
                  simpson(xs[2 * k], xs[2 * k + 2], fs[2 * k], fs[2 * k + 1], fs[2 * k + 2])};
    total += refine_panel(f, p, tol / kPanels, max_depth, ok);
  }
  return {total, ok && std::isfinite(total)};
}

}  // namespace glspace
