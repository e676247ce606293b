#include "glspace/measure.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "glspace/error.hpp"

namespace glspace {

MeasureSpace::MeasureSpace(std::vector<double> nodes, std::vector<double> weights)
    : nodes_(std::move(nodes)), weights_(std::move(weights)) {
  if (nodes_.empty()) throw PreconditionError("measure space needs at least one node");
  if (nodes_.size() != weights_.size())
    throw PreconditionError("measure space: " + std::to_string(nodes_.size()) + " nodes but " +
                            std::to_string(weights_.size()) + " weights");
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!std::isfinite(nodes_[i])) throw PreconditionError("measure space: non-finite node");
    if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i]))
      throw PreconditionError("measure space: weight " + std::to_string(i) + " must be positive and finite");
    total_mass_ += weights_[i];
  }
  if (!std::isfinite(total_mass_)) throw PreconditionError("measure space: total mass overflows");
}

MeasureSpace MeasureSpace::uniform(double lo, double hi, std::size_t n) {
  if (n == 0 || !(hi > lo)) throw PreconditionError("uniform space needs n >= 1 and hi > lo");
  const double h = (hi - lo) / static_cast<double>(n);
  std::vector<double> nodes(n);
  for (std::size_t i = 0; i < n; ++i) nodes[i] = lo + h * static_cast<double>(i);
  return MeasureSpace(std::move(nodes), std::vector<double>(n, h));
}

MeasureSpace MeasureSpace::uniform_probability(double lo, double hi, std::size_t n) {
  MeasureSpace s = uniform(lo, hi, n);
  return MeasureSpace(std::vector<double>(s.nodes().begin(), s.nodes().end()),
                      std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

SampledFunction::SampledFunction(SpacePtr space, std::vector<double> values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (!space_) throw PreconditionError("sampled function without a measure space");
  if (values_.size() != space_->size())
    throw PreconditionError("sampled function has " + std::to_string(values_.size()) + " values for " +
                            std::to_string(space_->size()) + " nodes");
  for (double v : values_)
    if (!std::isfinite(v)) throw PreconditionError("sampled function values must be finite");
}

SampledFunction SampledFunction::indicator(SpacePtr space, const std::vector<bool>& mask) {
  std::vector<double> v(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) v[i] = mask[i] ? 1.0 : 0.0;
  return SampledFunction(std::move(space), std::move(v));
}

SampledFunction SampledFunction::scaled(double c) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= c;
  return SampledFunction(space_, std::move(v));
}

PGrid::PGrid(std::vector<double> points, bool includes_infinity)
    : points_(std::move(points)), includes_infinity_(includes_infinity) {
  if (points_.size() < 2) throw PreconditionError("exponent grid needs at least 2 points");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!(points_[i] >= 1.0) || !std::isfinite(points_[i]))
      throw PreconditionError("exponent grid points must be finite and >= 1");
    if (i > 0 && !(points_[i] > points_[i - 1]))
      throw PreconditionError("exponent grid must be strictly increasing");
  }
}

PGrid PGrid::log_spaced(double lo, double hi, std::size_t n, bool includes_infinity) {
  if (n < 2 || !(hi > lo) || !(lo >= 1.0)) throw PreconditionError("log_spaced needs n >= 2 and 1 <= lo < hi");
  std::vector<double> p(n);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (std::size_t i = 0; i < n; ++i)
    p[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) / static_cast<double>(n - 1));
  p.front() = lo;
  p.back() = hi;
  return PGrid(std::move(p), includes_infinity);
}

std::optional<std::size_t> PGrid::find(double p, double rel_tol) const {
  auto it = std::lower_bound(points_.begin(), points_.end(), p * (1.0 - rel_tol));
  if (it != points_.end() && std::abs(*it - p) <= rel_tol * p)
    return static_cast<std::size_t>(it - points_.begin());
  return std::nullopt;
}

NormFamily::NormFamily(PGrid grid, std::vector<double> values, std::optional<double> essential_sup,
                       LogCurve exact_log)
    : grid_(std::move(grid)),
      values_(std::move(values)),
      essential_sup_(essential_sup),
      exact_log_(std::move(exact_log)) {
  if (values_.size() != grid_.size()) throw PreconditionError("norm family: one value per grid point required");
  for (double v : values_)
    if (!(v >= 0.0)) throw PreconditionError("norm family values must be nonnegative");
  if (essential_sup_ && !(*essential_sup_ >= 0.0))
    throw PreconditionError("norm family essential sup must be nonnegative");
}

namespace {

double safe_log(double v) { return v > 0.0 ? std::log(v) : -kInfinity; }

// Linear interpolation of ln h in the variable x = 1/p.
double log_linear(double x, double x0, double y0, double x1, double y1) {
  if (y0 == -kInfinity || y1 == -kInfinity) return -kInfinity;
  const double lam = (x - x0) / (x1 - x0);
  return (1.0 - lam) * y0 + lam * y1;
}

}  // namespace

double NormFamily::log_at(double p) const {
  if (exact_log_) return exact_log_(p);
  const auto pts = grid_.points();
  if (p == kInfinity) {
    if (essential_sup_) return safe_log(*essential_sup_);
    throw DomainError("norm family: no value at p = infinity");
  }
  if (p < pts.front() * (1.0 - 1e-14)) throw DomainError("norm family: p below the sampled range");
  if (p >= pts.back()) {
    if (p <= pts.back() * (1.0 + 1e-14)) return safe_log(values_.back());
    if (!essential_sup_) throw DomainError("norm family: p above the sampled range");
    return log_linear(1.0 / p, 1.0 / pts.back(), safe_log(values_.back()), 0.0, safe_log(*essential_sup_));
  }
  auto it = std::upper_bound(pts.begin(), pts.end(), p);
  const std::size_t hi = static_cast<std::size_t>(it - pts.begin());
  const std::size_t lo = hi == 0 ? 0 : hi - 1;
  if (hi == 0) return safe_log(values_.front());
  if (p == pts[lo]) return safe_log(values_[lo]);
  return log_linear(1.0 / p, 1.0 / pts[lo], safe_log(values_[lo]), 1.0 / pts[hi], safe_log(values_[hi]));
}

double NormFamily::at(double p) const { return std::exp(log_at(p)); }

namespace {

void check_exponent(double q) {
  if (std::isnan(q) || q < 1.0) throw DomainError("exponent must be >= 1 (got " + std::to_string(q) + ")");
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// sum_i w_i (|f_i|/m)^q, with m = max |f_i| > 0; lies in [w_min, total mass].
double scaled_power_sum(const SampledFunction& f, double q, double m) {
  const auto v = f.values();
  const auto w = f.space().weights();
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0.0) continue;
    s += w[i] * std::pow(std::abs(v[i]) / m, q);
  }
  return s;
}

}  // namespace

double lp_norm(const SampledFunction& f, double q) {
  check_exponent(q);
  const double m = max_abs(f.values());
  if (q == kInfinity || m == 0.0) return m;
  return m * std::pow(scaled_power_sum(f, q, m), 1.0 / q);
}

double log_lp_norm(const SampledFunction& f, double q) {
  check_exponent(q);
  const double m = max_abs(f.values());
  if (m == 0.0) return -kInfinity;
  if (q == kInfinity) return std::log(m);
  return std::log(m) + std::log(scaled_power_sum(f, q, m)) / q;
}

NormFamily norm_family(const SampledFunction& f, const PGrid& grid) {
  std::vector<double> h(grid.size());
  const auto pts = grid.points();
  for (std::size_t i = 0; i < pts.size(); ++i) h[i] = lp_norm(f, pts[i]);
  std::optional<double> ess;
  if (grid.includes_infinity()) ess = lp_norm(f, kInfinity);
  return NormFamily(grid, std::move(h), ess, [f](double p) { return log_lp_norm(f, p); });
}

NormFamily power_curve(double delta, const PGrid& grid) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("power curve needs delta > 0");
  const double ld = std::log(delta);
  std::vector<double> g(grid.size());
  const auto pts = grid.points();
  for (std::size_t i = 0; i < pts.size(); ++i) g[i] = std::exp(ld / pts[i]);
  std::optional<double> ess;
  if (grid.includes_infinity()) ess = 1.0;
  return NormFamily(grid, std::move(g), ess, [ld](double p) { return p == kInfinity ? 0.0 : ld / p; });
}

double tail_function(const SampledFunction& f, double t) {
  if (!(t >= 0.0)) throw DomainError("tail function needs t >= 0");
  const auto v = f.values();
  const auto w = f.space().weights();
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) >= t) s += w[i];
  return s;
}

}  // namespace glspace
