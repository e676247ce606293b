#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace glspace {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Finite weighted point-mass measure: node i carries mass weights()[i] > 0.
class MeasureSpace {
 public:
  MeasureSpace(std::vector<double> nodes, std::vector<double> weights);

  /// n equally spaced nodes lo + i*h on [lo, hi), each of mass h = (hi - lo)/n.
  static MeasureSpace uniform(double lo, double hi, std::size_t n);
  /// As uniform(), but every node has mass 1/n (total mass 1).
  static MeasureSpace uniform_probability(double lo, double hi, std::size_t n);

  std::size_t size() const noexcept { return nodes_.size(); }
  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }
  double total_mass() const noexcept { return total_mass_; }

  bool operator==(const MeasureSpace& other) const {
    return nodes_ == other.nodes_ && weights_ == other.weights_;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
  double total_mass_ = 0.0;
};

using SpacePtr = std::shared_ptr<const MeasureSpace>;

/// Real function given by its value at every node of a MeasureSpace.
class SampledFunction {
 public:
  SampledFunction(SpacePtr space, std::vector<double> values);

  /// 1 on the nodes where mask is true, 0 elsewhere.
  static SampledFunction indicator(SpacePtr space, const std::vector<bool>& mask);

  const MeasureSpace& space() const noexcept { return *space_; }
  const SpacePtr& space_ptr() const noexcept { return space_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

  SampledFunction scaled(double c) const;

 private:
  SpacePtr space_;
  std::vector<double> values_;
};

/// Strictly increasing exponents p >= 1, optionally closed by the endpoint p = infinity.
class PGrid {
 public:
  PGrid(std::vector<double> points, bool includes_infinity = false);

  /// n points geometrically spaced on [lo, hi].
  static PGrid log_spaced(double lo, double hi, std::size_t n, bool includes_infinity = false);

  std::span<const double> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  double front() const { return points_.front(); }
  double back() const { return points_.back(); }
  bool includes_infinity() const noexcept { return includes_infinity_; }

  /// Index of the point equal to p up to relative tolerance, if any.
  std::optional<std::size_t> find(double p, double rel_tol = 1e-12) const;

  bool operator==(const PGrid& other) const = default;

 private:
  std::vector<double> points_;
  bool includes_infinity_ = false;
};

/// Moment curve h(p) = ||f||_p sampled on a PGrid.
///
/// A family may carry an exact evaluator for ln h at arbitrary p (kept when the
/// curve comes from a known function); otherwise off-grid values are
/// interpolated linearly in (1/p, ln h), which reproduces power curves
/// delta^{1/p} exactly and is monotone in the sampled values.
class NormFamily {
 public:
  using LogCurve = std::function<double(double)>;

  NormFamily(PGrid grid, std::vector<double> values, std::optional<double> essential_sup = std::nullopt,
             LogCurve exact_log = {});

  const PGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  const std::optional<double>& essential_sup() const noexcept { return essential_sup_; }
  bool has_exact() const noexcept { return static_cast<bool>(exact_log_); }

  /// ln h(p). Interpolated families throw DomainError below the first grid
  /// point, and above the last one unless the essential sup is known.
  double log_at(double p) const;
  double at(double p) const;

  /// The same samples without the exact evaluator.
  NormFamily sampled_only() const { return NormFamily(grid_, values_, essential_sup_); }

 private:
  PGrid grid_;
  std::vector<double> values_;
  std::optional<double> essential_sup_;
  LogCurve exact_log_;
};

/// (sum_i w_i |f_i|^q)^{1/q}; q = kInfinity gives max_i |f_i|.
double lp_norm(const SampledFunction& f, double q);

/// ln lp_norm(f, q), finite for every nonzero f even when the norm itself would overflow.
double log_lp_norm(const SampledFunction& f, double q);

/// h(p) = lp_norm(f, p) on the grid, with an exact evaluator attached.
NormFamily norm_family(const SampledFunction& f, const PGrid& grid);

/// g(p) = delta^{1/p} on the grid (fundamental-function probe), with exact evaluator.
NormFamily power_curve(double delta, const PGrid& grid);

/// Measure of the level set {|f| >= t}.
double tail_function(const SampledFunction& f, double t);

}  // namespace glspace
