#pragma once

// Independent reference computations for tests. Nothing here is used by the library.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <span>
#include <vector>

#include "glspace/measure.hpp"
#include "glspace/rng.hpp"

namespace oracle {

// Frozen reference values (50-digit mpmath evaluations, rounded to double).
inline constexpr double kIntegralExpInvP = 2.02005862443397423;  // int_1^2 exp(1/p) dp
inline constexpr double kPhiPowerAtExpMinus2 = 0.18393972058572116;  // sup_p e^{-2/p}/p = e^{-1}/2
inline constexpr double kExpMinus2 = 0.1353352832366127;
inline constexpr double kSqrt2p5 = 1.5811388300841898;  // ||(1,2)||_2, weights 1/2
inline constexpr double kH4 = 1.7074764851741444;       // ||(1,2)||_4, weights 1/2
inline constexpr double kLyapunovBound = 1.635310557851224;  // 1.5^{1/3} kH4^{2/3} (p0 = 1, p1 = 4, p = 2)

// Direct sum in long double, scaled by the max only.
inline double naive_lp(const glspace::SampledFunction& f, double p) {
  const auto w = f.space().weights();
  const auto v = f.values();
  if (std::isinf(p)) {
    long double m = 0;
    for (double x : v) m = std::max<long double>(m, std::fabs(x));
    return static_cast<double>(m);
  }
  long double m = 0;
  for (double x : v) m = std::max<long double>(m, std::fabs(x));
  if (m == 0) return 0.0;
  long double s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) s += w[i] * std::pow(std::fabs(v[i]) / m, static_cast<long double>(p));
  return static_cast<double>(m * std::pow(s, 1.0L / p));
}

// Brute-force sup of g over n log-spaced points on [lo, hi].
inline double dense_sup(const std::function<double(double)>& g, double lo, double hi, std::size_t n) {
  double best = -std::numeric_limits<double>::infinity();
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = std::clamp(std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1)), lo, hi);
    best = std::max(best, g(p));
  }
  return best;
}

// Brute-force sup over an explicit point set.
inline double grid_sup(const std::function<double(double)>& g, std::span<const double> pts) {
  double best = -std::numeric_limits<double>::infinity();
  for (double p : pts) best = std::max(best, g(p));
  return best;
}

// Composite 10-point Gauss-Legendre.
inline double gauss_legendre(const std::function<double(double)>& f, double lo, double hi, int panels = 64) {
  static constexpr double x[5] = {0.1488743389816312, 0.4333953941292472, 0.6794095682990244, 0.8650633666889845,
                                  0.9739065285171717};
  static constexpr double w[5] = {0.2955242247147529, 0.2692667193099963, 0.2190863625159820, 0.1494513491505806,
                                  0.0666713443086881};
  const double h = (hi - lo) / panels;
  double total = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double mid = lo + (k + 0.5) * h, half = 0.5 * h;
    for (int i = 0; i < 5; ++i) total += half * w[i] * (f(mid - half * x[i]) + f(mid + half * x[i]));
  }
  return total;
}

// Stationary point of delta^{1/p} / p^m: p* = m ln(1/delta).
inline double phi_power_closed(double m, double delta) {
  return std::exp(-1.0 / m) * std::pow(m * std::log(1.0 / delta), -1.0 / m);
}

// O(N^2) DFT magnitudes.
inline std::vector<double> naive_dft_magnitudes(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> s{};
    for (std::size_t j = 0; j < n; ++j)
      s += v[j] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k * j) / static_cast<double>(n));
    out[k] = std::abs(s);
  }
  return out;
}

// Random function with positive weights and a few zero / heavy values.
inline glspace::SampledFunction random_function(std::uint64_t seed, std::size_t n = 0, bool probability = false) {
  glspace::CounterRng rng(seed, 7);
  if (n == 0) n = 4 + static_cast<std::size_t>(rng.uniform() * 60);
  std::vector<double> nodes(n), weights(n), values(n);
  double mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    nodes[i] = static_cast<double>(i);
    weights[i] = rng.uniform(0.05, 1.0);
    mass += weights[i];
    const double u = rng.uniform();
    values[i] = u < 0.1 ? 0.0 : rng.normal() * std::exp(rng.uniform(-2.0, 2.0));
  }
  if (probability)
    for (double& w : weights) w /= mass;
  if (std::all_of(values.begin(), values.end(), [](double x) { return x == 0.0; })) values[0] = 1.0;
  auto space = std::make_shared<const glspace::MeasureSpace>(std::move(nodes), std::move(weights));
  return glspace::SampledFunction(space, std::move(values));
}

}  // namespace oracle
