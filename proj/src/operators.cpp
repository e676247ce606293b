#include "glspace/operators.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <set>
#include <string>

#include "glspace/error.hpp"
#include "glspace/rng.hpp"

namespace glspace {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)); }

// Uniform nodes lo + i*h with equal weights; returns false otherwise.
bool is_uniform(const MeasureSpace& s, double lo, double hi, double weight) {
  const std::size_t n = s.size();
  const double h = (hi - lo) / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(s.nodes()[i] - (lo + h * static_cast<double>(i))) > 1e-9 * (hi - lo)) return false;
    if (!close(s.weights()[i], weight, 1e-9)) return false;
  }
  return true;
}

SampledFunction dilate(const SampledFunction& f, double t) {
  const MeasureSpace& x = f.space();
  std::vector<double> nodes(x.nodes().begin(), x.nodes().end());
  std::vector<double> weights(x.weights().begin(), x.weights().end());
  for (double& v : nodes) v *= t;
  for (double& w : weights) w *= t;
  auto y = std::make_shared<const MeasureSpace>(std::move(nodes), std::move(weights));
  return SampledFunction(std::move(y), std::vector<double>(f.values().begin(), f.values().end()));
}

// Row of the circulant heat kernel: c_j proportional to the wrapped Gaussian at distance j*h.
std::vector<double> heat_kernel_row(double length, std::size_t n, double t) {
  const double h = length / static_cast<double>(n);
  const double var4 = 4.0 * t;  // 2 * variance
  const int images = static_cast<int>(std::ceil(std::sqrt(var4 * 40.0) / length)) + 1;
  std::vector<double> c(n);
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double d = h * static_cast<double>(j);
    double g = 0.0;
    for (int k = -images; k <= images; ++k) {
      const double dk = d + k * length;
      g += std::exp(-dk * dk / var4);
    }
    c[j] = g;
    sum += g;
  }
  for (double& v : c) v /= sum;
  return c;
}

SampledFunction heat(const HeatConvolution& k, const SampledFunction& f, double t) {
  const MeasureSpace& x = f.space();
  if (x.size() != k.resolution || !is_uniform(x, 0.0, k.length, k.length / static_cast<double>(k.resolution)))
    throw PreconditionError("heat convolution needs a uniform periodic grid of " + std::to_string(k.resolution) +
                            " nodes over [0, " + std::to_string(k.length) + ")");
  const std::size_t n = k.resolution;
  const std::vector<double> c = heat_kernel_row(k.length, n, t);
  const auto v = f.values();
  std::vector<double> u(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += c[(i + n - j) % n] * v[j];
    u[i] = s;
  }
  return SampledFunction(f.space_ptr(), std::move(u));
}

SampledFunction nikolskii(const NikolskiiIdentity& k, const SampledFunction& f, double t) {
  const int n = nikolskii_degree(t);
  if (n > k.max_degree)
    throw PreconditionError("t = " + std::to_string(t) + " asks for degree " + std::to_string(n) + " above the maximum " +
                            std::to_string(k.max_degree));
  const MeasureSpace& x = f.space();
  const std::size_t need = 4 * static_cast<std::size_t>(n) + 1;
  if (x.size() < need)
    throw PreconditionError("grid of " + std::to_string(x.size()) + " points is too coarse for degree " +
                            std::to_string(n) + " (need " + std::to_string(need) + ")");
  if (!is_uniform(x, 0.0, kTwoPi, 1.0 / static_cast<double>(x.size())))
    throw PreconditionError("Nikolskii identity needs a uniform grid over [0, 2 pi) with normalized measure");
  if (trigonometric_degree(f.values()) > n)
    throw PreconditionError("function is not a trigonometric polynomial of degree <= " + std::to_string(n));
  return f;
}

SampledFunction kernel_integral(const KernelIntegral& k, const SampledFunction& f, double t) {
  if (!(f.space() == *k.x_space)) throw PreconditionError("kernel integral: function is not on the kernel's X-space");
  const auto xs = k.x_space->nodes();
  const auto wx = k.x_space->weights();
  const auto ys = k.y_space->nodes();
  const auto v = f.values();
  std::vector<double> u(ys.size());
  for (std::size_t iy = 0; iy < ys.size(); ++iy) {
    double s = 0.0;
    for (std::size_t ix = 0; ix < xs.size(); ++ix) {
      const double kv = k.kernel(t, ys[iy], xs[ix], v[ix]);
      if (!std::isfinite(kv)) throw DomainError("kernel value is not finite");
      s += wx[ix] * kv;
    }
    u[iy] = s;
  }
  return SampledFunction(k.y_space, std::move(u));
}

}  // namespace

OperatorSpec::OperatorSpec(Kind kind, std::vector<double> t_set) : kind_(std::move(kind)), t_set_(std::move(t_set)) {
  if (t_set_.empty()) throw PreconditionError("operator needs a nonempty t set");
  for (double t : t_set_)
    if (!(t > 0.0) || !std::isfinite(t)) throw PreconditionError("t set entries must be positive and finite");
  std::visit(Overloaded{[](const Dilation&) {},
                        [](const HeatConvolution& k) {
                          if (!(k.length > 0.0) || k.resolution < 1)
                            throw PreconditionError("heat convolution needs length > 0 and resolution >= 1");
                        },
                        [](const NikolskiiIdentity& k) {
                          if (k.max_degree < 0) throw PreconditionError("Nikolskii degree must be >= 0");
                        },
                        [](const KernelIntegral& k) {
                          if (!k.kernel || !k.x_space || !k.y_space)
                            throw PreconditionError("kernel integral needs a kernel and both spaces");
                        }},
             kind_);
}

std::string OperatorSpec::name() const {
  return std::visit(Overloaded{[](const Dilation&) { return std::string("dilation"); },
                               [](const HeatConvolution&) { return std::string("heat"); },
                               [](const NikolskiiIdentity&) { return std::string("nikolskii"); },
                               [](const KernelIntegral&) { return std::string("kernel"); }},
                    kind_);
}

int nikolskii_degree(double t) {
  if (!(t > 0.0) || t > 1.0) throw PreconditionError("Nikolskii parameter must satisfy 0 < t <= 1");
  const double x = 1.0 / t - 1.0;
  const double n = std::round(x);
  if (std::abs(x - n) > 1e-9 * std::max(1.0, n))
    throw PreconditionError("Nikolskii parameter t = " + std::to_string(t) + " is not of the form 1/(n+1)");
  return static_cast<int>(n);
}

SampledFunction apply(const OperatorSpec& op, const SampledFunction& f, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("operator parameter t must be positive and finite");
  return std::visit(Overloaded{[&](const Dilation&) { return dilate(f, t); },
                               [&](const HeatConvolution& k) { return heat(k, f, t); },
                               [&](const NikolskiiIdentity& k) { return nikolskii(k, f, t); },
                               [&](const KernelIntegral& k) {
                                 const auto& ts = op.t_set();
                                 if (std::none_of(ts.begin(), ts.end(), [&](double s) { return close(s, t, 1e-12); }))
                                   throw PreconditionError("kernel integral: t is not in the operator's t set");
                                 return kernel_integral(k, f, t);
                               }},
                    op.kind());
}

std::vector<double> fourier_magnitudes(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::complex<double>> roots(n);
  for (std::size_t j = 0; j < n; ++j)
    roots[j] = std::polar(1.0, -kTwoPi * static_cast<double>(j) / static_cast<double>(n));
  std::vector<double> mags(n / 2 + 1);
  for (std::size_t k = 0; k < mags.size(); ++k) {
    std::complex<double> c = 0.0;
    for (std::size_t j = 0; j < n; ++j) c += values[j] * roots[(k * j) % n];
    mags[k] = std::abs(c) / static_cast<double>(n);
  }
  return mags;
}

int trigonometric_degree(std::span<const double> values, double rel_tol) {
  const std::vector<double> mags = fourier_magnitudes(values);
  const double top = *std::max_element(mags.begin(), mags.end());
  if (top == 0.0) return -1;
  for (std::size_t k = mags.size(); k-- > 0;)
    if (mags[k] > rel_tol * top) return static_cast<int>(k);
  return -1;
}

namespace {

// Mixture of 1-4 nonnegative Gaussian bumps; periodic distance when `period` > 0.
std::vector<double> bump_mixture(CounterRng& rng, std::span<const double> nodes, double lo, double hi,
                                 double period) {
  const double width = hi - lo;
  const int bumps = 1 + static_cast<int>(rng.uniform() * 4.0);
  std::vector<double> v(nodes.size(), 0.0);
  for (int b = 0; b < bumps; ++b) {
    const double amp = rng.uniform(0.5, 2.0);
    const double centre = rng.uniform(lo, hi);
    const double sigma = rng.uniform(0.02, 0.2) * width;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      double d = nodes[i] - centre;
      if (period > 0.0) d -= period * std::round(d / period);
      v[i] += amp * std::exp(-0.5 * d * d / (sigma * sigma));
    }
  }
  return v;
}

std::vector<double> random_trig_polynomial(CounterRng& rng, std::span<const double> nodes, int degree, bool coherent) {
  std::vector<double> v(nodes.size(), 0.0);
  if (coherent) {
    // peaked like a Dirichlet kernel: positive coefficients, common shift
    const double shift = rng.uniform(0.0, kTwoPi);
    for (int k = 0; k <= degree; ++k) {
      const double c = rng.uniform(0.5, 1.0);
      for (std::size_t i = 0; i < nodes.size(); ++i) v[i] += c * std::cos(k * (nodes[i] - shift));
    }
  } else {
    for (int k = 0; k <= degree; ++k) {
      const double a = rng.normal();
      const double b = k == 0 ? 0.0 : rng.normal();
      for (std::size_t i = 0; i < nodes.size(); ++i) v[i] += a * std::cos(k * nodes[i]) + b * std::sin(k * nodes[i]);
    }
  }
  return v;
}

}  // namespace

std::vector<SampledFunction> make_test_family(const OperatorSpec& op, std::size_t count, std::uint64_t seed,
                                              const FamilyOptions& opts) {
  if (count == 0) throw PreconditionError("test family needs count >= 1");
  std::vector<SampledFunction> family;
  family.reserve(count);
  std::visit(
      Overloaded{
          [&](const Dilation&) {
            auto space = std::make_shared<const MeasureSpace>(MeasureSpace::uniform(0.0, opts.length, opts.nodes));
            for (std::size_t i = 0; i < count; ++i) {
              CounterRng rng(seed, i);
              family.emplace_back(space, bump_mixture(rng, space->nodes(), 0.0, opts.length, 0.0));
            }
          },
          [&](const HeatConvolution& k) {
            auto space = std::make_shared<const MeasureSpace>(MeasureSpace::uniform(0.0, k.length, k.resolution));
            for (std::size_t i = 0; i < count; ++i) {
              CounterRng rng(seed, i);
              family.emplace_back(space, bump_mixture(rng, space->nodes(), 0.0, k.length, k.length));
            }
          },
          [&](const NikolskiiIdentity& k) {
            const std::size_t n = 4 * static_cast<std::size_t>(k.max_degree) + 1;
            auto space = std::make_shared<const MeasureSpace>(MeasureSpace::uniform_probability(0.0, kTwoPi, n));
            for (std::size_t i = 0; i < count; ++i) {
              CounterRng rng(seed, i);
              family.emplace_back(space, random_trig_polynomial(rng, space->nodes(), k.max_degree, i % 2 == 1));
            }
          },
          [&](const KernelIntegral& k) {
            for (std::size_t i = 0; i < count; ++i) {
              CounterRng rng(seed, i);
              std::vector<double> v(k.x_space->size());
              for (double& x : v) x = rng.uniform(k.v_min, k.v_max);
              family.emplace_back(k.x_space, std::move(v));
            }
          }},
      op.kind());
  return family;
}

KernelTable::KernelTable(const std::vector<Row>& rows) {
  if (rows.empty()) throw PreconditionError("kernel table is empty");
  for (const Row& r : rows) {
    if (!std::isfinite(r.t) || !std::isfinite(r.y) || !std::isfinite(r.x) || !std::isfinite(r.v) ||
        !std::isfinite(r.k))
      throw PreconditionError("kernel table entries must be finite");
    samples_[{r.t, r.y, r.x}].emplace_back(r.v, r.k);
  }
  bool first = true;
  for (auto& [key, s] : samples_) {
    std::sort(s.begin(), s.end());
    for (std::size_t i = 1; i < s.size(); ++i)
      if (s[i].first == s[i - 1].first) throw PreconditionError("kernel table has duplicate (t, y, x, v) rows");
    if (first) {
      v_min_ = s.front().first;
      v_max_ = s.back().first;
      first = false;
    } else {
      v_min_ = std::max(v_min_, s.front().first);
      v_max_ = std::min(v_max_, s.back().first);
    }
  }
}

double KernelTable::operator()(double t, double y, double x, double v) const {
  auto it = samples_.find({t, y, x});
  if (it == samples_.end()) throw DomainError("kernel table has no entry for this (t, y, x)");
  const auto& s = it->second;
  if (s.size() == 1) return s.front().second;
  if (v < s.front().first || v > s.back().first) throw DomainError("kernel table: v outside the tabulated range");
  auto hi = std::lower_bound(s.begin(), s.end(), std::make_pair(v, -kInfinity));
  if (hi == s.begin()) return hi->second;
  auto lo = hi - 1;
  if (hi == s.end()) return lo->second;
  const double lam = (v - lo->first) / (hi->first - lo->first);
  return (1.0 - lam) * lo->second + lam * hi->second;
}

namespace {

template <class Fn>
std::vector<double> distinct(const std::map<std::tuple<double, double, double>, std::vector<std::pair<double, double>>>& m,
                             Fn pick) {
  std::set<double> s;
  for (const auto& [key, _] : m) s.insert(pick(key));
  return {s.begin(), s.end()};
}

}  // namespace

std::vector<double> KernelTable::t_values() const {
  return distinct(samples_, [](const auto& k) { return std::get<0>(k); });
}
std::vector<double> KernelTable::y_values() const {
  return distinct(samples_, [](const auto& k) { return std::get<1>(k); });
}
std::vector<double> KernelTable::x_values() const {
  return distinct(samples_, [](const auto& k) { return std::get<2>(k); });
}

KernelIntegral make_kernel_integral(std::shared_ptr<const KernelTable> table, std::vector<double> x_weights,
                                    std::vector<double> y_weights) {
  std::vector<double> xs = table->x_values(), ys = table->y_values();
  if (x_weights.empty()) x_weights.assign(xs.size(), 1.0 / static_cast<double>(xs.size()));
  if (y_weights.empty()) y_weights.assign(ys.size(), 1.0 / static_cast<double>(ys.size()));
  KernelIntegral k;
  k.x_space = std::make_shared<const MeasureSpace>(std::move(xs), std::move(x_weights));
  k.y_space = std::make_shared<const MeasureSpace>(std::move(ys), std::move(y_weights));
  k.v_min = table->v_min();
  k.v_max = table->v_max();
  k.kernel = [table](double t, double y, double x, double v) { return (*table)(t, y, x, v); };
  return k;
}

}  // namespace glspace
