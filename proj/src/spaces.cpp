#include "glspace/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "glspace/error.hpp"

namespace glspace {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kNegInf = -kInfinity;
constexpr double kEndpointOffset = 1e-9;

bool positive_finite(double x) { return x > 0.0 && std::isfinite(x); }

void validate(const PowerLaw& k) {
  if (!positive_finite(k.m)) throw DomainError("power-law generating function needs m > 0");
}

void validate(const EndpointSingular& k) {
  if (!(k.a >= 1.0) || !(k.b > k.a) || !std::isfinite(k.b))
    throw DomainError("endpoint generating function needs 1 <= a < b < inf");
  if (!(k.alpha >= 0.0) || !(k.beta >= 0.0) || !std::isfinite(k.alpha) || !std::isfinite(k.beta))
    throw DomainError("endpoint generating function needs alpha, beta >= 0");
}

void validate(const Extremal& k) {
  if (!(k.r >= 1.0) || !std::isfinite(k.r)) throw DomainError("extremal generating function needs finite r >= 1");
}

void validate(const Tabulated& k) {
  if (k.p.size() < 2 || k.p.size() != k.psi.size())
    throw DomainError("tabulated generating function needs >= 2 (p, psi) pairs");
  for (std::size_t i = 0; i < k.p.size(); ++i) {
    if (!(k.p[i] >= 1.0) || !std::isfinite(k.p[i])) throw DomainError("tabulated p must be finite and >= 1");
    if (i > 0 && !(k.p[i] > k.p[i - 1])) throw DomainError("tabulated p must be strictly increasing");
    if (!positive_finite(k.psi[i])) throw DomainError("tabulated psi must be positive and finite");
  }
}

double tabulated_log(const Tabulated& k, double p) {
  auto it = std::upper_bound(k.p.begin(), k.p.end(), p);
  std::size_t hi = static_cast<std::size_t>(it - k.p.begin());
  if (hi >= k.p.size()) return std::log(k.psi.back());
  if (hi == 0) return std::log(k.psi.front());
  const std::size_t lo = hi - 1;
  const double lam = (std::log(p) - std::log(k.p[lo])) / (std::log(k.p[hi]) - std::log(k.p[lo]));
  return (1.0 - lam) * std::log(k.psi[lo]) + lam * std::log(k.psi[hi]);
}

}  // namespace

GeneratingFunction::GeneratingFunction(Kind kind) : kind_(std::move(kind)) {
  std::visit([](const auto& k) { validate(k); }, kind_);
}

double GeneratingFunction::lower() const noexcept {
  return std::visit(Overloaded{[](const PowerLaw&) { return 1.0; },
                               [](const EndpointSingular& k) { return k.a; },
                               [](const Extremal& k) { return k.r; },
                               [](const Tabulated& k) { return k.p.front(); }},
                    kind_);
}

double GeneratingFunction::upper() const noexcept {
  return std::visit(Overloaded{[](const PowerLaw&) { return kInfinity; },
                               [](const EndpointSingular& k) { return k.b; },
                               [](const Extremal& k) { return k.r; },
                               [](const Tabulated& k) { return k.p.back(); }},
                    kind_);
}

double GeneratingFunction::log(double p) const {
  if (std::isnan(p) || p < lower() || p > upper())
    throw DomainError("p = " + std::to_string(p) + " outside the domain of the generating function");
  return std::visit(Overloaded{[&](const PowerLaw& k) { return p == kInfinity ? kInfinity : std::log(p) / k.m; },
                               [&](const EndpointSingular& k) {
                                 double v = 0.0;
                                 if (k.alpha > 0.0) v -= k.alpha * std::log(p - k.a);
                                 if (k.beta > 0.0) v -= k.beta * std::log(k.b - p);
                                 return v;
                               },
                               [&](const Extremal& k) { return p == k.r ? 0.0 : kInfinity; },
                               [&](const Tabulated& k) { return tabulated_log(k, p); }},
                    kind_);
}

double GeneratingFunction::operator()(double p) const {
  const double lg = log(p);
  if (std::holds_alternative<PowerLaw>(kind_) && p != kInfinity) return std::pow(p, 1.0 / std::get<PowerLaw>(kind_).m);
  if (const auto* k = std::get_if<EndpointSingular>(&kind_))
    return std::pow(p - k->a, -k->alpha) * std::pow(k->b - p, -k->beta);
  return std::exp(lg);
}

MriNorm::MriNorm(Kind kind) : kind_(std::move(kind)) {
  if (const auto* k = std::get_if<IntegralWeighted>(&kind_)) {
    if (!(k->s >= 1.0) || !std::isfinite(k->s)) throw DomainError("integral m.r.i. norm needs finite s >= 1");
    if (k->psi.is_extremal()) throw DomainError("integral m.r.i. norm needs a generating function with a nondegenerate domain");
  }
}

const GeneratingFunction& MriNorm::psi() const noexcept {
  return std::visit([](const auto& k) -> const GeneratingFunction& { return k.psi; }, kind_);
}

namespace {

void append_log_spaced(std::vector<double>& out, double lo, double hi, std::size_t n) {
  if (n < 2 || !(hi > lo)) return;
  const double llo = std::log(lo), lhi = std::log(hi);
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(std::exp(llo + (lhi - llo) * static_cast<double>(i) / static_cast<double>(n - 1)));
}

PGrid finish_grid(std::vector<double> pts, double lo, double hi) {
  for (double& p : pts) p = std::clamp(p, lo, hi);
  pts.push_back(lo);
  pts.push_back(hi);
  std::sort(pts.begin(), pts.end());
  std::vector<double> out;
  out.reserve(pts.size());
  for (double p : pts)
    if (out.empty() || p > out.back() * (1.0 + 1e-13)) out.push_back(p);
  if (out.back() < hi) out.back() = hi;
  return PGrid(std::move(out));
}

}  // namespace

PGrid scan_grid(const GeneratingFunction& psi, const ScanOptions& opts) {
  const std::size_t n = std::max<std::size_t>(opts.points, 8);
  if (!(opts.p_max > 1.0)) throw DomainError("p_max must exceed 1");
  return std::visit(
      Overloaded{
          [&](const PowerLaw&) { return PGrid::log_spaced(1.0, opts.p_max, n); },
          [&](const EndpointSingular& k) {
            const double width = k.b - k.a;
            const double eps = kEndpointOffset * width;
            const double lo = k.a + eps, hi = k.b - eps;
            std::vector<double> pts;
            append_log_spaced(pts, lo, hi, n / 2);
            // geometric distances to each endpoint, from eps to width/2
            std::vector<double> d;
            append_log_spaced(d, eps, 0.5 * width, n / 4);
            for (double x : d) {
              pts.push_back(k.a + x);
              pts.push_back(k.b - x);
            }
            return finish_grid(std::move(pts), lo, hi);
          },
          [&](const Extremal& k) { return PGrid({k.r, std::max(2.0 * k.r, k.r + 1.0)}); },
          [&](const Tabulated& k) {
            std::vector<double> pts(k.p.begin(), k.p.end());
            const double hi = std::min(k.p.back(), opts.p_max);
            append_log_spaced(pts, k.p.front(), hi, n > pts.size() ? n - pts.size() : 2);
            std::erase_if(pts, [&](double p) { return p > hi; });
            return finish_grid(std::move(pts), k.p.front(), hi);
          }},
      psi.kind());
}

namespace {

// Grid points of h where psi is finite, with the objective ln h - ln psi there.
struct Effective {
  std::vector<double> points;
  std::vector<double> objective;
};

Effective effective_points(const NormFamily& h, const GeneratingFunction& psi) {
  Effective e;
  const auto pts = h.grid().points();
  const auto vals = h.values();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double p = pts[i];
    if (p < psi.lower() || p > psi.upper()) continue;
    const double lpsi = psi.log(p);
    if (lpsi == kInfinity) continue;
    e.points.push_back(p);
    e.objective.push_back((vals[i] > 0.0 ? std::log(vals[i]) : kNegInf) - lpsi);
  }
  return e;
}

bool rising_over_last_decade(const Effective& e) {
  const double last = e.points.back();
  std::size_t i = e.points.size() - 1;
  while (i > 0 && e.points[i - 1] >= last / 10.0) --i;
  for (std::size_t j = i + 1; j < e.points.size(); ++j)
    if (e.objective[j] > e.objective[j - 1] + 1e-13 * std::abs(e.objective[j - 1])) return true;
  return false;
}

}  // namespace

WeightedSup weighted_sup(const NormFamily& h, const GeneratingFunction& psi, const SupOptions& opts) {
  if (const auto* ex = std::get_if<Extremal>(&psi.kind())) {
    if (auto idx = h.grid().find(ex->r)) return {h.values()[*idx], ex->r, false};
    if (!opts.refine) throw DomainError("extremal generating function: r = " + std::to_string(ex->r) + " is not on the grid");
    return {h.at(ex->r), ex->r, false};
  }

  const Effective e = effective_points(h, psi);
  if (e.points.empty()) throw DomainError("no grid point where the generating function is finite");
  if (std::all_of(e.objective.begin(), e.objective.end(), [](double v) { return v == kNegInf; }))
    return {0.0, e.points.front(), false};

  std::size_t best = 0;
  for (std::size_t i = 1; i < e.objective.size(); ++i)
    if (e.objective[i] > e.objective[best]) best = i;
  double value = e.objective[best];
  double argmax = e.points[best];

  if (opts.refine && e.points.size() >= 2) {
    const double lo = e.points[best == 0 ? 0 : best - 1];
    const double hi = e.points[std::min(best + 1, e.points.size() - 1)];
    auto objective = [&](double p) { return h.log_at(p) - psi.log(p); };
    const SupResult polished = golden_section_max(objective, lo, hi, opts.rel_tol, opts.max_iter);
    if (polished.value > value) {
      value = polished.value;
      argmax = polished.argmax;
    }
  }

  const bool truncated = psi.upper() == kInfinity && (best + 1 == e.points.size() || rising_over_last_decade(e));
  return {std::exp(value), argmax, truncated};
}

WeightedSup gls_norm_detailed(const SampledFunction& f, const GeneratingFunction& psi, const PGrid& grid,
                              const SupOptions& opts) {
  if (const auto* ex = std::get_if<Extremal>(&psi.kind())) {
    // psi is +inf off r; other grid points simply do not contribute
    if (opts.refine) return {lp_norm(f, ex->r), ex->r, false};
    return weighted_sup(norm_family(f, grid), psi, opts);
  }
  for (double p : grid.points())
    if (p < psi.lower() * (1.0 - 1e-12) || p > psi.upper() * (1.0 + 1e-12))
      throw DomainError("grid point p = " + std::to_string(p) + " lies outside the domain of psi");
  return weighted_sup(norm_family(f, grid), psi, opts);
}

double gls_norm(const SampledFunction& f, const GeneratingFunction& psi, const PGrid& grid, const SupOptions& opts) {
  return gls_norm_detailed(f, psi, grid, opts).value;
}

double gls_norm(const SampledFunction& f, const GeneratingFunction& psi, const ScanOptions& scan) {
  if (const auto* ex = std::get_if<Extremal>(&psi.kind())) return lp_norm(f, ex->r);
  return gls_norm(f, psi, scan_grid(psi, scan));
}

namespace {

void check_delta(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("delta must be positive and finite");
}

}  // namespace

double fundamental_function(const GeneratingFunction& psi, double delta, const PGrid& grid, const SupOptions& opts) {
  check_delta(delta);
  return weighted_sup(power_curve(delta, grid), psi, opts).value;
}

double fundamental_function(const GeneratingFunction& psi, double delta, const ScanOptions& scan) {
  check_delta(delta);
  return fundamental_function(psi, delta, scan_grid(psi, scan));
}

namespace {

double integral_norm(const NormFamily& h, const IntegralWeighted& z) {
  const GeneratingFunction& psi = z.psi;
  const auto pts = h.grid().points();
  double lo = psi.lower();
  double hi = psi.upper() == kInfinity ? pts.back() : psi.upper();
  if (!h.has_exact()) {
    lo = std::max(lo, pts.front());
    hi = std::min(hi, pts.back());
  }
  if (!(hi > lo)) throw DomainError("integral m.r.i. norm: the moment curve does not cover the domain");

  auto integrand = [&](double p) {
    const double lpsi = psi.log(p);
    if (lpsi == kInfinity) return 0.0;
    const double lh = h.log_at(p);
    if (lh == kNegInf) return 0.0;
    return std::exp(z.s * (lh - lpsi));
  };

  // Panels between grid nodes: sampled curves have kinks there.
  std::vector<double> cuts{lo};
  for (double p : pts)
    if (p > lo && p < hi) cuts.push_back(p);
  cuts.push_back(hi);

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Integral part = adaptive_simpson(integrand, cuts[i], cuts[i + 1], 1e-12, 30);
    const bool at_end = i == 0 || i + 2 == cuts.size();
    if (!part.converged && at_end) return kInfinity;
    total += part.value;
  }
  if (!std::isfinite(total)) return kInfinity;

  if (psi.upper() == kInfinity && hi / 10.0 > lo) {
    // Power-law decay rate of the integrand over the last decade; rate <= 1 is not integrable.
    const double f1 = integrand(hi), f0 = integrand(hi / 10.0);
    if (f1 > 0.0 && f0 > 0.0 && std::log10(f0 / f1) <= 1.0) return kInfinity;
  }
  return std::pow(total, 1.0 / z.s);
}

}  // namespace

double mri_norm(const NormFamily& h, const MriNorm& z, const SupOptions& opts) {
  return std::visit(Overloaded{[&](const SupWeighted& k) { return weighted_sup(h, k.psi, opts).value; },
                               [&](const IntegralWeighted& k) { return integral_norm(h, k); }},
                    z.kind());
}

double kappa(const MriNorm& z, double delta, const PGrid& grid, const SupOptions& opts) {
  check_delta(delta);
  return mri_norm(power_curve(delta, grid), z, opts);
}

double kappa(const MriNorm& z, double delta, const ScanOptions& scan) {
  check_delta(delta);
  return kappa(z, delta, scan_grid(z.psi(), scan));
}

FundamentalCurve::FundamentalCurve(std::vector<double> deltas, std::vector<double> values)
    : deltas_(std::move(deltas)), values_(std::move(values)) {
  if (deltas_.size() != values_.size()) throw PreconditionError("fundamental curve: one value per delta required");
  for (std::size_t i = 0; i < deltas_.size(); ++i) {
    if (!(deltas_[i] > 0.0)) throw PreconditionError("fundamental curve: deltas must be positive");
    if (i > 0 && !(deltas_[i] > deltas_[i - 1])) throw PreconditionError("fundamental curve: deltas must increase");
  }
}

FundamentalCurve fundamental_curve(const GeneratingFunction& psi, std::vector<double> deltas, const ScanOptions& scan) {
  const PGrid grid = psi.is_extremal() ? scan_grid(psi) : scan_grid(psi, scan);
  std::vector<double> v;
  v.reserve(deltas.size());
  for (double d : deltas) v.push_back(fundamental_function(psi, d, grid));
  return FundamentalCurve(std::move(deltas), std::move(v));
}

FundamentalCurve kappa_curve(const MriNorm& z, std::vector<double> deltas, const ScanOptions& scan) {
  const PGrid grid = scan_grid(z.psi(), scan);
  std::vector<double> v;
  v.reserve(deltas.size());
  for (double d : deltas) v.push_back(kappa(z, d, grid));
  return FundamentalCurve(std::move(deltas), std::move(v));
}

double tail_bound(const GeneratingFunction& psi, double norm_value, double t, const ScanOptions& scan) {
  if (!(t > 0.0)) throw DomainError("tail bound needs t > 0");
  if (!(norm_value >= 0.0)) throw DomainError("tail bound needs a nonnegative norm");
  if (norm_value == 0.0) return 0.0;
  if (norm_value == kInfinity) return kInfinity;
  const double log_ratio = std::log(norm_value) - std::log(t);
  if (const auto* ex = std::get_if<Extremal>(&psi.kind())) return std::exp(ex->r * log_ratio);

  // maximize -p (ln psi(p) + ln(N/t)), i.e. minimize the log of the bound
  auto objective = [&](double p) {
    const double lpsi = psi.log(p);
    if (lpsi == kInfinity) return kNegInf;
    return -p * (lpsi + log_ratio);
  };
  const PGrid grid = scan_grid(psi, scan);
  const SupResult best = maximize_on_grid(grid.points(), objective);
  return std::exp(-best.value);
}

}  // namespace glspace
