#include "glspace/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "glspace/error.hpp"
#include "glspace/parallel.hpp"

namespace glspace {

namespace {

constexpr double kNegInf = -kInfinity;

void check_range(const ExponentRange& r, const char* name) {
  if (!(r.lo >= 1.0) || !(r.hi > r.lo) || std::isnan(r.hi))
    throw PreconditionError(std::string(name) + " range must satisfy 1 <= lo < hi <= inf");
}

void check_inside(const PGrid& g, const ExponentRange& r, const char* name) {
  if (g.includes_infinity()) throw PreconditionError(std::string(name) + " grid cannot include p = infinity");
  if (!(g.front() > r.lo) || !(g.back() < r.hi))
    throw PreconditionError(std::string(name) + " grid must lie strictly inside its open range");
}

}  // namespace

ExponentWindow::ExponentWindow(ExponentRange q_range, ExponentRange p_range, PGrid q_grid, PGrid p_grid,
                               PairRule pairs)
    : q_range_(q_range), p_range_(p_range), q_grid_(std::move(q_grid)), p_grid_(std::move(p_grid)), pairs_(pairs) {
  check_range(q_range_, "q");
  check_range(p_range_, "p");
  check_inside(q_grid_, q_range_, "q");
  check_inside(p_grid_, p_range_, "p");
}

ExponentWindow ExponentWindow::log_spaced(ExponentRange q_range, double q_lo, double q_hi, ExponentRange p_range,
                                          double p_lo, double p_hi, std::size_t n, PairRule pairs) {
  return ExponentWindow(q_range, p_range, PGrid::log_spaced(q_lo, q_hi, n), PGrid::log_spaced(p_lo, p_hi, n), pairs);
}

ScalingFunctions::ScalingFunctions(std::vector<double> t, std::vector<double> a, std::vector<double> b)
    : t_(std::move(t)), a_(std::move(a)), b_(std::move(b)) {
  if (t_.empty() || t_.size() != a_.size() || t_.size() != b_.size())
    throw PreconditionError("scaling functions need one A and one B value per t");
  for (std::size_t i = 0; i < t_.size(); ++i)
    if (!(a_[i] > 0.0) || !(b_[i] > 0.0) || !std::isfinite(a_[i]) || !std::isfinite(b_[i]))
      throw PreconditionError("scaling function values must be positive and finite");
}

ScalingFunctions ScalingFunctions::power(std::span<const double> t, double a_exponent, double b_exponent) {
  std::vector<double> ts(t.begin(), t.end()), a, b;
  for (double x : ts) {
    a.push_back(std::pow(x, a_exponent));
    b.push_back(std::pow(x, b_exponent));
  }
  return ScalingFunctions(std::move(ts), std::move(a), std::move(b));
}

std::size_t ScalingFunctions::index(double t) const {
  for (std::size_t i = 0; i < t_.size(); ++i)
    if (std::abs(t_[i] - t) <= 1e-12 * std::max(std::abs(t), std::abs(t_[i]))) return i;
  throw DomainError("scaling functions are not tabulated at t = " + std::to_string(t));
}

double ScalingFunctions::a(double t) const { return a_[index(t)]; }
double ScalingFunctions::b(double t) const { return b_[index(t)]; }

std::vector<Trial> make_trials(std::span<const SampledFunction> family, std::span<const double> t_set) {
  std::vector<Trial> out;
  out.reserve(family.size() * t_set.size());
  for (std::size_t i = 0; i < family.size(); ++i)
    for (double t : t_set) out.push_back({t, family[i], i});
  return out;
}

namespace {

// ln of ||f||_q on the q grid and ||u||_p on the p grid for one trial.
struct TrialNorms {
  std::vector<double> log_f;
  std::vector<double> log_u;
  NormFamily f_family;
  NormFamily u_family;
};

double safe_log(double v) { return v > 0.0 ? std::log(v) : kNegInf; }

TrialNorms evaluate(const OperatorSpec& op, const Trial& trial, const ExponentWindow& window) {
  const SampledFunction u = apply(op, trial.f, trial.t);
  NormFamily hf = norm_family(trial.f, window.q_grid()).sampled_only();
  NormFamily hu = norm_family(u, window.p_grid()).sampled_only();
  std::vector<double> lf, lu;
  for (double v : hf.values()) lf.push_back(safe_log(v));
  for (double v : hu.values()) lu.push_back(safe_log(v));
  return {std::move(lf), std::move(lu), std::move(hf), std::move(hu)};
}

std::vector<TrialNorms> evaluate_all(const OperatorSpec& op, std::span<const Trial> trials,
                                     const ExponentWindow& window) {
  std::vector<std::optional<TrialNorms>> slots(trials.size());
  parallel_for(trials.size(), [&](std::size_t i) { slots[i] = evaluate(op, trials[i], window); });
  std::vector<TrialNorms> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

// Max over trials and admissible (p, q) of ||u||_p / (A^{1/p} B^{-1/q} ||f||_q), in log form.
template <class LogA, class LogB>
double measure_impl(const OperatorSpec& op, std::span<const Trial> trials, const ExponentWindow& window, LogA log_a,
                    LogB log_b) {
  if (trials.empty()) throw DegenerateError("constant measurement needs a nonempty family");
  const std::vector<TrialNorms> norms = evaluate_all(op, trials, window);
  const auto qs = window.q_grid().points();
  const auto ps = window.p_grid().points();
  double best = kNegInf;
  bool any = false;
  for (std::size_t k = 0; k < trials.size(); ++k) {
    const double la = log_a(trials[k].t), lb = log_b(trials[k].t);
    for (std::size_t j = 0; j < qs.size(); ++j) {
      const double lf = norms[k].log_f[j];
      if (lf == kNegInf) continue;
      for (std::size_t i = 0; i < ps.size(); ++i) {
        if (window.pairs() == PairRule::p_at_least_q && ps[i] < qs[j]) continue;
        any = true;
        const double r = norms[k].log_u[i] - (la / ps[i] - lb / qs[j] + lf);
        best = std::max(best, r);
      }
    }
  }
  if (!any) throw DegenerateError("every term has ||f||_q = 0; the constant is undetermined");
  return best == kNegInf ? 0.0 : std::exp(best);
}

}  // namespace

double measure_constant(const OperatorSpec& op, std::span<const Trial> trials, const ExponentWindow& window) {
  auto lt = [](double t) { return std::log(t); };
  return measure_impl(op, trials, window, lt, lt);
}

double measure_constant(const OperatorSpec& op, std::span<const SampledFunction> family, const ExponentWindow& window) {
  const auto trials = make_trials(family, op.t_set());
  return measure_constant(op, trials, window);
}

double measure_constant_general(const OperatorSpec& op, std::span<const Trial> trials, const ExponentWindow& window,
                                const ScalingFunctions& scaling) {
  return measure_impl(
      op, trials, window, [&](double t) { return std::log(scaling.a(t)); },
      [&](double t) { return std::log(scaling.b(t)); });
}

double measure_constant_general(const OperatorSpec& op, std::span<const SampledFunction> family,
                                const ExponentWindow& window, const ScalingFunctions& scaling) {
  const auto trials = make_trials(family, op.t_set());
  return measure_constant_general(op, trials, window, scaling);
}

LemmaReport check_lemma_normalized(const SampledFunction& f, const SampledFunction& u, const GeneratingFunction& psi,
                                   const GeneratingFunction& nu, const PGrid& q_grid, const PGrid& p_grid,
                                   double tolerance) {
  const SupOptions grid_only{.refine = false};
  const NormFamily hf = norm_family(f, q_grid);
  const NormFamily hu = norm_family(u, p_grid);
  const double nf = weighted_sup(hf, psi, grid_only).value;
  const double nu_norm = weighted_sup(hu, nu, grid_only).value;
  if (nf == 0.0 || nu_norm == 0.0) throw DegenerateError("lemma check needs nonzero GLS norms");

  auto max_ratio = [](const NormFamily& h, const GeneratingFunction& g, double norm) {
    double m = 0.0;
    const auto pts = h.grid().points();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (pts[i] < g.lower() || pts[i] > g.upper()) continue;
      const double w = g(pts[i]);
      if (w == kInfinity) continue;
      m = std::max(m, (h.values()[i] / norm) / w);
    }
    return m;
  };
  LemmaReport r{};
  r.max_f_ratio = max_ratio(hf, psi, nf);
  r.max_u_ratio = max_ratio(hu, nu, nu_norm);
  r.max_violation = std::max(r.max_f_ratio, r.max_u_ratio) - 1.0;
  r.passed = r.max_violation <= tolerance;
  return r;
}

namespace {

struct SideValues {
  double norm;
  double fundamental;
};

// Evaluates one side of a proposition check; `x_side` picks f on the q grid, else u on the p grid.
using SideFn = std::function<SideValues(const TrialNorms&, double t, bool x_side)>;

VerificationReport run_check(std::string name, const OperatorSpec& op, std::span<const Trial> trials,
                             const ExponentWindow& window, double constant, double tolerance, const SideFn& side) {
  if (trials.empty()) throw DegenerateError("verification needs a nonempty family");
  if (!(constant >= 0.0) || !std::isfinite(constant)) throw DomainError("constant must be finite and nonnegative");
  if (!(tolerance >= 0.0)) throw DomainError("tolerance must be nonnegative");
  const std::vector<TrialNorms> norms = evaluate_all(op, trials, window);

  VerificationReport rep;
  rep.check = std::move(name);
  rep.measured_constant = constant;
  rep.tolerance = tolerance;
  rep.rows.resize(trials.size());

  std::size_t zero_f = 0;
  parallel_for(trials.size(), [&](std::size_t k) {
    const double t = trials[k].t;
    const SideValues xs = side(norms[k], t, true);
    const SideValues ys = side(norms[k], t, false);
    RatioRow row{trials[k].f_index, t, ys.norm / ys.fundamental, constant * xs.norm / xs.fundamental, 0.0, false};
    auto bad = [](double v) { return !(v > 0.0) || !std::isfinite(v); };
    if (bad(xs.fundamental) || bad(ys.fundamental) || !std::isfinite(xs.norm) || !std::isfinite(ys.norm) ||
        xs.norm == 0.0) {
      row.skipped = true;
      row.ratio = std::numeric_limits<double>::quiet_NaN();
    } else if (row.lhs == 0.0) {
      row.ratio = 0.0;
    } else {
      row.ratio = row.rhs > 0.0 ? row.lhs / row.rhs : kInfinity;
    }
    rep.rows[k] = row;
  });
  for (std::size_t k = 0; k < trials.size(); ++k)
    if (std::all_of(norms[k].f_family.values().begin(), norms[k].f_family.values().end(),
                    [](double v) { return v == 0.0; }))
      ++zero_f;
  if (zero_f == trials.size()) throw DegenerateError("every test function vanishes");

  double worst = kNegInf;
  for (const RatioRow& r : rep.rows) {
    if (r.skipped) {
      ++rep.skipped;
      continue;
    }
    worst = std::max(worst, r.ratio);
  }
  if (rep.skipped == rep.rows.size()) {
    rep.worst_ratio = kInfinity;
    rep.passed = false;
  } else {
    rep.worst_ratio = worst;
    rep.passed = worst <= 1.0 + tolerance;
  }
  return rep;
}

const SupOptions kGridOnly{.refine = false};

}  // namespace

VerificationReport check_proposition1(const OperatorSpec& op, std::span<const Trial> trials,
                                      const GeneratingFunction& psi, const GeneratingFunction& nu,
                                      const ExponentWindow& window, double c_hat, double tolerance) {
  auto side = [&](const TrialNorms& n, double t, bool x_side) -> SideValues {
    const GeneratingFunction& g = x_side ? psi : nu;
    const NormFamily& h = x_side ? n.f_family : n.u_family;
    const PGrid& grid = x_side ? window.q_grid() : window.p_grid();
    return {weighted_sup(h, g, kGridOnly).value, fundamental_function(g, t, grid, kGridOnly)};
  };
  return run_check("proposition1", op, trials, window, c_hat, tolerance, side);
}

VerificationReport check_proposition1(const OperatorSpec& op, std::span<const SampledFunction> family,
                                      const GeneratingFunction& psi, const GeneratingFunction& nu,
                                      const ExponentWindow& window, double c_hat, double tolerance) {
  const auto trials = make_trials(family, op.t_set());
  return check_proposition1(op, trials, psi, nu, window, c_hat, tolerance);
}

namespace {

SideValues mri_side(const TrialNorms& n, const MriNorm& z, const PGrid& grid, bool x_side, double delta) {
  const NormFamily& h = x_side ? n.f_family : n.u_family;
  return {mri_norm(h, z, kGridOnly), mri_norm(power_curve(delta, grid).sampled_only(), z, kGridOnly)};
}

}  // namespace

VerificationReport check_proposition2(const OperatorSpec& op, std::span<const Trial> trials, const MriNorm& x_norm,
                                      const MriNorm& y_norm, const ExponentWindow& window, double c_hat,
                                      double tolerance) {
  auto side = [&](const TrialNorms& n, double t, bool x_side) {
    return x_side ? mri_side(n, x_norm, window.q_grid(), true, t) : mri_side(n, y_norm, window.p_grid(), false, t);
  };
  return run_check("proposition2", op, trials, window, c_hat, tolerance, side);
}

VerificationReport check_proposition2(const OperatorSpec& op, std::span<const SampledFunction> family,
                                      const MriNorm& x_norm, const MriNorm& y_norm, const ExponentWindow& window,
                                      double c_hat, double tolerance) {
  const auto trials = make_trials(family, op.t_set());
  return check_proposition2(op, trials, x_norm, y_norm, window, c_hat, tolerance);
}

VerificationReport check_proposition3(const OperatorSpec& op, std::span<const Trial> trials, const MriNorm& x_norm,
                                      const MriNorm& y_norm, const ExponentWindow& window,
                                      const ScalingFunctions& scaling, double d_hat, double tolerance) {
  auto side = [&](const TrialNorms& n, double t, bool x_side) {
    return x_side ? mri_side(n, x_norm, window.q_grid(), true, scaling.b(t))
                  : mri_side(n, y_norm, window.p_grid(), false, scaling.a(t));
  };
  return run_check("proposition3", op, trials, window, d_hat, tolerance, side);
}

VerificationReport check_proposition3(const OperatorSpec& op, std::span<const SampledFunction> family,
                                      const MriNorm& x_norm, const MriNorm& y_norm, const ExponentWindow& window,
                                      const ScalingFunctions& scaling, double d_hat, double tolerance) {
  const auto trials = make_trials(family, op.t_set());
  return check_proposition3(op, trials, x_norm, y_norm, window, scaling, d_hat, tolerance);
}

}  // namespace glspace
