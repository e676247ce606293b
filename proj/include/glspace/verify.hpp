#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "glspace/measure.hpp"
#include "glspace/operators.hpp"
#include "glspace/spaces.hpp"

namespace glspace {

/// Open exponent interval (lo, hi), 1 <= lo < hi <= inf.
struct ExponentRange {
  double lo;
  double hi;
};

/// Which (p, q) pairs enter a constant measurement.
enum class PairRule {
  all,          ///< every p in p_grid against every q in q_grid
  p_at_least_q  ///< only p >= q (Nikolskii-type inequalities)
};

/// Exponent ranges (a, b) for q and (c, d) for p, with the grids the checks run on.
class ExponentWindow {
 public:
  ExponentWindow(ExponentRange q_range, ExponentRange p_range, PGrid q_grid, PGrid p_grid,
                 PairRule pairs = PairRule::all);

  /// Both grids log-spaced with n points over [lo, hi] (inside the given ranges).
  static ExponentWindow log_spaced(ExponentRange q_range, double q_lo, double q_hi, ExponentRange p_range,
                                   double p_lo, double p_hi, std::size_t n, PairRule pairs = PairRule::all);

  const ExponentRange& q_range() const noexcept { return q_range_; }
  const ExponentRange& p_range() const noexcept { return p_range_; }
  const PGrid& q_grid() const noexcept { return q_grid_; }
  const PGrid& p_grid() const noexcept { return p_grid_; }
  PairRule pairs() const noexcept { return pairs_; }

 private:
  ExponentRange q_range_;
  ExponentRange p_range_;
  PGrid q_grid_;
  PGrid p_grid_;
  PairRule pairs_;
};

/// A(t), B(t) tabulated on a finite t set; all values positive and finite.
class ScalingFunctions {
 public:
  ScalingFunctions(std::vector<double> t, std::vector<double> a, std::vector<double> b);

  /// A(t) = t^a_exponent, B(t) = t^b_exponent on the given t values.
  static ScalingFunctions power(std::span<const double> t, double a_exponent, double b_exponent);

  double a(double t) const;
  double b(double t) const;
  const std::vector<double>& t_values() const noexcept { return t_; }

 private:
  std::size_t index(double t) const;

  std::vector<double> t_;
  std::vector<double> a_;
  std::vector<double> b_;
};

/// One (f, t) evaluation of an operator.
struct Trial {
  double t;
  SampledFunction f;
  std::size_t f_index;
};

/// family x t_set in (f-index, t-index) order.
std::vector<Trial> make_trials(std::span<const SampledFunction> family, std::span<const double> t_set);

/// max ||Q[f](t)||_p / (t^{1/p - 1/q} ||f||_q) over trials and window pairs; terms with ||f||_q = 0 are skipped.
double measure_constant(const OperatorSpec& op, std::span<const Trial> trials, const ExponentWindow& window);
double measure_constant(const OperatorSpec& op, std::span<const SampledFunction> family, const ExponentWindow& window);

/// As measure_constant with denominator A(t)^{1/p} B(t)^{-1/q} ||f||_q.
double measure_constant_general(const OperatorSpec& op, std::span<const Trial> trials, const ExponentWindow& window,
                                const ScalingFunctions& scaling);
double measure_constant_general(const OperatorSpec& op, std::span<const SampledFunction> family,
                                const ExponentWindow& window, const ScalingFunctions& scaling);

struct LemmaReport {
  double max_f_ratio;  ///< max_q ||f||_q / (psi(q) ||f||_{G psi})
  double max_u_ratio;  ///< max_p ||u||_p / (nu(p) ||u||_{G nu})
  double max_violation;
  bool passed;
};

/// After scaling f and u to unit GLS norm (grid suprema), ||f||_q <= psi(q) and
/// ||u||_p <= nu(p) must hold on the grids.
LemmaReport check_lemma_normalized(const SampledFunction& f, const SampledFunction& u, const GeneratingFunction& psi,
                                   const GeneratingFunction& nu, const PGrid& q_grid, const PGrid& p_grid,
                                   double tolerance = 1e-12);

struct RatioRow {
  std::size_t f_index;
  double t;
  double lhs;
  double rhs;
  double ratio;
  bool skipped;
};

struct VerificationReport {
  std::string check;
  double measured_constant = 0.0;
  std::vector<RatioRow> rows;
  double worst_ratio = 0.0;
  bool passed = false;
  double tolerance = 0.0;
  std::size_t skipped = 0;
  /// Free-form provenance (operator, generating functions, window, seed). Values may hold JSON text.
  std::map<std::string, std::string> metadata;
};

/// ||u||_{G nu} / phi_nu(t) <= c_hat ||f||_{G psi} / phi_psi(t) for every trial.
/// Norms and fundamental functions are maxima over the window grids.
VerificationReport check_proposition1(const OperatorSpec& op, std::span<const Trial> trials,
                                      const GeneratingFunction& psi, const GeneratingFunction& nu,
                                      const ExponentWindow& window, double c_hat, double tolerance);
VerificationReport check_proposition1(const OperatorSpec& op, std::span<const SampledFunction> family,
                                      const GeneratingFunction& psi, const GeneratingFunction& nu,
                                      const ExponentWindow& window, double c_hat, double tolerance);

/// <u>_Y / kappa_Y(t) <= c_hat <f>_X / kappa_X(t).
VerificationReport check_proposition2(const OperatorSpec& op, std::span<const Trial> trials, const MriNorm& x_norm,
                                      const MriNorm& y_norm, const ExponentWindow& window, double c_hat,
                                      double tolerance);
VerificationReport check_proposition2(const OperatorSpec& op, std::span<const SampledFunction> family,
                                      const MriNorm& x_norm, const MriNorm& y_norm, const ExponentWindow& window,
                                      double c_hat, double tolerance);

/// <u>_Y / kappa_Y(A(t)) <= d_hat <f>_X / kappa_X(B(t)).
VerificationReport check_proposition3(const OperatorSpec& op, std::span<const Trial> trials, const MriNorm& x_norm,
                                      const MriNorm& y_norm, const ExponentWindow& window,
                                      const ScalingFunctions& scaling, double d_hat, double tolerance);
VerificationReport check_proposition3(const OperatorSpec& op, std::span<const SampledFunction> family,
                                      const MriNorm& x_norm, const MriNorm& y_norm, const ExponentWindow& window,
                                      const ScalingFunctions& scaling, double d_hat, double tolerance);

}  // namespace glspace
