#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "glspace/measure.hpp"
#include "glspace/optimize.hpp"

namespace glspace {

/// psi(p) = p^{1/m} on [1, inf).
struct PowerLaw {
  double m;
};

/// psi(p) = (p - a)^{-alpha} (b - p)^{-beta} on (a, b), b finite.
struct EndpointSingular {
  double a, b, alpha, beta;
};

/// psi = 1 at p = r and +inf elsewhere; the resulting space is L_r.
struct Extremal {
  double r;
};

/// Samples (p_k, psi_k), interpolated linearly in (ln p, ln psi).
struct Tabulated {
  std::vector<double> p;
  std::vector<double> psi;
};

/// Generating function of a Grand Lebesgue Space.
class GeneratingFunction {
 public:
  using Kind = std::variant<PowerLaw, EndpointSingular, Extremal, Tabulated>;

  explicit GeneratingFunction(Kind kind);

  static GeneratingFunction power(double m) { return GeneratingFunction(PowerLaw{m}); }
  static GeneratingFunction endpoint(double a, double b, double alpha, double beta) {
    return GeneratingFunction(EndpointSingular{a, b, alpha, beta});
  }
  static GeneratingFunction extremal(double r) { return GeneratingFunction(Extremal{r}); }
  static GeneratingFunction tabulated(std::vector<double> p, std::vector<double> psi) {
    return GeneratingFunction(Tabulated{std::move(p), std::move(psi)});
  }

  const Kind& kind() const noexcept { return kind_; }

  /// Closure of the domain; upper() may be infinite.
  double lower() const noexcept;
  double upper() const noexcept;

  bool is_extremal() const noexcept { return std::holds_alternative<Extremal>(kind_); }

  /// psi(p), +inf where the function is infinite. Throws DomainError outside the closed domain.
  double operator()(double p) const;
  /// ln psi(p).
  double log(double p) const;

 private:
  Kind kind_;
};

inline double eval_psi(const GeneratingFunction& psi, double p) { return psi(p); }

struct SupWeighted {
  GeneratingFunction psi;
};

/// (integral of (h/psi)^s dp)^{1/s} over the domain of psi.
struct IntegralWeighted {
  GeneratingFunction psi;
  double s;
};

/// Rearrangement-invariant norm acting on moment curves p -> ||f||_p.
class MriNorm {
 public:
  using Kind = std::variant<SupWeighted, IntegralWeighted>;

  explicit MriNorm(Kind kind);

  static MriNorm sup(GeneratingFunction psi) { return MriNorm(SupWeighted{std::move(psi)}); }
  static MriNorm integral(GeneratingFunction psi, double s) { return MriNorm(IntegralWeighted{std::move(psi), s}); }

  const Kind& kind() const noexcept { return kind_; }
  const GeneratingFunction& psi() const noexcept;
  bool is_sup() const noexcept { return std::holds_alternative<SupWeighted>(kind_); }

 private:
  Kind kind_;
};

struct ScanOptions {
  std::size_t points = 512;
  double p_max = 1e4;
};

/// Search grid for suprema over Dom(psi): geometric in p, clustered toward
/// singular endpoints (kept an offset 1e-9 (b - a) inside), capped at p_max
/// when the domain is unbounded. Tabulated nodes are always included.
PGrid scan_grid(const GeneratingFunction& psi, const ScanOptions& opts = {});

struct WeightedSup {
  double value;
  double argmax;
  /// Unbounded domain and the objective was still rising over the last decade of the grid.
  bool truncated;
};

/// sup_p h(p)/psi(p) over the grid points of h inside Dom(psi).
WeightedSup weighted_sup(const NormFamily& h, const GeneratingFunction& psi, const SupOptions& opts = {});

/// GLS norm sup_p ||f||_p / psi(p).
WeightedSup gls_norm_detailed(const SampledFunction& f, const GeneratingFunction& psi, const PGrid& grid,
                              const SupOptions& opts = {});
double gls_norm(const SampledFunction& f, const GeneratingFunction& psi, const PGrid& grid,
                const SupOptions& opts = {});
double gls_norm(const SampledFunction& f, const GeneratingFunction& psi, const ScanOptions& scan = {});

/// phi(delta) = sup_p delta^{1/p} / psi(p).
double fundamental_function(const GeneratingFunction& psi, double delta, const ScanOptions& scan = {});
double fundamental_function(const GeneratingFunction& psi, double delta, const PGrid& grid,
                            const SupOptions& opts = {});

double mri_norm(const NormFamily& h, const MriNorm& z, const SupOptions& opts = {});

/// Fundamental function of an m.r.i. space: the norm of g(p) = delta^{1/p}.
double kappa(const MriNorm& z, double delta, const ScanOptions& scan = {});
double kappa(const MriNorm& z, double delta, const PGrid& grid, const SupOptions& opts = {});

class FundamentalCurve {
 public:
  FundamentalCurve(std::vector<double> deltas, std::vector<double> values);

  const std::vector<double>& deltas() const noexcept { return deltas_; }
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  std::vector<double> deltas_;
  std::vector<double> values_;
};

FundamentalCurve fundamental_curve(const GeneratingFunction& psi, std::vector<double> deltas,
                                   const ScanOptions& scan = {});
FundamentalCurve kappa_curve(const MriNorm& z, std::vector<double> deltas, const ScanOptions& scan = {});

/// inf_p (psi(p) N / t)^p: Markov's inequality optimized over the exponent,
/// valid for any f with GLS norm at most N. May exceed the total mass.
double tail_bound(const GeneratingFunction& psi, double norm_value, double t, const ScanOptions& scan = {});

}  // namespace glspace
