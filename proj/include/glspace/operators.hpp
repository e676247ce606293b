#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "glspace/measure.hpp"

namespace glspace {

/// u(y) = f(y/t): nodes and weights are both scaled by t, so ||u||_p = t^{1/p} ||f||_p.
struct Dilation {};

/// Periodic convolution with the wrapped Gaussian of variance 2t on n uniform nodes over [0, length).
struct HeatConvolution {
  double length;
  std::size_t resolution;
};

/// u = f for trigonometric polynomials of degree n <= max_degree, parametrized by t = 1/(n+1).
struct NikolskiiIdentity {
  int max_degree;
};

/// K(t, y, x, v)
using KernelFn = std::function<double(double, double, double, double)>;

/// u(y, t) = sum_x w_x K(t, y, x, f(x)).
struct KernelIntegral {
  KernelFn kernel;
  SpacePtr x_space;
  SpacePtr y_space;
  /// Value range on which the kernel is defined; used to draw test functions.
  double v_min = -1.0;
  double v_max = 1.0;
};

/// Operator Q together with its finite parameter set T.
class OperatorSpec {
 public:
  using Kind = std::variant<Dilation, HeatConvolution, NikolskiiIdentity, KernelIntegral>;

  OperatorSpec(Kind kind, std::vector<double> t_set);

  const Kind& kind() const noexcept { return kind_; }
  const std::vector<double>& t_set() const noexcept { return t_set_; }
  std::string name() const;

  /// Same operator with a different parameter set.
  OperatorSpec with_t_set(std::vector<double> t_set) const { return OperatorSpec(kind_, std::move(t_set)); }

 private:
  Kind kind_;
  std::vector<double> t_set_;
};

/// t = 1/(n+1) for the Nikolskii parametrization.
inline double nikolskii_t(int degree) { return 1.0 / (degree + 1.0); }
/// Inverse of nikolskii_t; throws PreconditionError unless t = 1/(n+1) for an integer n >= 0.
int nikolskii_degree(double t);

SampledFunction apply(const OperatorSpec& op, const SampledFunction& f, double t);

/// Magnitudes of the discrete Fourier coefficients |c_k|, k = 0..N/2, of the
/// values on a uniform grid (normalized so that f = sum_k c_k e^{ikx}).
std::vector<double> fourier_magnitudes(std::span<const double> values);

/// Largest k whose Fourier coefficient exceeds rel_tol * max |c|, or -1 for the zero function.
int trigonometric_degree(std::span<const double> values, double rel_tol = 1e-10);

struct FamilyOptions {
  /// Nodes of the base space for dilation (over [0, length)).
  std::size_t nodes = 256;
  double length = 1.0;
};

/// Deterministic pseudo-random test functions suited to the operator's X-space.
std::vector<SampledFunction> make_test_family(const OperatorSpec& op, std::size_t count, std::uint64_t seed,
                                              const FamilyOptions& opts = {});

/// Kernel tabulated over (t, y, x) with linear interpolation in v.
class KernelTable {
 public:
  struct Row {
    double t, y, x, v, k;
  };

  explicit KernelTable(const std::vector<Row>& rows);

  double operator()(double t, double y, double x, double v) const;

  std::vector<double> t_values() const;
  std::vector<double> x_values() const;
  std::vector<double> y_values() const;
  double v_min() const noexcept { return v_min_; }
  double v_max() const noexcept { return v_max_; }

 private:
  std::map<std::tuple<double, double, double>, std::vector<std::pair<double, double>>> samples_;
  double v_min_ = 0.0;
  double v_max_ = 0.0;
};

/// KernelIntegral over the x and y nodes of the table. Weights default to 1/count on each side.
KernelIntegral make_kernel_integral(std::shared_ptr<const KernelTable> table, std::vector<double> x_weights = {},
                                    std::vector<double> y_weights = {});

}  // namespace glspace
