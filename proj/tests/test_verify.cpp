#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "glspace/error.hpp"
#include "glspace/parallel.hpp"
#include "glspace/verify.hpp"
#include "oracles.hpp"

using namespace glspace;

namespace {

constexpr double kSlack = 1e-9;

std::vector<double> powers_of_two(int lo, int hi) {
  std::vector<double> t;
  for (int k = lo; k <= hi; ++k) t.push_back(std::ldexp(1.0, k));
  return t;
}

// p grid at or below the q grid, touching at 2: ||f||_p / ||f||_q <= 1 on a unit-mass space.
ExponentWindow touching_window(std::size_t n = 12) {
  return ExponentWindow::log_spaced({1.0, kInfinity}, 2.0, 16.0, {1.0, kInfinity}, 1.1, 2.0, n);
}

ExponentWindow default_window(std::size_t n = 12) {
  return ExponentWindow::log_spaced({1.0, kInfinity}, 1.1, 32.0, {1.0, kInfinity}, 1.1, 32.0, n);
}

// Brute-force constant straight from the definition.
double oracle_constant(const OperatorSpec& op, std::span<const SampledFunction> fam, const ExponentWindow& w,
                       const std::function<double(double)>& a, const std::function<double(double)>& b) {
  double best = 0.0;
  for (const auto& f : fam)
    for (double t : op.t_set()) {
      const auto u = apply(op, f, t);
      for (double q : w.q_grid().points())
        for (double p : w.p_grid().points()) {
          if (w.pairs() == PairRule::p_at_least_q && p < q) continue;
          const double fq = oracle::naive_lp(f, q);
          if (fq == 0.0) continue;
          best = std::max(best, oracle::naive_lp(u, p) / (std::pow(a(t), 1.0 / p) * std::pow(b(t), -1.0 / q) * fq));
        }
    }
  return best;
}

}  // namespace

TEST_CASE("window validation") {
  CHECK_THROWS_AS(ExponentWindow::log_spaced({1.0, 4.0}, 1.0, 3.0, {1.0, 4.0}, 1.1, 3.0, 4), PreconditionError);
  CHECK_THROWS_AS(ExponentWindow::log_spaced({1.0, 4.0}, 1.1, 4.0, {1.0, 4.0}, 1.1, 3.0, 4), PreconditionError);
  CHECK_THROWS_AS(ExponentWindow({1.0, 4.0}, {1.0, 4.0}, PGrid({1.5, 2.0}, true), PGrid({1.5, 2.0})),
                  PreconditionError);
  CHECK_NOTHROW(default_window());
}

TEST_CASE("scaling functions") {
  const std::vector<double> t{0.5, 2.0};
  const auto s = ScalingFunctions::power(t, 1.0, -0.5);
  CHECK(s.a(2.0) == 2.0);
  CHECK(s.b(0.5) == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(s.a(1.0), DomainError);
  CHECK_THROWS_AS(ScalingFunctions({1.0}, {0.0}, {1.0}), PreconditionError);
}

TEST_CASE("measured constant matches the brute-force oracle") {
  const OperatorSpec op(HeatConvolution{1.0, 32}, {1e-3, 1e-2});
  const auto fam = make_test_family(op, 3, 9);
  const auto w = default_window(6);
  auto id = [](double t) { return t; };
  CHECK(measure_constant(op, fam, w) == doctest::Approx(oracle_constant(op, fam, w, id, id)).epsilon(1e-12));
  const auto s = ScalingFunctions::power(op.t_set(), -0.5, 0.0);
  CHECK(measure_constant_general(op, fam, w, s) ==
        doctest::Approx(oracle_constant(op, fam, w, [](double t) { return 1.0 / std::sqrt(t); },
                                        [](double) { return 1.0; }))
            .epsilon(1e-12));
}

TEST_CASE("general constant with A = B = t equals the plain constant") {
  const OperatorSpec op(HeatConvolution{1.0, 32}, {1e-3, 0.1});
  const auto fam = make_test_family(op, 4, 5);
  const auto w = default_window(8);
  CHECK(measure_constant_general(op, fam, w, ScalingFunctions::power(op.t_set(), 1.0, 1.0)) ==
        measure_constant(op, fam, w));
}

TEST_CASE("dilation constant is exactly one") {
  const OperatorSpec op(Dilation{}, powers_of_two(-4, 4));
  const auto fam = make_test_family(op, 10, 0);
  const auto d = measure_constant_general(op, fam, touching_window(), ScalingFunctions::power(op.t_set(), 1.0, 0.0));
  CHECK(std::abs(d - 1.0) <= 1e-12);
}

TEST_CASE("identity on the diagonal gives constant one") {
  const OperatorSpec op(NikolskiiIdentity{3}, {nikolskii_t(3)});
  const auto fam = make_test_family(op, 6, 1);
  // only the pair p = q = 2 is admissible
  const ExponentWindow diag({1.0, kInfinity}, {1.0, kInfinity}, PGrid({2.0, 3.0}), PGrid({1.5, 2.0}),
                            PairRule::p_at_least_q);
  CHECK(measure_constant(op, fam, diag) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("window monotonicity and scale invariance") {
  const OperatorSpec op(HeatConvolution{1.0, 32}, {1e-3, 1e-2});
  const auto fam = make_test_family(op, 4, 3);
  const PGrid inner = PGrid::log_spaced(1.5, 8.0, 6);
  std::vector<double> wide_q(inner.points().begin(), inner.points().end()), wide_p{1.2};
  wide_q.push_back(30.0);
  wide_p.insert(wide_p.end(), inner.points().begin(), inner.points().end());
  const double small = measure_constant(op, fam, ExponentWindow({1, kInfinity}, {1, kInfinity}, inner, inner));
  const double large =
      measure_constant(op, fam, ExponentWindow({1, kInfinity}, {1, kInfinity}, PGrid(wide_q), PGrid(wide_p)));
  CHECK(large >= small);

  std::vector<SampledFunction> scaled;
  for (const auto& f : fam) scaled.push_back(f.scaled(-7.25));
  const auto w = default_window(8);
  CHECK(measure_constant(op, scaled, w) == doctest::Approx(measure_constant(op, fam, w)).epsilon(1e-12));
  const auto psi = GeneratingFunction::power(1.0);
  const double c = measure_constant(op, fam, w);
  const auto r1 = check_proposition1(op, fam, psi, psi, w, c, 0.0);
  const auto r2 = check_proposition1(op, scaled, psi, psi, w, c, 0.0);
  for (std::size_t i = 0; i < r1.rows.size(); ++i)
    CHECK(r2.rows[i].ratio == doctest::Approx(r1.rows[i].ratio).epsilon(1e-12));
}

TEST_CASE("degenerate families") {
  const OperatorSpec op(Dilation{}, {1.0});
  auto space = std::make_shared<const MeasureSpace>(MeasureSpace::uniform(0.0, 1.0, 8));
  const std::vector<SampledFunction> zero{SampledFunction(space, std::vector<double>(8, 0.0))};
  const auto w = touching_window();
  CHECK_THROWS_AS(measure_constant(op, zero, w), DegenerateError);
  const auto psi = GeneratingFunction::power(1.0);
  CHECK_THROWS_AS(check_proposition1(op, zero, psi, psi, w, 1.0, 1e-6), DegenerateError);
  CHECK_THROWS_AS(check_proposition2(op, zero, MriNorm::sup(psi), MriNorm::sup(psi), w, 1.0, 1e-6), DegenerateError);
}

TEST_CASE("soundness on the measuring grids") {
  const OperatorSpec op(HeatConvolution{1.0, 48}, {1e-3, 1e-2, 0.1});
  const auto fam = make_test_family(op, 6, 17);
  const auto w = default_window(10);
  const double c = measure_constant(op, fam, w);
  for (const auto& psi : {GeneratingFunction::power(1.0), GeneratingFunction::power(0.5),
                          GeneratingFunction::endpoint(1.0, 40.0, 0.5, 1.0)}) {
    const auto r = check_proposition1(op, fam, psi, GeneratingFunction::power(2.0), w, c, 0.0 + kSlack);
    CHECK(r.passed);
    CHECK(r.skipped == 0);
  }
  const auto s = ScalingFunctions::power(op.t_set(), -0.5, 1.0);
  const double d = measure_constant_general(op, fam, w, s);
  const auto z = MriNorm::sup(GeneratingFunction::power(1.0));
  CHECK(check_proposition3(op, fam, z, z, w, s, d, kSlack).passed);
}

TEST_CASE("extremal generating functions reduce to the constant itself") {
  const OperatorSpec op(HeatConvolution{1.0, 32}, {1e-3, 1e-2});
  const auto fam = make_test_family(op, 4, 21);
  const auto w = default_window(9);
  const double q0 = w.q_grid().points()[3], p0 = w.p_grid().points()[6];
  const double c = measure_constant(op, fam, w);
  const auto r = check_proposition1(op, fam, GeneratingFunction::extremal(q0), GeneratingFunction::extremal(p0), w, c,
                                    kSlack);
  CHECK(r.passed);
  const auto trials = make_trials(fam, op.t_set());
  for (std::size_t k = 0; k < trials.size(); ++k) {
    const auto u = apply(op, trials[k].f, trials[k].t);
    const double t = trials[k].t;
    const double direct = lp_norm(u, p0) / (std::pow(t, 1.0 / p0 - 1.0 / q0) * lp_norm(trials[k].f, q0)) / c;
    CHECK(r.rows[k].ratio == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("identity with equal spaces") {
  const OperatorSpec op(NikolskiiIdentity{2}, {nikolskii_t(2)});
  const auto fam = make_test_family(op, 5, 8);
  const ExponentWindow w({1.0, kInfinity}, {1.0, kInfinity}, PGrid::log_spaced(1.1, 16.0, 8),
                         PGrid::log_spaced(1.1, 16.0, 8), PairRule::p_at_least_q);
  const auto psi = GeneratingFunction::power(1.0);
  const double c = measure_constant(op, fam, w);
  CHECK(c >= 1.0 - 1e-12);
  const auto r = check_proposition1(op, fam, psi, psi, w, c, kSlack);
  CHECK(r.passed);
  for (const auto& row : r.rows) CHECK(row.lhs * c == doctest::Approx(row.rhs).epsilon(1e-12));
}

TEST_CASE("sup-type proposition 2 reproduces proposition 1") {
  const OperatorSpec op(HeatConvolution{1.0, 32}, {1e-3, 1e-2, 0.1});
  const auto fam = make_test_family(op, 5, 2);
  const auto w = default_window(8);
  const auto psi = GeneratingFunction::endpoint(1.0, 50.0, 0.3, 0.7);
  const auto nu = GeneratingFunction::power(1.5);
  const double c = measure_constant(op, fam, w);
  const auto r1 = check_proposition1(op, fam, psi, nu, w, c, 1e-6);
  const auto r2 = check_proposition2(op, fam, MriNorm::sup(psi), MriNorm::sup(nu), w, c, 1e-6);
  REQUIRE(r1.rows.size() == r2.rows.size());
  CHECK(r1.passed == r2.passed);
  for (std::size_t i = 0; i < r1.rows.size(); ++i) {
    CHECK(r1.rows[i].ratio == doctest::Approx(r2.rows[i].ratio).epsilon(1e-12));
    CHECK(r1.rows[i].lhs == doctest::Approx(r2.rows[i].lhs).epsilon(1e-12));
  }
}

TEST_CASE("proposition 3 with A = B = t coincides with proposition 2") {
  const OperatorSpec op(HeatConvolution{1.0, 32}, {1e-3, 1e-2, 0.1});
  const auto fam = make_test_family(op, 4, 6);
  const auto w = default_window(8);
  const auto x = MriNorm::integral(GeneratingFunction::power(0.5), 2.0);
  const auto y = MriNorm::sup(GeneratingFunction::power(1.0));
  const double c = measure_constant(op, fam, w);
  const auto r2 = check_proposition2(op, fam, x, y, w, c, 1e-6);
  const auto r3 = check_proposition3(op, fam, x, y, w, ScalingFunctions::power(op.t_set(), 1.0, 1.0), c, 1e-6);
  for (std::size_t i = 0; i < r2.rows.size(); ++i) CHECK(r2.rows[i].ratio == r3.rows[i].ratio);
}

TEST_CASE("integral-type norms with dilation") {
  const OperatorSpec op(Dilation{}, {0.25, 1.0, 4.0});
  const auto fam = make_test_family(op, 6, 4);
  const auto w = default_window(10);
  const auto x = MriNorm::integral(GeneratingFunction::power(0.5), 1.0);
  const auto y = MriNorm::integral(GeneratingFunction::endpoint(1.0, 40.0, 0.2, 0.2), 2.0);
  const double c = measure_constant(op, fam, w);
  const auto r = check_proposition2(op, fam, x, y, w, c, 1e-6);
  CHECK(r.skipped == 0);
  CHECK(r.passed);
}

TEST_CASE("dilation pipeline") {
  const OperatorSpec op(Dilation{}, powers_of_two(-4, 4));
  const auto fam = make_test_family(op, 8, 12);
  const auto w = touching_window();
  const auto psi = GeneratingFunction::power(1.0);
  const double c = measure_constant(op, fam, w);
  CHECK(check_proposition1(op, fam, psi, psi, w, c, 1e-6).passed);
  const auto s = ScalingFunctions::power(op.t_set(), 1.0, 0.0);
  const auto z = MriNorm::sup(psi);
  const auto r = check_proposition3(op, fam, z, z, w, s, 1.0, 1e-6);
  CHECK(r.passed);
  CHECK(r.worst_ratio <= 1.0 + 1e-6);
}

TEST_CASE("heat scaling constant is stable across t") {
  const OperatorSpec base(HeatConvolution{1.0, 64}, {1.0});
  const auto fam = make_test_family(base, 6, 30);
  const auto w = default_window(8);
  // kernel narrower than the period and wider than the node spacing
  std::vector<double> d, plain;
  for (int k = 7; k <= 16; ++k) {
    const OperatorSpec op = base.with_t_set({std::ldexp(1.0, -k)});
    d.push_back(measure_constant_general(op, fam, w, ScalingFunctions::power(op.t_set(), -0.5, 0.0)));
    plain.push_back(measure_constant(op, fam, w));
  }
  const auto [lo, hi] = std::minmax_element(d.begin(), d.end());
  CHECK(std::isfinite(*hi));
  CHECK(*hi / *lo < 2.0);
  CHECK(plain.back() / plain.front() > 100.0);
}

TEST_CASE("heat proposition 3 on held-out t") {
  const std::vector<double> train{std::ldexp(1.0, -10), std::ldexp(1.0, -8), std::ldexp(1.0, -6),
                                  std::ldexp(1.0, -4), std::ldexp(1.0, -2)};
  const std::vector<double> held{std::ldexp(1.0, -9), std::ldexp(1.0, -7), std::ldexp(1.0, -5),
                                 std::ldexp(1.0, -3)};
  const OperatorSpec op(HeatConvolution{1.0, 64}, train);
  const auto fam = make_test_family(op, 8, 31);
  const auto w = default_window(8);
  const auto z = MriNorm::sup(GeneratingFunction::power(1.0));
  const auto s_train = ScalingFunctions::power(train, -0.5, 0.0);
  const double d = measure_constant_general(op, fam, w, s_train);
  CHECK(check_proposition3(op, fam, z, z, w, s_train, d, kSlack).passed);
  const OperatorSpec op_held = op.with_t_set(held);
  const auto r = check_proposition3(op_held, fam, z, z, w, ScalingFunctions::power(held, -0.5, 0.0), d, 0.05);
  CHECK(r.passed);
}

TEST_CASE("lemma after normalization") {
  const auto q = PGrid::log_spaced(1.0, 64.0, 40);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto f = oracle::random_function(300 + s);
    const auto psi = GeneratingFunction::power(2.0);
    const auto r = check_lemma_normalized(f, f, psi, psi, q, q);
    CHECK(r.passed);
    CHECK(r.max_f_ratio == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.max_u_ratio == r.max_f_ratio);
  }
  auto space = std::make_shared<const MeasureSpace>(MeasureSpace::uniform(0.0, 1.0, 4));
  const SampledFunction z(space, std::vector<double>(4, 0.0));
  CHECK_THROWS_AS(check_lemma_normalized(z, z, GeneratingFunction::power(1.0), GeneratingFunction::power(1.0), q, q),
                  DegenerateError);
}

TEST_CASE("reports do not depend on the worker count") {
  const OperatorSpec op(HeatConvolution{1.0, 32}, {1e-3, 1e-2, 0.1});
  const auto fam = make_test_family(op, 7, 2);
  const auto w = default_window(8);
  const auto psi = GeneratingFunction::power(1.0);
  setenv("GLSPACE_THREADS", "1", 1);
  const double c1 = measure_constant(op, fam, w);
  const auto r1 = check_proposition1(op, fam, psi, psi, w, c1, 1e-6);
  setenv("GLSPACE_THREADS", "4", 1);
  CHECK(worker_count() == 4);
  const double c4 = measure_constant(op, fam, w);
  const auto r4 = check_proposition1(op, fam, psi, psi, w, c4, 1e-6);
  unsetenv("GLSPACE_THREADS");
  CHECK(c1 == c4);
  for (std::size_t i = 0; i < r1.rows.size(); ++i) CHECK(r1.rows[i].ratio == r4.rows[i].ratio);
}
