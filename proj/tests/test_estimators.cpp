#include "checks.hpp"
#include "oracles.hpp"

#include "relreg/error.hpp"
#include "relreg/estimators.hpp"
#include "relreg/simulation.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace relreg;

namespace {

const KernelSpec gauss{ KernelFamily::Gaussian };
const KernelSpec epan{ KernelFamily::Epanechnikov };
const double inv_sqrt_2pi = 0.3989422804014327;

ErrorCode
code_of(const std::function<void()>& f)
{
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

} // namespace

TEST_CASE("synthetic transform")
{
  CHECK(synthetic_transform(123.0, 0, 0.0, 1) == 0.0);
  CHECK(synthetic_transform(-5.0, 0, 0.0, 2) == 0.0);
  CHECK(synthetic_transform(2.0, 1, 0.5, 1) == 1.0);
  CHECK(synthetic_transform(2.0, 1, 0.5, 2) == 0.5);
  CHECK(code_of([] { synthetic_transform(0.0, 1, 0.5, 1); }) == ErrorCode::NonPositiveResponse);
  CHECK(code_of([] { synthetic_transform(2.0, 1, 0.0, 1); }) == ErrorCode::ZeroSurvivalMass);
}

TEST_CASE("rbar with one observation and with full censoring")
{
  const auto one = SurvivalCurve::constant(1.0);
  const CensoredDataset single({ { 0.7, 2.0, 1 } });
  CHECK(rbar_ell(single, 0.7, 1.0, gauss, one, 1) == doctest::Approx(0.5 * inv_sqrt_2pi).epsilon(1e-15));
  const CensoredDataset censored({ { 0.0, 1.0, 0 }, { 1.0, 2.0, 0 } });
  CHECK(rbar_ell(censored, 0.5, 1.0, gauss, one, 1) == 0.0);
  CHECK(rbar_ell(censored, 0.5, 1.0, gauss, one, 2) == 0.0);
}

TEST_CASE("density estimate")
{
  const CensoredDataset single({ { 1.2, 2.0, 0 } });
  CHECK(density_estimate(single, 1.2, 0.4, gauss) == doctest::Approx(inv_sqrt_2pi / 0.4));
  CHECK(density_estimate(single, 50.0, 0.4, epan) == 0.0);
  CHECK(code_of([&] { density_estimate(single, 0.0, 0.0, gauss); }) == ErrorCode::NonPositiveBandwidth);

  std::mt19937_64 gen(2);
  const auto d = oracle::random_dataset(gen);
  double integral = 0.0;
  const double step = 0.001;
  for (double x = -10.0; x <= 15.0; x += step)
    integral += density_estimate(d, x, 0.3, gauss) * step;
  CHECK(std::abs(integral - 1.0) < 1e-3);
}

TEST_CASE("relative-error estimator identities")
{
  const auto one = SurvivalCurve::constant(1.0);
  std::vector<Observation> obs;
  for (int i = 0; i < 20; ++i)
    obs.push_back({ 0.1 * i, 3.5, 1 });
  const CensoredDataset flat(obs);
  for (double x0 : { 0.0, 0.9, 1.9 })
    CHECK(rel_error_regression(flat, x0, 0.3, gauss, one) == doctest::Approx(3.5).epsilon(1e-15));

  const CensoredDataset single({ { 1.0, 4.25, 1 } });
  CHECK(rel_error_regression(single, 1.3, 0.5, gauss, one) == doctest::Approx(4.25).epsilon(1e-15));
  CHECK(classical_censored_regression(single, 1.3, 0.5, gauss, one) == doctest::Approx(4.25).epsilon(1e-15));

  const CensoredDataset censored({ { 0.0, 1.0, 0 }, { 1.0, 2.0, 0 } });
  CHECK(code_of([&] { rel_error_regression(censored, 0.5, 1.0, gauss, one); }) ==
        ErrorCode::DegenerateDenominator);
  CHECK(code_of([&] { classical_censored_regression(single, 9.0, 0.5, epan, one); }) ==
        ErrorCode::DegenerateDenominator);
}

TEST_CASE("estimators reduce to the uncensored forms when nothing is censored")
{
  const auto one = SurvivalCurve::constant(1.0);
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> u(0.5, 6.0);
  std::vector<Observation> obs;
  std::vector<double> xs, ts;
  for (int i = 0; i < 30; ++i) {
    obs.push_back({ u(gen), u(gen), 1 });
    xs.push_back(obs.back().x);
    ts.push_back(obs.back().y);
  }
  const CensoredDataset d(obs);
  for (double x0 : { 1.0, 2.0, 3.0 }) {
    long double a = 0, b = 0;
    for (const auto& o : d) {
      const long double k = oracle::weight(KernelFamily::Gaussian, x0, o.x, 0.5);
      a += k / o.y;
      b += k / (static_cast<long double>(o.y) * o.y);
    }
    CHECK(oracle::rel_diff(rel_error_regression(d, x0, 0.5, gauss, one), a / b) < 1e-13);
    CHECK(oracle::rel_diff(classical_censored_regression(d, x0, 0.5, gauss, one),
                           nw_complete(xs, ts, x0, 0.5, gauss)) < 1e-13);
  }
}

TEST_CASE("scale equivariance")
{
  const auto one = SurvivalCurve::constant(1.0);
  std::mt19937_64 gen(4);
  for (int rep = 0; rep < 50; ++rep) {
    const auto d = oracle::random_dataset(gen);
    std::vector<Observation> scaled(d.begin(), d.end());
    for (auto& o : scaled)
      o.y *= 3.0;
    try {
      const double r = rel_error_regression(d, 2.5, 1.0, gauss, one);
      CHECK(rel_error_regression(CensoredDataset(scaled), 2.5, 1.0, gauss, one) ==
            doctest::Approx(3.0 * r).epsilon(1e-13));
    } catch (const Error&) {
    }
  }
}

TEST_CASE("complete-data Nadaraya-Watson")
{
  const std::vector<double> x{ 0.0, 1.0, 2.0, 3.0, 4.0 };
  const std::vector<double> t{ 1.0, 3.0, 2.0, 8.0, 5.0 };
  // empty window: weights fall back to 1/n
  CHECK(nw_complete(x, t, 100.0, 0.5, epan) == doctest::Approx(3.8));
  const std::vector<double> same(5, 7.0);
  CHECK(nw_complete(x, same, 1.3, 0.7, gauss) == doctest::Approx(7.0));
  long double num = 0, den = 0;
  for (std::size_t i = 0; i < 5; ++i) {
    const long double k = oracle::weight(KernelFamily::Gaussian, 1.7, x[i], 0.8);
    num += k * t[i];
    den += k;
  }
  CHECK(oracle::rel_diff(nw_complete(x, t, 1.7, 0.8, gauss), num / den) < 1e-13);
}

TEST_CASE("ten-point dataset matches the direct formulas")
{
  std::mt19937_64 gen(10);
  std::uniform_real_distribution<double> ux(0.0, 5.0), uy(0.5, 9.0);
  std::vector<Observation> obs;
  for (int i = 0; i < 10; ++i)
    obs.push_back({ ux(gen), uy(gen), i % 3 == 0 ? 0 : 1 });
  const CensoredDataset d(obs);
  const auto gbar = SurvivalCurve::step(kaplan_meier_censoring(d));
  for (double x0 : { 1.0, 2.0, 3.0 }) {
    const auto s = oracle::sums(d, x0, 0.8, KernelFamily::Gaussian);
    CHECK(oracle::rel_diff(rel_error_regression(d, x0, 0.8, gauss, gbar), s.inv1 / s.inv2) < 1e-12);
    CHECK(oracle::rel_diff(classical_censored_regression(d, x0, 0.8, gauss, gbar), s.syn / s.k) < 1e-12);
  }
}

TEST_CASE("library matches the naive oracles on random datasets")
{
  const auto rep = checks::estimator_equivalence(200, 101);
  CHECK(rep.compared > 1000);
  CHECK(rep.mismatched_definedness == 0);
  CHECK(rep.worst < 1e-12);
}

TEST_CASE("matched-weights ratio never exceeds the matched-weights mean")
{
  const auto rep = checks::park_stefanski(200, 202);
  CHECK(rep.points > 500);
  CHECK(rep.violations == 0);
}

TEST_CASE("zero survival at the largest uncensored time uses the last positive level")
{
  const CensoredDataset d({ { 1.0, 1.0, 0 }, { 1.0, 2.0, 1 }, { 1.0, 3.0, 1 } });
  const auto gbar = SurvivalCurve::step(kaplan_meier_censoring(d));
  CHECK(gbar(3.0) == 0.0);
  CHECK(gbar.positive_floor() == doctest::Approx(2.0 / 3.0));
  const SyntheticSample s(d, gbar);
  CHECK(s.gbar(2) == doctest::Approx(2.0 / 3.0));
  const double r = rel_error_regression(d, 1.0, 1.0, gauss, gbar);
  CHECK(std::isfinite(r));
}

TEST_CASE("non-positive uncensored response is rejected")
{
  const CensoredDataset d({ { 1.0, -1.0, 1 }, { 1.0, 2.0, 1 } });
  CHECK(code_of([&] { rel_error_regression(d, 1.0, 1.0, gauss, SurvivalCurve::constant()); }) ==
        ErrorCode::NonPositiveResponse);
  // a censored non-positive row is harmless
  const CensoredDataset ok({ { 1.0, -1.0, 0 }, { 1.0, 2.0, 1 } });
  CHECK(rel_error_regression(ok, 1.0, 1.0, gauss, SurvivalCurve::constant()) == doctest::Approx(2.0));
}

TEST_CASE("curve estimation records undefined points without stopping")
{
  const CensoredDataset d({ { 0.0, 2.0, 1 }, { 0.1, 2.2, 1 }, { 5.0, 3.0, 0 }, { 5.1, 9.0, 1 } });
  const std::vector<double> grid{ 0.0, 2.5, 5.05 };
  const auto c = estimate_curve(d, grid, 0.3, epan, EstimatorKind::relative_error());
  CHECK(c.defined[0]);
  CHECK_FALSE(c.defined[1]);
  CHECK(std::isnan(c.values[1]));
  CHECK(c.errors[1].find("DegenerateDenominator") != std::string::npos);
  CHECK(c.defined[2]);

  const std::vector<double> one{ 0.05 };
  const auto single = estimate_curve(d, one, 0.3, epan, EstimatorKind::relative_error());
  const auto gbar = SurvivalCurve::step(kaplan_meier_censoring(d));
  CHECK(single.values[0] == rel_error_regression(d, 0.05, 0.3, epan, gbar));
}

TEST_CASE("grid construction")
{
  const auto g = make_grid(1.0, 4.0, 101);
  REQUIRE(g.size() == 101);
  CHECK(g.front() == 1.0);
  CHECK(g.back() == 4.0);
  CHECK(g[50] == doctest::Approx(2.5));
}

TEST_CASE("pseudo and feasible estimators get closer as n grows")
{
  auto cfg = SimConfig::linear_default();
  const auto grid = make_grid(1.0, 4.0, 31);
  cfg.n = 100;
  const double small = mean_sup_pseudo_gap(cfg, grid, 20, 77);
  cfg.n = 1600;
  const double large = mean_sup_pseudo_gap(cfg, grid, 20, 77);
  CHECK(large < small);
}
