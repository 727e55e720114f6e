#include "checks.hpp"
#include "oracles.hpp"

#include "relreg/error.hpp"
#include "relreg/inference.hpp"
#include "relreg/normal.hpp"

#include <doctest.h>

#include <boost/math/distributions/normal.hpp>

#include <cmath>
#include <random>

using namespace relreg;

namespace {

const KernelSpec gauss{ KernelFamily::Gaussian };

} // namespace

TEST_CASE("upsilon with one observation and with full censoring")
{
  const auto one = SurvivalCurve::constant(1.0);
  const CensoredDataset single({ { 0.4, 2.0, 1 } });
  CHECK(upsilon_hat(single, 0.4, 1.0, gauss, one, 2) ==
        doctest::Approx(0.25 * 0.3989422804014327).epsilon(1e-15));
  const CensoredDataset censored({ { 0.0, 1.0, 0 }, { 1.0, 2.0, 0 } });
  for (int ord = 2; ord <= 4; ++ord)
    CHECK(upsilon_hat(censored, 0.5, 1.0, gauss, SurvivalCurve::constant(0.5), ord) == 0.0);
  CHECK_THROWS_AS(upsilon_hat(single, 0.4, 1.0, gauss, one, 5), Error);
}

TEST_CASE("upsilon of order two equals rbar_2 without censoring")
{
  const auto one = SurvivalCurve::constant(1.0);
  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> u(0.5, 5.0);
  std::vector<Observation> obs;
  for (int i = 0; i < 25; ++i)
    obs.push_back({ u(gen), u(gen), 1 });
  const CensoredDataset d(obs);
  for (double x0 : { 1.0, 2.0, 4.0 })
    CHECK(upsilon_hat(d, x0, 0.6, gauss, one, 2) ==
          doctest::Approx(rbar_ell(d, x0, 0.6, gauss, one, 2)).epsilon(1e-14));
}

TEST_CASE("printed upsilon form sums over every row with one survival power")
{
  const CensoredDataset d({ { 1.0, 2.0, 1 }, { 1.5, 3.0, 0 }, { 2.0, 4.0, 1 } });
  const auto g = SurvivalCurve::constant(0.5);
  long double ref = 0;
  for (const auto& o : d)
    ref += oracle::weight(KernelFamily::Gaussian, 1.2, o.x, 0.7) /
           (std::pow(static_cast<long double>(o.y), 3.0L) * 0.5L);
  ref /= 3.0L * 0.7L;
  CHECK(oracle::rel_diff(upsilon_hat(d, 1.2, 0.7, gauss, g, 3, UpsilonForm::Printed), ref) < 1e-13);
  CHECK(parse_upsilon_form("paper") == UpsilonForm::Printed);
  CHECK(parse_upsilon_form("corrected") == UpsilonForm::Corrected);
  CHECK_THROWS_AS(parse_upsilon_form("other"), Error);
}

TEST_CASE("constant response has zero variance")
{
  std::vector<Observation> obs;
  for (int i = 0; i < 15; ++i)
    obs.push_back({ 0.2 * i, 2.5, 1 });
  const CensoredDataset d(obs);
  const auto vc = sigma2_hat(d, 1.4, 0.5, gauss, SurvivalCurve::constant(1.0));
  CHECK(std::abs(vc.sigma2_raw) < 1e-12);
  CHECK(vc.sigma2 >= 0.0);
  CHECK(vc.kappa == kappa(gauss));
}

TEST_CASE("variance equals the weighted quadratic form")
{
  std::mt19937_64 gen(31);
  for (int rep = 0; rep < 100; ++rep) {
    const auto d = oracle::random_dataset(gen);
    const auto gbar = SurvivalCurve::step(kaplan_meier_censoring(d));
    const double h = 0.9;
    const double x0 = 2.5;
    const auto s = oracle::sums(d, x0, h, KernelFamily::Gaussian);
    if (!(s.inv2 > 0)) {
      CHECK_THROWS_AS(sigma2_hat(d, x0, h, gauss, gbar), Error);
      continue;
    }
    const long double nh = static_cast<long double>(d.size()) * h;
    const long double r1 = s.inv1 / nh, r2 = s.inv2 / nh;
    // kappa * sum v_i (r2 / y_i - r1 / y_i^2)^2 with v_i = delta K / (n h G^2)
    long double q = 0;
    for (const auto& o : d) {
      if (o.delta == 0)
        continue;
      const long double g = oracle::km_guarded(d, o.y);
      const long double v = oracle::weight(KernelFamily::Gaussian, x0, o.x, h) / (nh * g * g);
      const long double y = o.y;
      const long double e = r2 / y - r1 / (y * y);
      q += v * e * e;
    }
    const long double expected = kappa(gauss) * q / (r2 * r2 * r2 * r2);
    const auto vc = sigma2_hat(d, x0, h, gauss, gbar);
    CHECK(std::abs(vc.sigma2 - static_cast<double>(expected)) <=
          1e-10 * std::max(1.0, static_cast<double>(expected)));
  }
}

TEST_CASE("variance quadratic form is nonnegative on random datasets")
{
  const auto rep = checks::variance_sign(200, 303);
  CHECK(rep.points > 500);
  CHECK(rep.below == 0);
}

TEST_CASE("degenerate variance")
{
  const CensoredDataset censored({ { 0.0, 1.0, 0 }, { 1.0, 2.0, 0 } });
  try {
    sigma2_hat(censored, 0.5, 1.0, gauss, SurvivalCurve::constant());
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateDenominator);
  }
}

TEST_CASE("normal quantile")
{
  CHECK(normal_quantile(0.5) == 0.0);
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963985).epsilon(1e-9));
  CHECK(normal_quantile(0.995) == doctest::Approx(2.575829304).epsilon(1e-9));
  const boost::math::normal_distribution<double> z;
  double worst = 0.0;
  for (double lp = -8.0; lp < 0.0; lp += 0.01) {
    const double p = std::pow(10.0, lp);
    worst = std::max(worst, std::abs(normal_quantile(p) - boost::math::quantile(z, p)));
    worst = std::max(worst, std::abs(normal_quantile(1.0 - p) - boost::math::quantile(z, 1.0 - p)));
    CHECK(std::abs(normal_quantile(p) + normal_quantile(1.0 - p)) < 1e-9);
  }
  CHECK(worst < 1e-9);
  for (double p : { 0.0, 1.0, -0.1, 2.0 })
    CHECK_THROWS_AS(normal_quantile(p), Error);
}

TEST_CASE("normal cdf and survival")
{
  const boost::math::normal_distribution<double> z;
  for (double x = -30.0; x <= 8.0; x += 0.37) {
    CHECK(normal_cdf(x) == doctest::Approx(boost::math::cdf(z, x)).epsilon(1e-13));
    CHECK(normal_sf(-x) == doctest::Approx(boost::math::cdf(boost::math::complement(z, -x))).epsilon(1e-13));
  }
}

TEST_CASE("confidence band ordering and width")
{
  std::mt19937_64 gen(44);
  const auto grid = make_grid(0.5, 4.5, 9);
  for (int rep = 0; rep < 40; ++rep) {
    const auto d = oracle::random_dataset(gen);
    const auto gbar = SurvivalCurve::step(kaplan_meier_censoring(d));
    for (double level : { 0.8, 0.9, 0.95, 0.99 }) {
      const auto b = confidence_band(d, grid, 0.7, gauss, gbar, level);
      const double z = normal_quantile(1.0 - (1.0 - level) / 2.0);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!b.defined[i])
          continue;
        CHECK(b.lower[i] <= b.estimate[i]);
        CHECK(b.estimate[i] <= b.upper[i]);
        const double width = 2.0 * z * std::sqrt(b.sigma2[i]) / std::sqrt(d.size() * 0.7);
        CHECK(b.upper[i] - b.lower[i] == doctest::Approx(width).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("degenerate levels and zero variance collapse the band")
{
  std::vector<Observation> obs;
  for (int i = 0; i < 10; ++i)
    obs.push_back({ 0.3 * i, 4.0, 1 });
  const CensoredDataset flat(obs);
  const std::vector<double> grid{ 1.0, 2.0 };
  const auto b = confidence_band(flat, grid, 0.5, gauss, SurvivalCurve::constant(), 0.95);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(b.lower[i] == doctest::Approx(b.estimate[i]).epsilon(1e-6));
    CHECK(b.upper[i] == doctest::Approx(b.estimate[i]).epsilon(1e-6));
  }

  std::mt19937_64 gen(9);
  const auto d = oracle::random_dataset(gen, 50);
  const auto gbar = SurvivalCurve::step(kaplan_meier_censoring(d));
  const auto zero = confidence_band(d, grid, 1.0, gauss, gbar, 0.0);
  for (std::size_t i = 0; i < 2; ++i)
    if (zero.defined[i]) {
      CHECK(zero.lower[i] == zero.estimate[i]);
      CHECK(zero.upper[i] == zero.estimate[i]);
    }
  CHECK_THROWS_AS(confidence_band(d, grid, 1.0, gauss, gbar, 1.0), Error);
}
