#include "relreg/inference.hpp"
#include "relreg/error.hpp"
#include "relreg/summation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace relreg {

UpsilonForm
parse_upsilon_form(const std::string& name)
{
  if (name == "corrected")
    return UpsilonForm::Corrected;
  if (name == "paper")
    return UpsilonForm::Printed;
  throw Error(ErrorCode::InvalidArgument,
              "unknown upsilon form '" + name + "' (corrected|paper)");
}

std::string
to_string(UpsilonForm form)
{
  return form == UpsilonForm::Corrected ? "corrected" : "paper";
}

namespace {

// Upsilon_2..4 at one point, sharing the kernel evaluations.
std::array<double, 3>
upsilon_sums(const CensoredDataset& dataset,
             const SyntheticSample& sample,
             const SurvivalCurve& gbar,
             double x0,
             double h,
             KernelSpec k,
             UpsilonForm form)
{
  if (!(h > 0.0))
    throw Error(ErrorCode::NonPositiveBandwidth, "bandwidth must be positive");
  std::array<CompensatedSum, 3> sums;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double w = eval_kernel(k, (x0 - sample.x(i)) / h);
    if (w == 0.0)
      continue;
    double base = 0.0;
    const double y = sample.y(i);
    if (form == UpsilonForm::Corrected) {
      if (sample.delta(i) == 0)
        continue;
      const double g = sample.gbar(i);
      base = w / (g * g);
    } else {
      if (!(y > 0.0))
        throw Error(ErrorCode::NonPositiveResponse,
                    "printed upsilon form needs every response positive");
      double g = gbar(dataset[i].y);
      if (!(g > 0.0))
        g = gbar.positive_floor();
      if (!(g > 0.0))
        throw Error(ErrorCode::ZeroSurvivalMass,
                    "censoring survival is zero at " + std::to_string(y));
      base = w / g;
    }
    const double y2 = 1.0 / (y * y);
    sums[0] += base * y2;
    sums[1] += base * y2 / y;
    sums[2] += base * y2 * y2;
  }
  const double scale = static_cast<double>(sample.size()) * h;
  return { sums[0].value() / scale, sums[1].value() / scale,
           sums[2].value() / scale };
}

VarianceComponents
assemble(const CensoredDataset& dataset,
         const SyntheticSample& sample,
         const SurvivalCurve& gbar,
         double x0,
         double h,
         KernelSpec k,
         UpsilonForm form)
{
  const auto sums = local_sums(sample, x0, h, k);
  const double scale = static_cast<double>(sample.size()) * h;
  VarianceComponents vc;
  vc.rbar1 = sums.inverse1 / scale;
  vc.rbar2 = sums.inverse2 / scale;
  if (!(vc.rbar2 > 0.0))
    throw Error(ErrorCode::DegenerateDenominator,
                "no uncensored kernel mass at x = " + std::to_string(x0));
  const auto ups = upsilon_sums(dataset, sample, gbar, x0, h, k, form);
  vc.upsilon2 = ups[0];
  vc.upsilon3 = ups[1];
  vc.upsilon4 = ups[2];
  vc.kappa = kappa(k);
  const double r1 = vc.rbar1;
  const double r2 = vc.rbar2;
  const double quad = vc.upsilon2 * r2 * r2 - 2.0 * vc.upsilon3 * r1 * r2 +
                      vc.upsilon4 * r1 * r1;
  const double r2sq = r2 * r2;
  vc.sigma2_raw = vc.kappa * quad / (r2sq * r2sq);
  vc.sigma2 = std::max(vc.sigma2_raw, 0.0);
  return vc;
}

} // namespace

double
upsilon_hat(const CensoredDataset& dataset,
            double x0,
            double h,
            KernelSpec k,
            const SurvivalCurve& gbar,
            int order,
            UpsilonForm form)
{
  if (order < 2 || order > 4)
    throw Error(ErrorCode::InvalidArgument, "upsilon order must be 2, 3 or 4");
  const SyntheticSample sample(dataset, gbar);
  const auto ups = upsilon_sums(dataset, sample, gbar, x0, h, k, form);
  return ups[static_cast<std::size_t>(order - 2)];
}

VarianceComponents
sigma2_hat(const CensoredDataset& dataset,
           double x0,
           double h,
           KernelSpec k,
           const SurvivalCurve& gbar,
           UpsilonForm form)
{
  const SyntheticSample sample(dataset, gbar);
  return assemble(dataset, sample, gbar, x0, h, k, form);
}

ConfidenceBand
confidence_band(const CensoredDataset& dataset,
                std::span<const double> grid,
                double h,
                KernelSpec k,
                const SurvivalCurve& gbar,
                double level,
                UpsilonForm form)
{
  // level 0 is accepted: it is the zero-width band at the median quantile
  if (!(level >= 0.0 && level < 1.0))
    throw Error(ErrorCode::OutOfDomain, "confidence level must lie in [0, 1)");
  if (grid.empty())
    throw Error(ErrorCode::InvalidArgument, "evaluation grid is empty");
  if (!(h > 0.0))
    throw Error(ErrorCode::NonPositiveBandwidth, "bandwidth must be positive");

  const double zeta = 1.0 - level;
  const double z = normal_quantile(1.0 - zeta / 2.0);
  const double root_nh = std::sqrt(static_cast<double>(dataset.size()) * h);
  const double nan = std::numeric_limits<double>::quiet_NaN();

  ConfidenceBand band;
  band.grid.assign(grid.begin(), grid.end());
  band.estimate.assign(grid.size(), nan);
  band.lower.assign(grid.size(), nan);
  band.upper.assign(grid.size(), nan);
  band.sigma2.assign(grid.size(), nan);
  band.defined.assign(grid.size(), false);
  band.errors.assign(grid.size(), std::string());
  band.level = level;
  band.n = dataset.size();
  band.h = h;

  const SyntheticSample sample(dataset, gbar);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    try {
      const auto vc = assemble(dataset, sample, gbar, grid[g], h, k, form);
      const double est = rel_error_regression(sample, grid[g], h, k);
      const double half = z * std::sqrt(vc.sigma2) / root_nh;
      band.estimate[g] = est;
      band.sigma2[g] = vc.sigma2;
      band.lower[g] = est - half;
      band.upper[g] = est + half;
      band.defined[g] = true;
    } catch (const Error& e) {
      band.errors[g] = e.what();
    }
  }
  return band;
}

} // namespace relreg
