#include "relreg/estimators.hpp"
#include "relreg/error.hpp"
#include "relreg/summation.hpp"

#include <cmath>
#include <limits>

namespace relreg {

namespace {

void
require_bandwidth(double h)
{
  if (!(h > 0.0) || !std::isfinite(h))
    throw Error(ErrorCode::NonPositiveBandwidth, "bandwidth must be positive");
}

} // namespace

double
synthetic_transform(double y, int delta, double gbar_at_y, int ell)
{
  if (delta == 0)
    return 0.0;
  if (!(y > 0.0))
    throw Error(ErrorCode::NonPositiveResponse,
                "uncensored response must be positive, got " + std::to_string(y));
  if (!(gbar_at_y > 0.0))
    throw Error(ErrorCode::ZeroSurvivalMass,
                "censoring survival is zero at uncensored time " +
                  std::to_string(y));
  return std::pow(y, -ell) / gbar_at_y;
}

SyntheticSample::SyntheticSample(const CensoredDataset& dataset,
                                 const SurvivalCurve& gbar)
{
  const std::size_t n = dataset.size();
  x_.reserve(n);
  y_.reserve(n);
  delta_.reserve(n);
  gbar_.reserve(n);
  for (const auto& obs : dataset) {
    double g = gbar(obs.y);
    if (obs.delta == 1) {
      if (!(obs.y > 0.0))
        throw Error(ErrorCode::NonPositiveResponse,
                    "uncensored response must be positive, got " +
                      std::to_string(obs.y));
      if (!(g > 0.0))
        g = gbar.positive_floor();
      if (!(g > 0.0))
        throw Error(ErrorCode::ZeroSurvivalMass,
                    "censoring survival is zero at uncensored time " +
                      std::to_string(obs.y));
    }
    x_.push_back(obs.x);
    y_.push_back(obs.y);
    delta_.push_back(obs.delta);
    gbar_.push_back(g);
  }
}

LocalSums
local_sums(const SyntheticSample& sample, double x0, double h, KernelSpec k)
{
  require_bandwidth(h);
  CompensatedSum kernel;
  CompensatedSum inv1;
  CompensatedSum inv2;
  CompensatedSum synth;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double w = eval_kernel(k, (x0 - sample.x(i)) / h);
    if (w == 0.0)
      continue;
    kernel += w;
    if (sample.delta(i) == 0)
      continue;
    const double y = sample.y(i);
    const double wg = w / sample.gbar(i);
    inv1 += wg / y;
    inv2 += wg / (y * y);
    synth += wg * y;
  }
  return { kernel.value(), inv1.value(), inv2.value(), synth.value() };
}

double
rbar_ell(const SyntheticSample& sample,
         double x0,
         double h,
         KernelSpec k,
         int ell)
{
  if (ell != 1 && ell != 2)
    throw Error(ErrorCode::InvalidArgument, "ell must be 1 or 2");
  const auto sums = local_sums(sample, x0, h, k);
  const double scale = static_cast<double>(sample.size()) * h;
  return (ell == 1 ? sums.inverse1 : sums.inverse2) / scale;
}

double
rbar_ell(const CensoredDataset& dataset,
         double x0,
         double h,
         KernelSpec k,
         const SurvivalCurve& gbar,
         int ell)
{
  return rbar_ell(SyntheticSample(dataset, gbar), x0, h, k, ell);
}

double
density_estimate(const CensoredDataset& dataset,
                 double x0,
                 double h,
                 KernelSpec k)
{
  require_bandwidth(h);
  CompensatedSum s;
  for (const auto& obs : dataset)
    s += eval_kernel(k, (x0 - obs.x) / h);
  return s.value() / (static_cast<double>(dataset.size()) * h);
}

double
rel_error_regression(const SyntheticSample& sample,
                     double x0,
                     double h,
                     KernelSpec k)
{
  const auto sums = local_sums(sample, x0, h, k);
  if (!(sums.inverse2 > 0.0))
    throw Error(ErrorCode::DegenerateDenominator,
                "no uncensored kernel mass at x = " + std::to_string(x0));
  return sums.inverse1 / sums.inverse2;
}

double
rel_error_regression(const CensoredDataset& dataset,
                     double x0,
                     double h,
                     KernelSpec k,
                     const SurvivalCurve& gbar)
{
  return rel_error_regression(SyntheticSample(dataset, gbar), x0, h, k);
}

double
classical_censored_regression(const SyntheticSample& sample,
                              double x0,
                              double h,
                              KernelSpec k)
{
  const auto sums = local_sums(sample, x0, h, k);
  if (!(sums.kernel > 0.0))
    throw Error(ErrorCode::DegenerateDenominator,
                "no kernel mass at x = " + std::to_string(x0));
  return sums.synthetic / sums.kernel;
}

double
classical_censored_regression(const CensoredDataset& dataset,
                              double x0,
                              double h,
                              KernelSpec k,
                              const SurvivalCurve& gbar)
{
  return classical_censored_regression(SyntheticSample(dataset, gbar), x0, h, k);
}

double
nw_complete(std::span<const double> x,
            std::span<const double> t,
            double x0,
            double h,
            KernelSpec k)
{
  require_bandwidth(h);
  if (x.size() != t.size() || x.empty())
    throw Error(ErrorCode::InvalidArgument,
                "covariates and responses must be non-empty and equally long");
  CompensatedSum weights;
  CompensatedSum weighted;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = eval_kernel(k, (x0 - x[i]) / h);
    weights += w;
    weighted += w * t[i];
  }
  if (weights.value() != 0.0)
    return weighted.value() / weights.value();
  CompensatedSum mean;
  for (double v : t)
    mean += v;
  return mean.value() / static_cast<double>(t.size());
}

std::vector<double>
make_grid(double a, double b, std::size_t points)
{
  if (points == 0)
    throw Error(ErrorCode::InvalidArgument, "grid needs at least one point");
  if (!std::isfinite(a) || !std::isfinite(b))
    throw Error(ErrorCode::InvalidArgument, "grid bounds must be finite");
  std::vector<double> grid(points);
  if (points == 1) {
    grid[0] = a;
    return grid;
  }
  const double step = (b - a) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i)
    grid[i] = a + step * static_cast<double>(i);
  grid.back() = b;
  return grid;
}

CurveEstimate
estimate_curve(const CensoredDataset& dataset,
               std::span<const double> grid,
               double h,
               KernelSpec k,
               const EstimatorKind& kind)
{
  if (grid.empty())
    throw Error(ErrorCode::InvalidArgument, "evaluation grid is empty");
  require_bandwidth(h);

  CurveEstimate out;
  out.grid.assign(grid.begin(), grid.end());
  out.values.assign(grid.size(), std::numeric_limits<double>::quiet_NaN());
  out.defined.assign(grid.size(), false);
  out.errors.assign(grid.size(), std::string());

  std::optional<SyntheticSample> sample;
  std::vector<double> xs;
  std::vector<double> ts;
  try {
    switch (kind.tag) {
      case EstimatorKindTag::RelativeError:
      case EstimatorKindTag::ClassicalCensored:
        sample.emplace(dataset,
                       SurvivalCurve::step(kaplan_meier_censoring(dataset)));
        break;
      case EstimatorKindTag::PseudoRelativeError:
        if (!kind.survival)
          throw Error(ErrorCode::InvalidArgument,
                      "pseudo-estimator needs a known survival curve");
        sample.emplace(dataset, *kind.survival);
        break;
      case EstimatorKindTag::CompleteNW:
        for (const auto& obs : dataset) {
          xs.push_back(obs.x);
          ts.push_back(obs.y);
        }
        break;
    }
  } catch (const Error& e) {
    // a dataset-level failure makes every point undefined
    out.errors.assign(grid.size(), e.what());
    return out;
  }

  for (std::size_t g = 0; g < grid.size(); ++g) {
    try {
      double v = 0.0;
      switch (kind.tag) {
        case EstimatorKindTag::RelativeError:
        case EstimatorKindTag::PseudoRelativeError:
          v = rel_error_regression(*sample, grid[g], h, k);
          break;
        case EstimatorKindTag::ClassicalCensored:
          v = classical_censored_regression(*sample, grid[g], h, k);
          break;
        case EstimatorKindTag::CompleteNW:
          v = nw_complete(xs, ts, grid[g], h, k);
          break;
      }
      out.values[g] = v;
      out.defined[g] = true;
    } catch (const Error& e) {
      out.errors[g] = e.what();
    }
  }
  return out;
}

} // namespace relreg
