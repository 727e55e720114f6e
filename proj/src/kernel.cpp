#include "relreg/kernel.hpp"
#include "relreg/error.hpp"

#include <cmath>
#include <numbers>

namespace relreg {

namespace {
constexpr double inv_sqrt_2pi = 0.398942280401432677939946059934;
}

KernelSpec
parse_kernel(const std::string& name)
{
  if (name == "gaussian")
    return { KernelFamily::Gaussian };
  if (name == "epanechnikov")
    return { KernelFamily::Epanechnikov };
  throw Error(ErrorCode::InvalidArgument, "unknown kernel '" + name + "'");
}

std::string
to_string(KernelFamily family)
{
  return family == KernelFamily::Gaussian ? "gaussian" : "epanechnikov";
}

double
eval_kernel(KernelSpec k, double u)
{
  switch (k.family) {
    case KernelFamily::Gaussian:
      return inv_sqrt_2pi * std::exp(-0.5 * u * u);
    case KernelFamily::Epanechnikov:
      return std::abs(u) <= 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
  }
  return 0.0;
}

double
resolve_bandwidth(const BandwidthSpec& spec, std::size_t n)
{
  if (const auto* fixed = std::get_if<FixedBandwidth>(&spec)) {
    if (!(fixed->h > 0.0) || !std::isfinite(fixed->h))
      throw Error(ErrorCode::NonPositiveBandwidth,
                  "bandwidth must be positive");
    return fixed->h;
  }
  const auto& rule = std::get<PaperRule>(spec);
  if (n < 2)
    throw Error(ErrorCode::InvalidSampleSize,
                "bandwidth rule needs n >= 2, got " + std::to_string(n));
  const double nn = static_cast<double>(n);
  const double h = rule.c * std::pow(std::log(nn) / nn, rule.exponent);
  if (!(h > 0.0) || !std::isfinite(h))
    throw Error(ErrorCode::NonPositiveBandwidth,
                "bandwidth rule produced a non-positive value");
  return h;
}

std::vector<double>
kernel_weights(double x0, const CensoredDataset& dataset, double h, KernelSpec k)
{
  if (!(h > 0.0))
    throw Error(ErrorCode::NonPositiveBandwidth, "bandwidth must be positive");
  std::vector<double> w;
  w.reserve(dataset.size());
  for (const auto& obs : dataset)
    w.push_back(eval_kernel(k, (x0 - obs.x) / h));
  return w;
}

double
kappa(KernelSpec k)
{
  switch (k.family) {
    case KernelFamily::Gaussian:
      return 0.5 * std::numbers::inv_sqrtpi;
    case KernelFamily::Epanechnikov:
      return 0.6;
  }
  return 0.0;
}

} // namespace relreg
