#pragma once

#include "relreg/data.hpp"

#include <string>
#include <variant>
#include <vector>

namespace relreg {

enum class KernelFamily
{
  Gaussian,
  Epanechnikov
};

struct KernelSpec
{
  KernelFamily family = KernelFamily::Gaussian;
};

KernelSpec parse_kernel(const std::string& name);
std::string to_string(KernelFamily family);

//! h = c * (ln n / n)^exponent
struct PaperRule
{
  double c = 0.55;
  double exponent = 0.33;
};

struct FixedBandwidth
{
  double h;
};

using BandwidthSpec = std::variant<PaperRule, FixedBandwidth>;

double eval_kernel(KernelSpec k, double u);

//! Resolves a bandwidth for sample size n; the rule needs n >= 2.
double resolve_bandwidth(const BandwidthSpec& spec, std::size_t n);

//! K((x0 - X_i) / h) for every observation, in dataset order.
std::vector<double> kernel_weights(double x0,
                                   const CensoredDataset& dataset,
                                   double h,
                                   KernelSpec k);

//! Integral of K^2.
double kappa(KernelSpec k);

} // namespace relreg
