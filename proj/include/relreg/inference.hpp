#pragma once

#include "relreg/data.hpp"
#include "relreg/estimators.hpp"
#include "relreg/kernel.hpp"
#include "relreg/normal.hpp"
#include "relreg/survival.hpp"

#include <span>
#include <string>
#include <vector>

namespace relreg {

//! Plug-in form for the Upsilon_k(x) variance ingredients.
//!
//! Corrected: (1/(n h)) sum delta_i Y_i^-k / G(Y_i)^2 K_i, which is
//! consistent for the integral of t^-k / G(t) f_{T,X}(t, x) dt.
//! Printed: (1/(n h)) sum Y_i^-k / G(Y_i) K_i over all rows, kept so that
//! the literal published plug-in can be reproduced.
enum class UpsilonForm
{
  Corrected,
  Printed
};

UpsilonForm parse_upsilon_form(const std::string& name);
std::string to_string(UpsilonForm form);

double upsilon_hat(const CensoredDataset& dataset,
                   double x0,
                   double h,
                   KernelSpec k,
                   const SurvivalCurve& gbar,
                   int order,
                   UpsilonForm form = UpsilonForm::Corrected);

struct VarianceComponents
{
  double upsilon2 = 0.0;
  double upsilon3 = 0.0;
  double upsilon4 = 0.0;
  double rbar1 = 0.0;
  double rbar2 = 0.0;
  double kappa = 0.0;
  double sigma2_raw = 0.0;  //!< quadratic form as assembled, may be slightly < 0
  double sigma2 = 0.0;      //!< max(sigma2_raw, 0)
};

//! sigma^2(x) = kappa (U2 rb2^2 - 2 U3 rb1 rb2 + U4 rb1^2) / rb2^4 with the
//! scaled sums rb_ell = (1/(n h)) sum delta Y^-ell / G(Y) K. Throws
//! DegenerateDenominator when rb2 = 0.
VarianceComponents sigma2_hat(const CensoredDataset& dataset,
                              double x0,
                              double h,
                              KernelSpec k,
                              const SurvivalCurve& gbar,
                              UpsilonForm form = UpsilonForm::Corrected);

struct ConfidenceBand
{
  std::vector<double> grid;
  std::vector<double> estimate;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> sigma2;
  std::vector<bool> defined;
  std::vector<std::string> errors;
  double level = 0.95;
  std::size_t n = 0;
  double h = 0.0;
};

//! Pointwise intervals r_n(x) +- z_{1 - zeta/2} sigma_n(x) / sqrt(n h) with
//! level = 1 - zeta. Points where the estimate or variance is undefined are
//! flagged and carry NaN.
ConfidenceBand confidence_band(const CensoredDataset& dataset,
                               std::span<const double> grid,
                               double h,
                               KernelSpec k,
                               const SurvivalCurve& gbar,
                               double level,
                               UpsilonForm form = UpsilonForm::Corrected);

} // namespace relreg
