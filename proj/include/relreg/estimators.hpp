#pragma once

#include "relreg/data.hpp"
#include "relreg/kernel.hpp"
#include "relreg/survival.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace relreg {

//! delta * y^-ell / gbar_at_y; censored rows give exactly 0 without dividing.
double synthetic_transform(double y, int delta, double gbar_at_y, int ell);

//! Dataset paired with the censoring survival evaluated at each Y_i.
//!
//! A zero survival at an uncensored Y_i (only possible at the largest
//! observation of a Kaplan-Meier curve) is replaced by the curve's last
//! positive level. Uncensored rows must have y > 0.
class SyntheticSample
{
public:
  SyntheticSample(const CensoredDataset& dataset, const SurvivalCurve& gbar);

  std::size_t size() const noexcept { return x_.size(); }
  double x(std::size_t i) const { return x_[i]; }
  double y(std::size_t i) const { return y_[i]; }
  int delta(std::size_t i) const { return delta_[i]; }
  double gbar(std::size_t i) const { return gbar_[i]; }

private:
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<int> delta_;
  std::vector<double> gbar_;
};

//! Raw (unnormalised) kernel sums at one point, all sharing K((x0-X_i)/h).
struct LocalSums
{
  double kernel = 0.0;       //!< sum K_i
  double inverse1 = 0.0;     //!< sum delta_i Y_i^-1 / G(Y_i) K_i
  double inverse2 = 0.0;     //!< sum delta_i Y_i^-2 / G(Y_i) K_i
  double synthetic = 0.0;    //!< sum delta_i Y_i / G(Y_i) K_i
};

LocalSums local_sums(const SyntheticSample& sample,
                     double x0,
                     double h,
                     KernelSpec k);

//! (1 / (n h)) sum delta_i Y_i^-ell / G(Y_i) K((x0 - X_i) / h), ell in {1, 2}.
double rbar_ell(const SyntheticSample& sample,
                double x0,
                double h,
                KernelSpec k,
                int ell);
double rbar_ell(const CensoredDataset& dataset,
                double x0,
                double h,
                KernelSpec k,
                const SurvivalCurve& gbar,
                int ell);

//! Kernel density estimate of the covariate, (1 / (n h)) sum K_i.
double density_estimate(const CensoredDataset& dataset,
                        double x0,
                        double h,
                        KernelSpec k);

//! Relative-error regression estimate: ratio of the ell = 1 and ell = 2
//! synthetic kernel sums. With a Kaplan-Meier curve this is the feasible
//! estimator; with the true survival it is the pseudo-estimator. Throws
//! DegenerateDenominator when the ell = 2 sum vanishes.
double rel_error_regression(const SyntheticSample& sample,
                            double x0,
                            double h,
                            KernelSpec k);
double rel_error_regression(const CensoredDataset& dataset,
                            double x0,
                            double h,
                            KernelSpec k,
                            const SurvivalCurve& gbar);

//! Classical censored kernel regression: sum delta Y / G(Y) K / sum K.
double classical_censored_regression(const SyntheticSample& sample,
                                     double x0,
                                     double h,
                                     KernelSpec k);
double classical_censored_regression(const CensoredDataset& dataset,
                                     double x0,
                                     double h,
                                     KernelSpec k,
                                     const SurvivalCurve& gbar);

//! Complete-data Nadaraya-Watson mean; falls back to weights 1/n when every
//! kernel weight is zero.
double nw_complete(std::span<const double> x,
                   std::span<const double> t,
                   double x0,
                   double h,
                   KernelSpec k);

enum class EstimatorKindTag
{
  RelativeError,
  ClassicalCensored,
  CompleteNW,
  PseudoRelativeError
};

struct EstimatorKind
{
  EstimatorKindTag tag = EstimatorKindTag::RelativeError;
  //! Known censoring survival, used only by PseudoRelativeError.
  std::optional<SurvivalCurve> survival;

  static EstimatorKind relative_error() { return { EstimatorKindTag::RelativeError, {} }; }
  static EstimatorKind classical() { return { EstimatorKindTag::ClassicalCensored, {} }; }
  static EstimatorKind complete_nw() { return { EstimatorKindTag::CompleteNW, {} }; }
  static EstimatorKind pseudo(SurvivalCurve s) { return { EstimatorKindTag::PseudoRelativeError, std::move(s) }; }
};

struct CurveEstimate
{
  std::vector<double> grid;
  std::vector<double> values;           //!< NaN where undefined
  std::vector<bool> defined;
  std::vector<std::string> errors;      //!< empty string where defined
};

//! Equispaced grid of `points` values from a to b inclusive.
std::vector<double> make_grid(double a, double b, std::size_t points);

//! Applies the selected estimator at every grid point. Per-point failures
//! are recorded, never propagated.
CurveEstimate estimate_curve(const CensoredDataset& dataset,
                             std::span<const double> grid,
                             double h,
                             KernelSpec k,
                             const EstimatorKind& kind);

} // namespace relreg
