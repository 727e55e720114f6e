#pragma once

#include "relreg/data.hpp"

#include <memory>
#include <variant>
#include <vector>

namespace relreg {

//! Right-continuous, non-increasing step function with values in [0, 1].
//! values[k] holds on [jump_times[k], jump_times[k+1]); initial_value holds
//! below the first jump.
struct StepFunction
{
  std::vector<double> jump_times;
  std::vector<double> values;
  double initial_value = 1.0;
};

double eval_step(const StepFunction& s, double t);

//! Kaplan-Meier estimate of the censoring survival P(C > t): product over
//! the order statistics Y_(i) <= t of (1 - (1 - delta_(i)) / (n - i + 1)),
//! and exactly zero for t >= Y_(n). At tied times uncensored rows are
//! ordered before censored ones.
StepFunction kaplan_meier_censoring(const CensoredDataset& dataset);

//! Read-only survival curve t -> P(C > t), either estimated (step function)
//! or a known parametric law. Cheap to copy and safe to share across threads.
class SurvivalCurve
{
public:
  static SurvivalCurve step(StepFunction s);
  static SurvivalCurve normal(double mu, double sigma);
  static SurvivalCurve exponential(double rate);
  static SurvivalCurve constant(double value = 1.0);

  double operator()(double t) const;

  //! Value to use in place of a zero survival at an uncensored time: the
  //! last strictly positive level of a step function, 0 for parametric laws.
  double positive_floor() const noexcept { return floor_; }

  const StepFunction* as_step() const noexcept { return step_.get(); }

private:
  enum class Kind
  {
    Step,
    Normal,
    Exponential,
    Constant
  };

  Kind kind_ = Kind::Constant;
  std::shared_ptr<const StepFunction> step_;
  double a_ = 1.0;
  double b_ = 0.0;
  double floor_ = 0.0;
};

//! Exact survival 1 - Phi((t - mu) / sigma) of a normal censoring law.
SurvivalCurve true_survival_normal(double mu, double sigma);

} // namespace relreg
