#include "relreg/survival.hpp"
#include "relreg/error.hpp"
#include "relreg/normal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace relreg {

double
eval_step(const StepFunction& s, double t)
{
  const auto it = std::upper_bound(s.jump_times.begin(), s.jump_times.end(), t);
  if (it == s.jump_times.begin())
    return s.initial_value;
  return s.values[static_cast<std::size_t>(it - s.jump_times.begin()) - 1];
}

StepFunction
kaplan_meier_censoring(const CensoredDataset& dataset)
{
  const std::size_t n = dataset.size();
  if (n == 0)
    throw Error(ErrorCode::EmptyDataset, "Kaplan-Meier needs observations");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{ 0 });
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& oa = dataset[a];
    const auto& ob = dataset[b];
    if (oa.y != ob.y)
      return oa.y < ob.y;
    return oa.delta > ob.delta;
  });

  StepFunction s;
  double value = 1.0;
  double recorded = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& obs = dataset[order[i]];
    const double at_risk = static_cast<double>(n - i);
    if (obs.delta == 0)
      value = value * (at_risk - 1.0) / at_risk;
    const bool group_end = i + 1 == n || dataset[order[i + 1]].y != obs.y;
    if (group_end && value != recorded) {
      s.jump_times.push_back(obs.y);
      s.values.push_back(value);
      recorded = value;
    }
  }

  const double y_max = dataset[order.back()].y;
  if (!s.jump_times.empty() && s.jump_times.back() == y_max) {
    s.values.back() = 0.0;
  } else {
    s.jump_times.push_back(y_max);
    s.values.push_back(0.0);
  }
  return s;
}

SurvivalCurve
SurvivalCurve::step(StepFunction s)
{
  SurvivalCurve c;
  c.kind_ = Kind::Step;
  double floor = s.initial_value;
  for (double v : s.values)
    if (v > 0.0)
      floor = std::min(floor, v);
  c.floor_ = floor > 0.0 ? floor : 0.0;
  c.step_ = std::make_shared<const StepFunction>(std::move(s));
  return c;
}

SurvivalCurve
SurvivalCurve::normal(double mu, double sigma)
{
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw Error(ErrorCode::NonPositiveSigma, "normal law needs sigma > 0");
  SurvivalCurve c;
  c.kind_ = Kind::Normal;
  c.a_ = mu;
  c.b_ = sigma;
  return c;
}

SurvivalCurve
SurvivalCurve::exponential(double rate)
{
  if (!(rate > 0.0) || !std::isfinite(rate))
    throw Error(ErrorCode::NonPositiveRate, "exponential law needs rate > 0");
  SurvivalCurve c;
  c.kind_ = Kind::Exponential;
  c.a_ = rate;
  return c;
}

SurvivalCurve
SurvivalCurve::constant(double value)
{
  SurvivalCurve c;
  c.kind_ = Kind::Constant;
  c.a_ = value;
  return c;
}

double
SurvivalCurve::operator()(double t) const
{
  switch (kind_) {
    case Kind::Step:
      return eval_step(*step_, t);
    case Kind::Normal:
      if (t == -INFINITY)
        return 1.0;
      return normal_sf((t - a_) / b_);
    case Kind::Exponential:
      return t <= 0.0 ? 1.0 : std::exp(-a_ * t);
    case Kind::Constant:
      return a_;
  }
  return 0.0;
}

SurvivalCurve
true_survival_normal(double mu, double sigma)
{
  return SurvivalCurve::normal(mu, sigma);
}

} // namespace relreg
