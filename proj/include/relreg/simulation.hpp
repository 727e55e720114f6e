#pragma once

#include "relreg/data.hpp"
#include "relreg/inference.hpp"
#include "relreg/kernel.hpp"
#include "relreg/rng.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace relreg {

enum class ModelKind
{
  Linear,          //!< T = alpha X + beta + noise eps
  Parabolic,       //!< T = X^2 + 1 + noise eps
  Sinusoidal,      //!< T = sin(X / 2)^2 + 1 + noise eps
  Exponential,     //!< T = exp(X / 2) + noise eps
  NormalityLinear  //!< T = alpha X + beta + noise eps, exponential design
};

struct Model
{
  ModelKind kind = ModelKind::Linear;
  double alpha = 2.0;
  double beta = 1.0;
  double noise = 0.2;

  //! Noise-free regression curve x -> T - noise eps.
  double mean_response(double x) const;
  TrueCurve true_curve() const;
};

enum class LawKind
{
  Normal,       //!< a = mean, b = sigma
  Exponential,  //!< a = rate
  Fixed         //!< a = value (degenerate design)
};

struct Law
{
  LawKind kind = LawKind::Normal;
  double a = 0.0;
  double b = 1.0;

  static Law normal(double mu, double sigma) { return { LawKind::Normal, mu, sigma }; }
  static Law exponential(double rate) { return { LawKind::Exponential, rate, 0.0 }; }
  static Law fixed(double value) { return { LawKind::Fixed, value, 0.0 }; }

  double mean() const;
  //! Same family shifted (normal) or rescaled (exponential) to a new mean.
  Law with_mean(double mean) const;
  double draw(CounterRng& rng) const;
  //! P(C > t) for this law, as a survival curve.
  SurvivalCurve survival() const;
  void validate() const;
};

struct OutlierSpec
{
  std::size_t count = 20;
  double mf = 10.0;
};

struct SimConfig
{
  Model model;
  std::size_t n = 100;
  Law covariate = Law::normal(5.0, 2.0);
  Law censor = Law::normal(11.0, 1.0);
  std::uint64_t seed = 1;
  std::optional<OutlierSpec> outliers;

  void validate() const;

  //! Linear model with X ~ N(5, 2), C ~ N(11, 1).
  static SimConfig linear_default();
  //! T = 2X + 1 + 0.2 eps with X ~ Exp(mean 1.5), C ~ Exp(mean 3).
  static SimConfig normality_default();
};

//! Draws n observations: X, eps (redrawn together while T <= 0), then C;
//! Y = min(T, C), delta = 1{T <= C}.
LabeledDataset generate(const SimConfig& config, CounterRng& rng);

//! Multiplies the latent T of `count` distinct uniformly chosen rows by mf
//! and recomputes (Y, delta) against the same censoring times.
LabeledDataset inject_outliers(const LabeledDataset& data,
                               std::size_t count,
                               double mf,
                               CounterRng& rng);

//! Bisection on the censoring-law mean so that the realised censoring rate
//! of a 2e5-row sample is strictly within `tolerance` of target_cr.
//! Common random numbers make the rate monotone in the mean.
double calibrate_censor_mean(const SimConfig& config,
                             double target_cr,
                             double tolerance = 0.005,
                             std::size_t sample_size = 200000);

struct MseValue
{
  double value = 0.0;
  std::size_t used = 0;
  std::size_t excluded = 0;  //!< rows where the fit was undefined (NaN)
};

//! Mean squared deviation of fitted values against the latent T_i; NaN
//! fits are excluded pairwise.
MseValue mse(const LabeledDataset& labeled, std::span<const double> fitted);

//! Mean squared deviation of `fitted` against `reference`, NaN fits
//! excluded pairwise.
MseValue mean_squared_deviation(std::span<const double> reference,
                                std::span<const double> fitted);

struct FitOptions
{
  KernelSpec kernel;
  BandwidthSpec bandwidth = PaperRule{};
};

enum class MseReference
{
  LatentResponse,  //!< T_i, as in MSE = (1/n) sum (T_i - fit(X_i))^2
  TrueCurve        //!< noise-free model curve at X_i
};

//! Which rows enter the MSE and what they are compared against. The
//! default scores every row against its latent T_i.
struct MseScope
{
  MseReference reference = MseReference::LatentResponse;
  std::optional<std::pair<double, double>> region;  //!< keep a <= X_i <= b
};

struct MseReplication
{
  double mse_classical = 0.0;
  double mse_relative = 0.0;
  double realized_cr = 0.0;
  std::size_t rejections = 0;
};

//! Independent replications of: generate (and contaminate if configured),
//! fit the classical and relative-error estimators at every X_i with the
//! Kaplan-Meier censoring curve, and score both against the latent T_i.
//! Replication r uses stream derive_stream(stream_base, r).
std::vector<MseReplication> run_mse_replications(const SimConfig& config,
                                                 std::size_t replications,
                                                 std::uint64_t stream_base,
                                                 const FitOptions& fit = {},
                                                 const MseScope& scope = {});

struct ExperimentRow
{
  std::size_t n = 0;
  double target_cr = 0.0;
  double realized_cr = 0.0;
  double mse_classical = 0.0;
  double mse_relative = 0.0;
  std::size_t replications = 0;
  double censor_mean = 0.0;
  std::size_t rejections = 0;
  bool failed = false;
  std::string error;
};

struct ExperimentReport
{
  std::vector<ExperimentRow> rows;
  SimConfig base;
  std::uint64_t seed = 0;
  std::size_t replications = 0;
  MseScope scope;
};

//! One row per (n, target_cr) cell, in the order ns x target_crs.
ExperimentReport mse_table(std::span<const std::size_t> ns,
                           std::span<const double> target_crs,
                           std::size_t replications,
                           std::uint64_t seed,
                           const SimConfig& base = SimConfig::linear_default(),
                           const FitOptions& fit = {},
                           double calibration_tolerance = 0.005,
                           const MseScope& scope = {});

std::string report_to_csv(const ExperimentReport& report);

struct NormalitySample
{
  std::vector<double> a_values;
  std::size_t m = 0;
  std::size_t n = 0;
  double x0 = 0.0;
  double h = 0.0;
  std::size_t dropped = 0;
  std::size_t rejections = 0;
};

struct NormalityOptions
{
  SimConfig config = SimConfig::normality_default();
  double x0 = 0.0;
  double target = 1.0;  //!< true r(x0)
  FitOptions fit;
  UpsilonForm form = UpsilonForm::Corrected;
};

//! sqrt(n h / sigma2) (estimate - target).
double standardized_deviation(double estimate,
                              double sigma2,
                              std::size_t n,
                              double h,
                              double target);

//! m replications of size n; each yields A_j at x0 from the plug-in
//! variance. Replications with an undefined estimate or zero variance are
//! dropped; fewer than m/2 survivors raise TooFewValidReplications.
NormalitySample normality_experiment(std::size_t m,
                                     std::size_t n,
                                     std::uint64_t seed,
                                     const NormalityOptions& options = {});

std::string normality_to_csv(const NormalitySample& sample);

//! sup |F_m - Phi| of the empirical CDF against the standard normal.
double ks_statistic(std::span<const double> sample);

//! Mean over replications of sup_grid |r_n - truth| (trend check).
double mean_sup_error(const SimConfig& config,
                      std::span<const double> grid,
                      std::size_t replications,
                      std::uint64_t stream_base,
                      const FitOptions& fit = {});

//! Mean over replications of sup_grid |r_n - r~_n|, where r~_n uses the
//! exact censoring survival of the configured law.
double mean_sup_pseudo_gap(const SimConfig& config,
                           std::span<const double> grid,
                           std::size_t replications,
                           std::uint64_t stream_base,
                           const FitOptions& fit = {});

struct CoverageResult
{
  std::size_t covered = 0;
  std::size_t evaluated = 0;
  std::size_t undefined = 0;
  double fraction() const
  {
    return evaluated == 0 ? 0.0
                          : static_cast<double>(covered) /
                              static_cast<double>(evaluated);
  }
};

//! Fraction of replications whose pointwise interval at x0 covers truth.
CoverageResult coverage_experiment(const SimConfig& config,
                                   double x0,
                                   double truth,
                                   double level,
                                   std::size_t replications,
                                   std::uint64_t stream_base,
                                   const FitOptions& fit = {},
                                   UpsilonForm form = UpsilonForm::Corrected);

} // namespace relreg
