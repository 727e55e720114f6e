#include "relreg/simulation.hpp"
#include "relreg/error.hpp"
#include "relreg/estimators.hpp"
#include "relreg/io.hpp"
#include "relreg/normal.hpp"
#include "relreg/parallel.hpp"
#include "relreg/summation.hpp"
#include "relreg/survival.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace relreg {

namespace {

constexpr std::size_t max_redraws = 10000;
constexpr std::uint64_t calibration_stream = 0xca1b0a7eULL;

} // namespace

double
Model::mean_response(double x) const
{
  switch (kind) {
    case ModelKind::Linear:
    case ModelKind::NormalityLinear:
      return alpha * x + beta;
    case ModelKind::Parabolic:
      return x * x + 1.0;
    case ModelKind::Sinusoidal: {
      const double s = std::sin(0.5 * x);
      return s * s + 1.0;
    }
    case ModelKind::Exponential:
      return std::exp(0.5 * x);
  }
  return 0.0;
}

TrueCurve
Model::true_curve() const
{
  switch (kind) {
    case ModelKind::Linear:
    case ModelKind::NormalityLinear:
      return { "linear", { alpha, beta } };
    case ModelKind::Parabolic:
      return { "parabolic", {} };
    case ModelKind::Sinusoidal:
      return { "sinusoidal", {} };
    case ModelKind::Exponential:
      return { "exponential", {} };
  }
  return {};
}

double
Law::mean() const
{
  switch (kind) {
    case LawKind::Normal:
      return a;
    case LawKind::Exponential:
      return 1.0 / a;
    case LawKind::Fixed:
      return a;
  }
  return 0.0;
}

Law
Law::with_mean(double m) const
{
  switch (kind) {
    case LawKind::Normal:
      return normal(m, b);
    case LawKind::Exponential:
      return exponential(1.0 / m);
    case LawKind::Fixed:
      return fixed(m);
  }
  return *this;
}

double
Law::draw(CounterRng& rng) const
{
  switch (kind) {
    case LawKind::Normal:
      return a + b * rng.normal();
    case LawKind::Exponential:
      return rng.exponential(a);
    case LawKind::Fixed:
      return a;
  }
  return 0.0;
}

SurvivalCurve
Law::survival() const
{
  switch (kind) {
    case LawKind::Normal:
      return SurvivalCurve::normal(a, b);
    case LawKind::Exponential:
      return SurvivalCurve::exponential(a);
    case LawKind::Fixed: {
      StepFunction s;
      s.jump_times = { a };
      s.values = { 0.0 };
      return SurvivalCurve::step(std::move(s));
    }
  }
  return SurvivalCurve::constant();
}

void
Law::validate() const
{
  if (kind == LawKind::Normal && !(b > 0.0 && std::isfinite(b)))
    throw Error(ErrorCode::NonPositiveSigma, "normal law needs sigma > 0");
  if (kind == LawKind::Exponential && !(a > 0.0 && std::isfinite(a)))
    throw Error(ErrorCode::NonPositiveRate, "exponential law needs rate > 0");
  if (!std::isfinite(a))
    throw Error(ErrorCode::InvalidArgument, "law parameter must be finite");
}

void
SimConfig::validate() const
{
  if (n < 1)
    throw Error(ErrorCode::InvalidSampleSize, "simulation needs n >= 1");
  covariate.validate();
  censor.validate();
  if (!std::isfinite(model.noise) || model.noise < 0.0)
    throw Error(ErrorCode::InvalidArgument, "noise scale must be >= 0");
  if (outliers && !(outliers->mf > 0.0))
    throw Error(ErrorCode::InvalidArgument, "outlier factor must be positive");
}

SimConfig
SimConfig::linear_default()
{
  return SimConfig{};
}

SimConfig
SimConfig::normality_default()
{
  SimConfig c;
  c.model.kind = ModelKind::NormalityLinear;
  c.model.alpha = 2.0;
  c.model.beta = 1.0;
  c.model.noise = 0.2;
  c.covariate = Law::exponential(1.0 / 1.5);
  c.censor = Law::exponential(1.0 / 3.0);
  c.n = 500;
  return c;
}

namespace {

// One (X, T) draw with the T > 0 rejection rule.
std::pair<double, double>
draw_covariate_response(const SimConfig& config,
                        CounterRng& rng,
                        std::size_t& rejections)
{
  for (std::size_t attempt = 0; attempt < max_redraws; ++attempt) {
    const double x = config.covariate.draw(rng);
    const double eps = config.model.noise > 0.0 ? rng.normal() : 0.0;
    const double t = config.model.mean_response(x) + config.model.noise * eps;
    if (t > 0.0)
      return { x, t };
    ++rejections;
  }
  throw Error(ErrorCode::NonPositiveResponseGenerated,
              "model keeps producing T <= 0 after " +
                std::to_string(max_redraws) + " redraws");
}

} // namespace

LabeledDataset
generate(const SimConfig& config, CounterRng& rng)
{
  config.validate();
  std::vector<Observation> rows;
  std::vector<double> ts;
  std::vector<double> cs;
  rows.reserve(config.n);
  ts.reserve(config.n);
  cs.reserve(config.n);
  std::size_t rejections = 0;
  for (std::size_t i = 0; i < config.n; ++i) {
    const auto [x, t] = draw_covariate_response(config, rng, rejections);
    const double c = config.censor.draw(rng);
    const int delta = t <= c ? 1 : 0;
    rows.push_back({ x, std::min(t, c), delta });
    ts.push_back(t);
    cs.push_back(c);
  }
  LabeledDataset out{ CensoredDataset(std::move(rows)),
                      std::move(ts),
                      std::move(cs),
                      config.model.true_curve(),
                      rejections };
  return out;
}

LabeledDataset
inject_outliers(const LabeledDataset& data,
                std::size_t count,
                double mf,
                CounterRng& rng)
{
  const std::size_t n = data.dataset.size();
  if (count > n)
    throw Error(ErrorCode::CountExceedsSample,
                "cannot contaminate " + std::to_string(count) + " of " +
                  std::to_string(n) + " rows");
  if (!(mf > 0.0))
    throw Error(ErrorCode::InvalidArgument, "outlier factor must be positive");

  // partial Fisher-Yates: the first `count` slots are a uniform subset
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{ 0 });
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(idx[i], idx[j]);
  }

  std::vector<Observation> rows(data.dataset.begin(), data.dataset.end());
  std::vector<double> ts = data.true_t;
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t i = idx[k];
    ts[i] *= mf;
    const double c = data.true_c[i];
    rows[i].y = std::min(ts[i], c);
    rows[i].delta = ts[i] <= c ? 1 : 0;
  }
  return { CensoredDataset(std::move(rows)), std::move(ts), data.true_c,
           data.true_curve, data.rejected_draws };
}

double
calibrate_censor_mean(const SimConfig& config,
                      double target_cr,
                      double tolerance,
                      std::size_t sample_size)
{
  config.validate();
  if (!(target_cr > 0.0 && target_cr < 1.0))
    throw Error(ErrorCode::OutOfDomain, "target censoring rate must lie in (0, 1)");
  if (config.censor.kind == LawKind::Fixed)
    throw Error(ErrorCode::InvalidArgument,
                "cannot calibrate a degenerate censoring law");
  if (sample_size == 0)
    throw Error(ErrorCode::InvalidSampleSize, "calibration needs a sample");

  // Common random numbers: C = mean + sigma Z (normal) or C = mean E (exp).
  CounterRng rng(config.seed, calibration_stream);
  std::vector<double> t(sample_size);
  std::vector<double> z(sample_size);
  std::size_t rejections = 0;
  const bool normal_law = config.censor.kind == LawKind::Normal;
  for (std::size_t i = 0; i < sample_size; ++i) {
    t[i] = draw_covariate_response(config, rng, rejections).second;
    z[i] = normal_law ? rng.normal() : rng.exponential(1.0);
  }

  const double sigma = config.censor.b;
  auto rate_at = [&](double mean) {
    std::size_t censored = 0;
    for (std::size_t i = 0; i < sample_size; ++i) {
      const double c = normal_law ? mean + sigma * z[i] : mean * z[i];
      censored += t[i] > c ? 1 : 0;
    }
    return static_cast<double>(censored) / static_cast<double>(sample_size);
  };

  const auto [t_min, t_max] = std::minmax_element(t.begin(), t.end());
  const auto [z_min, z_max] = std::minmax_element(z.begin(), z.end());
  double lo = 0.0;
  double hi = 0.0;
  if (normal_law) {
    lo = *t_min - sigma * *z_max - 1.0;  // every row censored
    hi = *t_max - sigma * *z_min + 1.0;  // no row censored
  } else {
    lo = 0.5 * *t_min / *z_max;
    hi = 2.0 * *t_max / *z_min;
  }

  for (int step = 0; step < 60; ++step) {
    const double mid = normal_law ? 0.5 * (lo + hi) : std::sqrt(lo * hi);
    const double cr = rate_at(mid);
    if (std::abs(cr - target_cr) < tolerance)
      return mid;
    if (cr > target_cr)
      lo = mid;
    else
      hi = mid;
  }
  throw Error(ErrorCode::NoConvergence,
              "censoring rate " + std::to_string(target_cr) +
                " not reached within tolerance " + std::to_string(tolerance));
}

MseValue
mse(const LabeledDataset& labeled, std::span<const double> fitted)
{
  return mean_squared_deviation(labeled.true_t, fitted);
}

MseValue
mean_squared_deviation(std::span<const double> reference,
                       std::span<const double> fitted)
{
  if (fitted.size() != reference.size())
    throw Error(ErrorCode::InvalidArgument,
                "fitted values and reference values differ in length");
  CompensatedSum sum;
  MseValue out;
  for (std::size_t i = 0; i < fitted.size(); ++i) {
    if (std::isnan(fitted[i])) {
      ++out.excluded;
      continue;
    }
    const double d = reference[i] - fitted[i];
    sum += d * d;
    ++out.used;
  }
  if (out.used == 0)
    throw Error(ErrorCode::NoDefinedPoints, "no fitted value is defined");
  out.value = sum.value() / static_cast<double>(out.used);
  return out;
}

namespace {

LabeledDataset
draw_replication(const SimConfig& config, CounterRng& rng)
{
  auto data = generate(config, rng);
  if (config.outliers)
    data = inject_outliers(data, config.outliers->count, config.outliers->mf,
                           rng);
  return data;
}

} // namespace

std::vector<MseReplication>
run_mse_replications(const SimConfig& config,
                     std::size_t replications,
                     std::uint64_t stream_base,
                     const FitOptions& fit,
                     const MseScope& scope)
{
  config.validate();
  const double h = resolve_bandwidth(fit.bandwidth, config.n);
  std::vector<MseReplication> out(replications);
  parallel_for(replications, [&](std::size_t r) {
    CounterRng rng(config.seed, derive_stream(stream_base, r));
    const auto data = draw_replication(config, rng);
    const SyntheticSample sample(
      data.dataset, SurvivalCurve::step(kaplan_meier_censoring(data.dataset)));
    const std::size_t n = data.dataset.size();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> classical(n, nan);
    std::vector<double> relative(n, nan);
    std::vector<double> reference = data.true_t;
    for (std::size_t i = 0; i < n; ++i) {
      const double xi = data.dataset[i].x;
      if (scope.reference == MseReference::TrueCurve)
        reference[i] = config.model.mean_response(xi);
      if (scope.region &&
          (xi < scope.region->first || xi > scope.region->second))
        continue;
      const auto sums = local_sums(sample, xi, h, fit.kernel);
      if (sums.kernel > 0.0)
        classical[i] = sums.synthetic / sums.kernel;
      if (sums.inverse2 > 0.0)
        relative[i] = sums.inverse1 / sums.inverse2;
    }
    out[r].mse_classical = mean_squared_deviation(reference, classical).value;
    out[r].mse_relative = mean_squared_deviation(reference, relative).value;
    out[r].realized_cr = censoring_rate(data.dataset);
    out[r].rejections = data.rejected_draws;
  });
  return out;
}

ExperimentReport
mse_table(std::span<const std::size_t> ns,
          std::span<const double> target_crs,
          std::size_t replications,
          std::uint64_t seed,
          const SimConfig& base,
          const FitOptions& fit,
          double calibration_tolerance,
          const MseScope& scope)
{
  if (ns.empty() || target_crs.empty())
    throw Error(ErrorCode::InvalidArgument, "mse table needs sizes and rates");
  if (replications == 0)
    throw Error(ErrorCode::InvalidArgument, "mse table needs replications");

  ExperimentReport report;
  report.base = base;
  report.seed = seed;
  report.replications = replications;
  report.scope = scope;

  std::uint64_t cell = 0;
  for (std::size_t n : ns) {
    for (double cr : target_crs) {
      ExperimentRow row;
      row.n = n;
      row.target_cr = cr;
      try {
        SimConfig config = base;
        config.n = n;
        config.seed = seed;
        row.censor_mean = calibrate_censor_mean(config, cr,
                                                calibration_tolerance);
        config.censor = config.censor.with_mean(row.censor_mean);
        const auto reps =
          run_mse_replications(config, replications, derive_stream(seed, cell),
                               fit, scope);
        CompensatedSum m1;
        CompensatedSum m2;
        CompensatedSum rcr;
        for (const auto& r : reps) {
          m1 += r.mse_classical;
          m2 += r.mse_relative;
          rcr += r.realized_cr;
          row.rejections += r.rejections;
        }
        const double count = static_cast<double>(reps.size());
        row.mse_classical = m1.value() / count;
        row.mse_relative = m2.value() / count;
        row.realized_cr = rcr.value() / count;
        row.replications = reps.size();
      } catch (const Error& e) {
        row.failed = true;
        row.error = e.what();
        row.replications = 0;
        row.mse_classical = row.mse_relative = row.realized_cr =
          std::numeric_limits<double>::quiet_NaN();
      }
      report.rows.push_back(row);
      ++cell;
    }
  }
  return report;
}

std::string
report_to_csv(const ExperimentReport& report)
{
  std::string out = "n,target_cr,realized_cr,mse1,mse2,reps\n";
  for (const auto& row : report.rows) {
    out += std::to_string(row.n) + ',' + io::format_double(row.target_cr) +
           ',' + io::format_double(row.realized_cr) + ',' +
           io::format_double(row.mse_classical) + ',' +
           io::format_double(row.mse_relative) + ',' +
           std::to_string(row.replications) + '\n';
  }
  return out;
}

double
standardized_deviation(double estimate,
                       double sigma2,
                       std::size_t n,
                       double h,
                       double target)
{
  if (!(sigma2 > 0.0))
    throw Error(ErrorCode::DegenerateDenominator, "variance must be positive");
  return std::sqrt(static_cast<double>(n) * h / sigma2) * (estimate - target);
}

NormalitySample
normality_experiment(std::size_t m,
                     std::size_t n,
                     std::uint64_t seed,
                     const NormalityOptions& options)
{
  if (m < 2 || n < 2)
    throw Error(ErrorCode::InvalidSampleSize,
                "normality experiment needs m >= 2 and n >= 2");
  SimConfig config = options.config;
  config.n = n;
  config.seed = seed;
  config.validate();
  const double h = resolve_bandwidth(options.fit.bandwidth, n);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> a(m, nan);
  std::vector<std::size_t> rejections(m, 0);
  parallel_for(m, [&](std::size_t j) {
    CounterRng rng(config.seed, derive_stream(0x4e4f524dULL, j));
    const auto data = draw_replication(config, rng);
    rejections[j] = data.rejected_draws;
    const auto gbar = SurvivalCurve::step(kaplan_meier_censoring(data.dataset));
    try {
      const auto vc = sigma2_hat(data.dataset, options.x0, h,
                                 options.fit.kernel, gbar, options.form);
      if (!(vc.sigma2 > 0.0))
        return;
      const double est = rel_error_regression(data.dataset, options.x0, h,
                                              options.fit.kernel, gbar);
      a[j] = standardized_deviation(est, vc.sigma2, n, h, options.target);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateDenominator)
        throw;
    }
  });

  NormalitySample out;
  out.m = m;
  out.n = n;
  out.x0 = options.x0;
  out.h = h;
  for (std::size_t j = 0; j < m; ++j) {
    out.rejections += rejections[j];
    if (std::isnan(a[j]))
      ++out.dropped;
    else
      out.a_values.push_back(a[j]);
  }
  if (2 * out.a_values.size() < m)
    throw Error(ErrorCode::TooFewValidReplications,
                std::to_string(out.a_values.size()) + " of " +
                  std::to_string(m) + " replications produced a statistic");
  return out;
}

std::string
normality_to_csv(const NormalitySample& sample)
{
  std::string out = "a\n";
  for (double v : sample.a_values)
    out += io::format_double(v) + '\n';
  return out;
}

double
ks_statistic(std::span<const double> sample)
{
  if (sample.empty())
    throw Error(ErrorCode::EmptySample, "KS statistic needs a sample");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double m = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = normal_cdf(sorted[i]);
    const double above = static_cast<double>(i + 1) / m - f;
    const double below = f - static_cast<double>(i) / m;
    d = std::max({ d, above, below });
  }
  return d;
}

double
mean_sup_error(const SimConfig& config,
               std::span<const double> grid,
               std::size_t replications,
               std::uint64_t stream_base,
               const FitOptions& fit)
{
  config.validate();
  const double h = resolve_bandwidth(fit.bandwidth, config.n);
  std::vector<double> sup(replications, 0.0);
  parallel_for(replications, [&](std::size_t r) {
    CounterRng rng(config.seed, derive_stream(stream_base, r));
    const auto data = draw_replication(config, rng);
    const auto curve = estimate_curve(data.dataset, grid, h, fit.kernel,
                                      EstimatorKind::relative_error());
    double worst = 0.0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      // an undefined point counts as an unbounded error
      if (!curve.defined[g]) {
        worst = std::numeric_limits<double>::infinity();
        break;
      }
      worst = std::max(worst, std::abs(curve.values[g] -
                                        config.model.mean_response(grid[g])));
    }
    sup[r] = worst;
  });
  CompensatedSum s;
  for (double v : sup)
    s += v;
  return s.value() / static_cast<double>(replications);
}

double
mean_sup_pseudo_gap(const SimConfig& config,
                    std::span<const double> grid,
                    std::size_t replications,
                    std::uint64_t stream_base,
                    const FitOptions& fit)
{
  config.validate();
  const double h = resolve_bandwidth(fit.bandwidth, config.n);
  const auto truth = config.censor.survival();
  std::vector<double> sup(replications, 0.0);
  parallel_for(replications, [&](std::size_t r) {
    CounterRng rng(config.seed, derive_stream(stream_base, r));
    const auto data = draw_replication(config, rng);
    const auto genuine = estimate_curve(data.dataset, grid, h, fit.kernel,
                                        EstimatorKind::relative_error());
    const auto pseudo = estimate_curve(data.dataset, grid, h, fit.kernel,
                                       EstimatorKind::pseudo(truth));
    double worst = 0.0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      if (!genuine.defined[g] || !pseudo.defined[g]) {
        worst = std::numeric_limits<double>::infinity();
        break;
      }
      worst = std::max(worst, std::abs(genuine.values[g] - pseudo.values[g]));
    }
    sup[r] = worst;
  });
  CompensatedSum s;
  for (double v : sup)
    s += v;
  return s.value() / static_cast<double>(replications);
}

CoverageResult
coverage_experiment(const SimConfig& config,
                    double x0,
                    double truth,
                    double level,
                    std::size_t replications,
                    std::uint64_t stream_base,
                    const FitOptions& fit,
                    UpsilonForm form)
{
  config.validate();
  const double h = resolve_bandwidth(fit.bandwidth, config.n);
  const double grid[] = { x0 };
  // 0 = undefined, 1 = missed, 2 = covered
  std::vector<int> outcome(replications, 0);
  parallel_for(replications, [&](std::size_t r) {
    CounterRng rng(config.seed, derive_stream(stream_base, r));
    const auto data = draw_replication(config, rng);
    const auto gbar = SurvivalCurve::step(kaplan_meier_censoring(data.dataset));
    const auto band =
      confidence_band(data.dataset, grid, h, fit.kernel, gbar, level, form);
    if (!band.defined[0])
      return;
    outcome[r] = band.lower[0] <= truth && truth <= band.upper[0] ? 2 : 1;
  });
  CoverageResult res;
  for (int o : outcome) {
    if (o == 0) {
      ++res.undefined;
      continue;
    }
    ++res.evaluated;
    res.covered += o == 2 ? 1 : 0;
  }
  return res;
}

} // namespace relreg
