#include "cli.hpp"
#include "config_json.hpp"
#include "svg_plot.hpp"

#include "relreg/data.hpp"
#include "relreg/error.hpp"
#include "relreg/estimators.hpp"
#include "relreg/inference.hpp"
#include "relreg/io.hpp"
#include "relreg/kernel.hpp"
#include "relreg/simulation.hpp"
#include "relreg/survival.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <sstream>

namespace relreg::cli {

namespace {

std::vector<double>
parse_list(const std::string& text, const char* what)
{
  std::vector<double> values;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    double v = 0.0;
    if (!io::parse_double(tok, v))
      throw Error(ErrorCode::InvalidArgument,
                  std::string("bad ") + what + " value '" + tok + "'");
    values.push_back(v);
  }
  if (values.empty())
    throw Error(ErrorCode::InvalidArgument, std::string("empty ") + what);
  return values;
}

std::vector<std::size_t>
parse_sizes(const std::string& text)
{
  std::vector<std::size_t> out;
  for (double v : parse_list(text, "--ns")) {
    if (!(v >= 1.0) || v != std::floor(v))
      throw Error(ErrorCode::InvalidArgument, "sample sizes must be positive integers");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

struct GridSpec
{
  double a = 1.0;
  double b = 4.0;
  std::size_t points = 101;
};

GridSpec
parse_grid(const std::string& text)
{
  const auto v = parse_list(text, "--grid");
  if (v.size() != 3 || !(v[2] >= 1.0) || v[2] != std::floor(v[2]))
    throw Error(ErrorCode::InvalidArgument, "--grid expects a,b,npts");
  return { v[0], v[1], static_cast<std::size_t>(v[2]) };
}

TrueCurve
parse_curve(const std::string& text)
{
  const auto colon = text.find(':');
  TrueCurve c;
  c.id = text.substr(0, colon);
  if (colon != std::string::npos)
    c.params = parse_list(text.substr(colon + 1), "--true-curve");
  (void)c(0.0);  // validates id and parameter count
  return c;
}

// Flags shared by the estimation subcommands.
struct SmoothingFlags
{
  std::string kernel = "gaussian";
  std::optional<double> bandwidth;
  std::string rule = "0.55,0.33";

  void add(CLI::App* app)
  {
    app->add_option("--kernel", kernel, "gaussian | epanechnikov")
      ->capture_default_str();
    app->add_option("--bandwidth", bandwidth, "fixed bandwidth h > 0");
    app->add_option("--bandwidth-rule", rule, "c,e for h = c (ln n / n)^e")
      ->capture_default_str();
  }

  BandwidthSpec spec() const
  {
    if (bandwidth)
      return FixedBandwidth{ *bandwidth };
    const auto v = parse_list(rule, "--bandwidth-rule");
    if (v.size() != 2)
      throw Error(ErrorCode::InvalidArgument, "--bandwidth-rule expects c,e");
    return PaperRule{ v[0], v[1] };
  }

  FitOptions fit() const { return { parse_kernel(kernel), spec() }; }

  void echo(Json& j, std::optional<double> resolved = std::nullopt) const
  {
    j["kernel"] = kernel;
    if (bandwidth) {
      j["bandwidth_mode"] = "fixed";
      j["bandwidth"] = *bandwidth;
    } else {
      const auto v = parse_list(rule, "--bandwidth-rule");
      j["bandwidth_mode"] = "rule";
      j["bandwidth_rule"] = v;
    }
    if (resolved)
      j["h"] = *resolved;
  }
};

std::string
meta_path(const std::string& output)
{
  return output + ".meta.json";
}

void
write_outputs(const std::string& output, const std::string& content, const Json& meta)
{
  io::write_atomic(output, content);
  io::write_atomic(meta_path(output), meta.dump(2) + "\n");
}

std::string
defined_flag(bool d)
{
  return d ? "1" : "0";
}

// ---------------------------------------------------------------- fit
struct FitCommand
{
  std::string input;
  std::string output;
  std::string estimator = "relative";
  std::string grid = "1,4,101";
  std::string censor_law;
  SmoothingFlags smoothing;

  void add(CLI::App& app)
  {
    auto* sub = app.add_subcommand("fit", "evaluate a regression estimator on a grid");
    sub->add_option("--input", input, "dataset CSV (x,y,delta)")->required();
    sub->add_option("--output", output, "output CSV (x,estimate,defined)")->required();
    sub->add_option("--estimator", estimator, "relative | classical | pseudo | complete")
      ->capture_default_str();
    sub->add_option("--grid", grid, "a,b,npts")->capture_default_str();
    sub->add_option("--censor-law", censor_law,
                    "known censoring law for the pseudo-estimator, e.g. normal:11,1");
    smoothing.add(sub);
  }

  void run() const
  {
    const auto data = load_csv(input);
    const auto g = parse_grid(grid);
    const auto points = make_grid(g.a, g.b, g.points);
    const auto fit = smoothing.fit();
    const double h = resolve_bandwidth(fit.bandwidth, data.size());
    EstimatorKind kind;
    if (estimator == "relative")
      kind = EstimatorKind::relative_error();
    else if (estimator == "classical")
      kind = EstimatorKind::classical();
    else if (estimator == "complete")
      kind = EstimatorKind::complete_nw();
    else if (estimator == "pseudo") {
      if (censor_law.empty())
        throw Error(ErrorCode::InvalidArgument, "pseudo estimator needs --censor-law");
      kind = EstimatorKind::pseudo(parse_law(censor_law).survival());
    } else
      throw Error(ErrorCode::InvalidArgument, "unknown estimator '" + estimator + "'");

    const auto curve = estimate_curve(data, points, h, fit.kernel, kind);
    std::string csv = "x,estimate,defined\n";
    std::size_t undefined = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      csv += io::format_double(curve.grid[i]) + ',' +
             io::format_double(curve.values[i]) + ',' +
             defined_flag(curve.defined[i]) + '\n';
      undefined += curve.defined[i] ? 0 : 1;
    }
    Json meta;
    meta["command"] = "fit";
    meta["input"] = input;
    meta["n"] = data.size();
    meta["estimator"] = estimator;
    if (!censor_law.empty())
      meta["censor_law"] = censor_law;
    meta["grid"] = { g.a, g.b, g.points };
    smoothing.echo(meta, h);
    meta["censoring_rate"] = censoring_rate(data);
    meta["undefined_points"] = undefined;
    write_outputs(output, csv, meta);
  }
};

// ---------------------------------------------------------------- band
struct BandCommand
{
  std::string input;
  std::string output;
  std::string grid = "1,4,101";
  double level = 0.95;
  std::string form = "corrected";
  SmoothingFlags smoothing;

  void add(CLI::App& app)
  {
    auto* sub = app.add_subcommand("band", "pointwise confidence band for the relative-error estimate");
    sub->add_option("--input", input, "dataset CSV (x,y,delta)")->required();
    sub->add_option("--output", output, "output CSV (x,estimate,lower,upper,sigma2,defined)")
      ->required();
    sub->add_option("--grid", grid, "a,b,npts")->capture_default_str();
    sub->add_option("--level", level, "confidence level 1 - zeta")->capture_default_str();
    sub->add_option("--upsilon-form", form, "corrected | paper")->capture_default_str();
    smoothing.add(sub);
  }

  void run() const
  {
    const auto data = load_csv(input);
    const auto g = parse_grid(grid);
    const auto points = make_grid(g.a, g.b, g.points);
    const auto fit = smoothing.fit();
    const double h = resolve_bandwidth(fit.bandwidth, data.size());
    const auto gbar = SurvivalCurve::step(kaplan_meier_censoring(data));
    const auto band = confidence_band(data, points, h, fit.kernel, gbar, level,
                                      parse_upsilon_form(form));
    std::string csv = "x,estimate,lower,upper,sigma2,defined\n";
    std::size_t undefined = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      csv += io::format_double(band.grid[i]) + ',' +
             io::format_double(band.estimate[i]) + ',' +
             io::format_double(band.lower[i]) + ',' +
             io::format_double(band.upper[i]) + ',' +
             io::format_double(band.sigma2[i]) + ',' +
             defined_flag(band.defined[i]) + '\n';
      undefined += band.defined[i] ? 0 : 1;
    }
    Json meta;
    meta["command"] = "band";
    meta["input"] = input;
    meta["n"] = data.size();
    meta["grid"] = { g.a, g.b, g.points };
    meta["level"] = level;
    meta["upsilon_form"] = form;
    smoothing.echo(meta, h);
    meta["censoring_rate"] = censoring_rate(data);
    meta["undefined_points"] = undefined;
    write_outputs(output, csv, meta);
  }
};

// ---------------------------------------------------------------- km
struct KmCommand
{
  std::string input;
  std::string output;

  void add(CLI::App& app)
  {
    auto* sub = app.add_subcommand("km", "Kaplan-Meier estimate of the censoring survival");
    sub->add_option("--input", input, "dataset CSV (x,y,delta)")->required();
    sub->add_option("--output", output, "output CSV (t,gbar)")->required();
  }

  void run() const
  {
    const auto data = load_csv(input);
    const auto s = kaplan_meier_censoring(data);
    std::string csv = "t,gbar\n-inf," + io::format_double(s.initial_value) + '\n';
    for (std::size_t i = 0; i < s.jump_times.size(); ++i)
      csv += io::format_double(s.jump_times[i]) + ',' +
             io::format_double(s.values[i]) + '\n';
    Json meta;
    meta["command"] = "km";
    meta["input"] = input;
    meta["n"] = data.size();
    meta["jumps"] = s.jump_times.size();
    meta["censoring_rate"] = censoring_rate(data);
    write_outputs(output, csv, meta);
  }
};

// Shared simulation flags: a JSON config plus per-field overrides.
struct SimFlags
{
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> mf;
  std::optional<std::size_t> outlier_count;

  void add(CLI::App* app, bool with_seed = true)
  {
    app->add_option("--config", config_path, "JSON simulation config");
    if (with_seed)
      app->add_option("--seed", seed, "64-bit seed");
    app->add_option("--mf", mf, "outlier multiplicative factor");
    app->add_option("--outlier-count", outlier_count, "number of contaminated rows");
  }

  SimConfig resolve(SimConfig base) const
  {
    SimConfig c = base;
    if (!config_path.empty()) {
      Json j;
      try {
        j = Json::parse(io::read_file(config_path));
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidArgument,
                    "cannot parse " + config_path + ": " + e.what());
      }
      c = sim_config_from_json(j, base);
    }
    if (seed)
      c.seed = *seed;
    if (mf || outlier_count) {
      OutlierSpec o = c.outliers.value_or(OutlierSpec{});
      if (mf)
        o.mf = *mf;
      if (outlier_count)
        o.count = *outlier_count;
      c.outliers = o;
    }
    c.validate();
    return c;
  }
};

// ---------------------------------------------------------------- simulate
struct SimulateCommand
{
  std::string output;
  std::string latent_output;
  std::optional<std::size_t> n;
  SimFlags sim;

  void add(CLI::App& app)
  {
    auto* sub = app.add_subcommand("simulate", "draw a censored dataset from a model");
    sub->add_option("--output", output, "dataset CSV (x,y,delta)")->required();
    sub->add_option("--latent-output", latent_output, "optional CSV of latent (x,t,c)");
    sub->add_option("--n", n, "sample size");
    sim.add(sub);
  }

  void run() const
  {
    SimConfig c = sim.resolve(SimConfig::linear_default());
    if (n)
      c.n = *n;
    c.validate();
    CounterRng rng(c.seed, 0);
    auto data = generate(c, rng);
    if (c.outliers)
      data = inject_outliers(data, c.outliers->count, c.outliers->mf, rng);

    Json meta;
    meta["command"] = "simulate";
    meta["config"] = sim_config_to_json(c);
    meta["rejections"] = data.rejected_draws;
    meta["censoring_rate"] = censoring_rate(data.dataset);
    if (!latent_output.empty()) {
      std::string latent = "x,t,c\n";
      for (std::size_t i = 0; i < data.true_t.size(); ++i)
        latent += io::format_double(data.dataset[i].x) + ',' +
                  io::format_double(data.true_t[i]) + ',' +
                  io::format_double(data.true_c[i]) + '\n';
      io::write_atomic(latent_output, latent);
    }
    write_outputs(output, to_csv(data.dataset), meta);
  }
};

// ---------------------------------------------------------------- mse-table
struct MseTableCommand
{
  std::string output;
  std::string ns = "100,300,500";
  std::string crs = "0.2,0.5,0.8";
  std::size_t reps = 100;
  std::uint64_t seed = 1;
  double tolerance = 0.005;
  std::string region;
  std::string reference = "latent";
  SimFlags sim;
  SmoothingFlags smoothing;

  void add(CLI::App& app)
  {
    auto* sub = app.add_subcommand("mse-table", "MSE of classical vs relative-error regression");
    sub->add_option("--output", output, "report CSV")->required();
    sub->add_option("--ns", ns, "sample sizes")->capture_default_str();
    sub->add_option("--crs", crs, "target censoring rates")->capture_default_str();
    sub->add_option("--reps", reps, "replications per cell")->capture_default_str();
    sub->add_option("--seed", seed, "64-bit seed")->capture_default_str();
    sub->add_option("--tolerance", tolerance, "censoring-rate calibration tolerance")
      ->capture_default_str();
    sub->add_option("--mse-region", region, "a,b: score only rows with a <= X <= b");
    sub->add_option("--mse-reference", reference, "latent | curve")->capture_default_str();
    sim.add(sub, false);
    smoothing.add(sub);
  }

  void run() const
  {
    const SimConfig base = sim.resolve(SimConfig::linear_default());
    const auto sizes = parse_sizes(ns);
    const auto rates = parse_list(crs, "--crs");
    MseScope scope;
    if (reference == "curve")
      scope.reference = MseReference::TrueCurve;
    else if (reference != "latent")
      throw Error(ErrorCode::InvalidArgument, "--mse-reference is latent | curve");
    if (!region.empty()) {
      const auto v = parse_list(region, "--mse-region");
      if (v.size() != 2)
        throw Error(ErrorCode::InvalidArgument, "--mse-region expects a,b");
      scope.region = std::make_pair(v[0], v[1]);
    }
    const auto report = mse_table(sizes, rates, reps, seed, base, smoothing.fit(),
                                  tolerance, scope);
    Json meta;
    meta["command"] = "mse-table";
    meta["seed"] = seed;
    meta["replications"] = reps;
    meta["ns"] = sizes;
    meta["crs"] = rates;
    meta["calibration_tolerance"] = tolerance;
    meta["mse_reference"] = reference;
    if (scope.region)
      meta["mse_region"] = { scope.region->first, scope.region->second };
    else
      meta["mse_region"] = nullptr;
    meta["base_config"] = sim_config_to_json(base);
    smoothing.echo(meta);
    Json cells = Json::array();
    for (const auto& row : report.rows) {
      Json cell;
      cell["n"] = row.n;
      cell["target_cr"] = row.target_cr;
      cell["censor_mean"] = row.failed ? Json(nullptr) : Json(row.censor_mean);
      cell["rejections"] = row.rejections;
      cell["failed"] = row.failed;
      cell["error"] = row.error;
      cells.push_back(cell);
    }
    meta["cells"] = cells;
    write_outputs(output, report_to_csv(report), meta);
  }
};

// ---------------------------------------------------------------- normality
struct NormalityCommand
{
  std::string output;
  std::size_t m = 200;
  std::size_t n = 500;
  std::uint64_t seed = 1;
  double x0 = 0.0;
  double target = 1.0;
  std::string form = "corrected";
  SimFlags sim;
  SmoothingFlags smoothing;

  void add(CLI::App& app)
  {
    auto* sub = app.add_subcommand("normality", "standardized deviations at a fixed point");
    sub->add_option("--output", output, "sample CSV (a)")->required();
    sub->add_option("--m", m, "replications")->capture_default_str();
    sub->add_option("--n", n, "sample size per replication")->capture_default_str();
    sub->add_option("--seed", seed, "64-bit seed")->capture_default_str();
    sub->add_option("--x0", x0, "evaluation point")->capture_default_str();
    sub->add_option("--target", target, "true regression value at x0")->capture_default_str();
    sub->add_option("--upsilon-form", form, "corrected | paper")->capture_default_str();
    sim.add(sub, false);
    smoothing.add(sub);
  }

  void run() const
  {
    NormalityOptions opt;
    opt.config = sim.resolve(SimConfig::normality_default());
    opt.x0 = x0;
    opt.target = target;
    opt.fit = smoothing.fit();
    opt.form = parse_upsilon_form(form);
    const auto sample = normality_experiment(m, n, seed, opt);
    Json meta;
    meta["command"] = "normality";
    meta["seed"] = seed;
    meta["m"] = m;
    meta["n"] = n;
    meta["x0"] = x0;
    meta["target"] = target;
    meta["upsilon_form"] = form;
    meta["config"] = sim_config_to_json(opt.config);
    smoothing.echo(meta, sample.h);
    meta["kept"] = sample.a_values.size();
    meta["dropped"] = sample.dropped;
    meta["rejections"] = sample.rejections;
    meta["ks_statistic"] = ks_statistic(sample.a_values);
    write_outputs(output, normality_to_csv(sample), meta);
  }
};

// ---------------------------------------------------------------- plot-data
struct PlotCommand
{
  std::string input;
  std::string output;
  std::string true_curve;
  std::size_t bins = 20;

  void add(CLI::App& app)
  {
    auto* sub = app.add_subcommand("plot-data", "render a fit/band/km/normality CSV as SVG");
    sub->add_option("--input", input, "CSV written by another subcommand")->required();
    sub->add_option("--output", output, "SVG file")->required();
    sub->add_option("--true-curve", true_curve, "overlay, e.g. linear:2,1");
    sub->add_option("--bins", bins, "histogram bins")->capture_default_str();
  }

  void run() const
  {
    std::optional<TrueCurve> truth;
    if (!true_curve.empty())
      truth = parse_curve(true_curve);
    io::write_atomic(output, render_svg(io::read_file(input), truth, bins));
  }
};

} // namespace

int
run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  CLI::App app{ "Relative-error kernel regression for right-censored data" };
  app.name("relreg");
  app.require_subcommand(1);

  FitCommand fit;
  BandCommand band;
  KmCommand km;
  SimulateCommand simulate;
  MseTableCommand mse;
  NormalityCommand normality;
  PlotCommand plot;
  fit.add(app);
  band.add(app);
  km.add(app);
  simulate.add(app);
  mse.add(app);
  normality.add(app);
  plot.add(app);

  std::vector<const char*> argv;
  argv.push_back("relreg");
  for (const auto& a : args)
    argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    const auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "fit")
      fit.run();
    else if (name == "band")
      band.run();
    else if (name == "km")
      km.run();
    else if (name == "simulate")
      simulate.run();
    else if (name == "mse-table")
      mse.run();
    else if (name == "normality")
      normality.run();
    else if (name == "plot-data")
      plot.run();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

int
run(int argc, const char* const* argv)
{
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

} // namespace relreg::cli
