// Command-line front end: analyze / compare / synth.
//
// All results land in JSON + CSV files under --out-dir; errors leave a
// machine-readable JSON object on stdout and a nonzero exit code.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "bohmfin/report.hpp"
#include "bohmfin/synth.hpp"

using nlohmann::json;

namespace bohmfin {

namespace {

struct FlagValues {
  std::string config_path;
  std::vector<int> taus;
  std::string estimator;
  double bandwidth = 0.0;
  std::string wall_strategy;
  double p_floor_rel = 0.0;
  bool negate_potential = false;
  std::string stride;
  std::uint64_t seed = 0;
  std::string out_dir;
  bool emit_grids = false;
  std::string date_column;
  std::string price_column;
  std::string date_format;
};

void add_common_flags(CLI::App* cmd, FlagValues& fv)
{
  cmd->add_option("--config", fv.config_path, "JSON config file");
  cmd->add_option("--taus", fv.taus, "time scales (base periods)")->delimiter(',');
  cmd->add_option("--estimator", fv.estimator, "kde|histogram");
  cmd->add_option("--bandwidth", fv.bandwidth, "KDE bandwidth override (0 = Silverman)");
  cmd->add_option("--wall-strategy", fv.wall_strategy, "potential-peak|support-edge");
  cmd->add_option("--p-floor-rel", fv.p_floor_rel, "reliable-support density floor");
  cmd->add_flag("--negate-potential", fv.negate_potential, "flip the sign of exported potentials");
  cmd->add_option("--stride", fv.stride, "return sampling stride: 1|tau");
  cmd->add_option("--seed", fv.seed, "baseline generator seed");
  cmd->add_option("--out-dir", fv.out_dir, "output directory");
  cmd->add_flag("--emit-grids", fv.emit_grids, "write per-scale grid CSVs");
  cmd->add_option("--date-column", fv.date_column, "date column name");
  cmd->add_option("--price-column", fv.price_column, "price column name");
  cmd->add_option("--date-format", fv.date_format, "iso|dmy");
}

// defaults -> BOHMFIN_OUT_DIR -> config file -> explicit flags.
AnalysisConfig resolve_config(const CLI::App* cmd, const FlagValues& fv)
{
  AnalysisConfig cfg;
  if (const char* env = std::getenv("BOHMFIN_OUT_DIR")) cfg.out_dir = env;

  if (!fv.config_path.empty()) {
    std::ifstream in(fv.config_path);
    if (!in)
      throw Error(ErrorKind::io, "cannot open config file: " + fv.config_path);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw Error(ErrorKind::parse,
                  "config file is not valid JSON: " + std::string(e.what()));
    }
    apply_json(cfg, j);
  }

  json flags;
  if (cmd->count("--taus")) flags["taus"] = fv.taus;
  if (cmd->count("--estimator")) flags["estimator"] = fv.estimator;
  if (cmd->count("--bandwidth")) flags["bandwidth"] = fv.bandwidth;
  if (cmd->count("--wall-strategy")) flags["wall_strategy"] = fv.wall_strategy;
  if (cmd->count("--p-floor-rel")) flags["p_floor_rel"] = fv.p_floor_rel;
  if (cmd->count("--negate-potential")) flags["negate_potential"] = true;
  if (cmd->count("--stride")) flags["stride"] = fv.stride;
  if (cmd->count("--seed")) flags["seed"] = fv.seed;
  if (cmd->count("--out-dir")) flags["out_dir"] = fv.out_dir;
  if (cmd->count("--emit-grids")) flags["emit_grids"] = true;
  if (cmd->count("--date-column")) flags["date_column"] = fv.date_column;
  if (cmd->count("--price-column")) flags["price_column"] = fv.price_column;
  if (cmd->count("--date-format")) flags["date_format"] = fv.date_format;
  if (!flags.empty()) apply_json(cfg, flags);
  return cfg;
}

struct PipelineSnapshot {
  DensityGrid density;
  PotentialCurve potential;
  WallPair walls;
};

PipelineSnapshot run_snapshot(const ReturnSeries& returns,
                              const PipelineConfig& pc,
                              const std::vector<double>* shared_grid)
{
  PipelineSnapshot s;
  s.density = shared_grid
                ? estimate_density_on_grid(returns, pc.estimator, *shared_grid,
                                           pc.bandwidth_override)
                : estimate_density(returns, pc.estimator, pc.grid,
                                   pc.bandwidth_override);
  const auto amp = amplitude(s.density);
  s.potential = quantum_potential(amp, pc.hbar, pc.mass, pc.negate_potential);
  s.walls = detect_walls(s.potential, s.density, pc.wall_strategy, pc.wall_params);
  return s;
}

// RMS over points valid in both curves and inside the market's reliable
// support; tail points below the density floor carry no signal.
double rms_potential_diff(const PotentialCurve& a, const PotentialCurve& b,
                          const DensityGrid& market_dens, double p_floor_rel)
{
  const double p_max =
    *std::max_element(market_dens.p.begin(), market_dens.p.end());
  const double floor = p_floor_rel * p_max;
  double ss = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a.valid[i] || !b.valid[i] || market_dens.p[i] < floor) continue;
    const double d = a.u[i] - b.u[i];
    ss += d * d;
    ++n;
  }
  return n ? std::sqrt(ss / static_cast<double>(n)) : 0.0;
}

BaselineSummary baseline_summary(const ReturnSeries& market,
                                 const PipelineSnapshot& market_snap,
                                 const AnalysisConfig& cfg,
                                 PipelineSnapshot* baseline_out)
{
  const auto noise = matched_white_noise(market, cfg.seed);
  auto baseline = run_snapshot(noise, cfg.pipeline, &market_snap.density.q);

  BaselineSummary b;
  b.seed = cfg.seed;
  b.n = noise.size();
  {
    double mean = 0.0, ss = 0.0;
    for (double v : market.values) mean += v;
    mean /= static_cast<double>(market.size());
    for (double v : market.values) ss += (v - mean) * (v - mean);
    b.matched_sigma = std::sqrt(ss / static_cast<double>(market.size() - 1));
  }
  b.market_walls = market_snap.walls;
  b.baseline_walls = baseline.walls;
  b.rms_potential_diff =
    rms_potential_diff(market_snap.potential, baseline.potential,
                       market_snap.density, cfg.pipeline.wall_params.p_floor_rel);
  if (baseline_out) *baseline_out = std::move(baseline);
  return b;
}

int run_analyze(const std::string& input, const AnalysisConfig& cfg)
{
  std::string stage = "load";
  std::optional<int> stage_tau;
  try {
    const auto loaded = load_price_series(input, cfg.load);
    const auto& series = loaded.series;

    stage = "width_curve";
    const auto curve = compute_width_curve(series, cfg.taus, cfg.pipeline);

    stage = "fit_scaling";
    const auto fit = fit_scaling(curve);
    std::optional<PiecewiseFit> piecewise;
    if (curve.points.size() >= 6) {
      stage = "fit_piecewise";
      piecewise = fit_piecewise(curve, cfg.piecewise_delta);
    }

    stage = "baseline";
    const int base_tau = curve.points.front().tau;
    stage_tau = base_tau;
    const int base_stride =
      cfg.pipeline.stride == StrideMode::one ? 1 : base_tau;
    const auto base_returns = log_returns(series, base_tau, base_stride);
    const auto market_snap = run_snapshot(base_returns, cfg.pipeline, nullptr);
    const auto baseline = baseline_summary(base_returns, market_snap, cfg, nullptr);
    stage_tau.reset();

    stage = "write";
    std::filesystem::create_directories(cfg.out_dir);
    std::vector<std::pair<int, std::string>> grid_paths;
    if (cfg.emit_grids) {
      for (const auto& pt : curve.points) {
        stage_tau = pt.tau;
        const int stride = cfg.pipeline.stride == StrideMode::one ? 1 : pt.tau;
        const auto rets = log_returns(series, pt.tau, stride);
        const auto snap = run_snapshot(rets, cfg.pipeline, nullptr);
        const auto path = (std::filesystem::path(cfg.out_dir) /
                           (series.instrument_id + "_grid_tau" +
                            std::to_string(pt.tau) + ".csv"))
                            .string();
        write_text_atomic(path, grid_csv(snap.density, snap.potential));
        grid_paths.emplace_back(pt.tau, path);
      }
      stage_tau.reset();
    }

    const auto report = analysis_report(series.instrument_id, input, cfg, curve,
                                        fit, piecewise, baseline, grid_paths);
    const auto report_path = std::filesystem::path(cfg.out_dir) /
                             (series.instrument_id + "_analysis.json");
    write_text_atomic(report_path, report.dump(2) + "\n");

    std::cout << "report: " << report_path.string() << "\n"
              << "scales: " << curve.points.size() << " fitted, "
              << curve.skipped.size() << " skipped\n"
              << "slope: " << fit.slope << " (r^2 " << fit.r_squared << ")\n";
    if (piecewise && piecewise->preferred)
      std::cout << "cut-off: tau " << piecewise->breakpoint_tau << " (slopes "
                << piecewise->slope_pre << " -> " << piecewise->slope_post
                << ")\n";
    return 0;
  } catch (const Error& e) {
    std::cout << error_object(e, stage, stage_tau).dump(2) << std::endl;
    return 1;
  }
}

int run_compare(const std::string& input, const AnalysisConfig& cfg, int tau)
{
  std::string stage = "load";
  try {
    const auto loaded = load_price_series(input, cfg.load);
    const auto& series = loaded.series;

    stage = "pipeline";
    const int stride = cfg.pipeline.stride == StrideMode::one ? 1 : tau;
    const auto returns = log_returns(series, tau, stride);
    const auto market_snap = run_snapshot(returns, cfg.pipeline, nullptr);

    stage = "baseline";
    PipelineSnapshot baseline_snap;
    const auto baseline = baseline_summary(returns, market_snap, cfg, &baseline_snap);

    stage = "write";
    std::filesystem::create_directories(cfg.out_dir);
    const auto csv_path = (std::filesystem::path(cfg.out_dir) /
                           (series.instrument_id + "_compare_grid.csv"))
                            .string();
    write_text_atomic(csv_path,
                      compare_csv(market_snap.density, market_snap.potential,
                                  baseline_snap.density, baseline_snap.potential));

    const auto report =
      compare_report(series.instrument_id, input, cfg, tau, baseline, csv_path);
    const auto report_path = std::filesystem::path(cfg.out_dir) /
                             (series.instrument_id + "_compare.json");
    write_text_atomic(report_path, report.dump(2) + "\n");

    std::cout << "report: " << report_path.string() << "\n"
              << "market walls: [" << baseline.market_walls.q_minus << ", "
              << baseline.market_walls.q_plus << "]\n"
              << "baseline walls: [" << baseline.baseline_walls.q_minus << ", "
              << baseline.baseline_walls.q_plus << "]\n";
    return 0;
  } catch (const Error& e) {
    std::cout << error_object(e, stage, tau).dump(2) << std::endl;
    return 1;
  }
}

int run_synth(const SynthSpec& spec, const std::string& out_path)
{
  try {
    const auto returns = spec.kind == SynthKind::white
                           ? generate_white_noise(spec)
                           : generate_fgn(spec);

    // Price file the loader ingests: exp(cumulative return), base 100.
    std::string csv = "date,price\n";
    Date date{2000, 1, 3};
    double log_price = 0.0;
    char buf[48];
    std::snprintf(buf, sizeof buf, "%s,%.17g\n", to_iso_string(date).c_str(), 100.0);
    csv += buf;
    for (double r : returns.values) {
      log_price += r;
      date = next_calendar_day(date);
      std::snprintf(buf, sizeof buf, "%s,%.17g\n", to_iso_string(date).c_str(),
                    100.0 * std::exp(log_price));
      csv += buf;
    }
    if (!out_path.empty() && std::filesystem::path(out_path).has_parent_path())
      std::filesystem::create_directories(
        std::filesystem::path(out_path).parent_path());
    write_text_atomic(out_path, csv);

    std::cout << "wrote " << out_path << " (" << returns.size() + 1
              << " prices, generator " << kGeneratorName << ")\n";
    return 0;
  } catch (const Error& e) {
    std::cout << error_object(e, "synth").dump(2) << std::endl;
    return 1;
  }
}

} // namespace

} // namespace bohmfin

int main(int argc, char** argv)
{
  CLI::App app{"Quantum-potential analysis of return time series"};
  app.require_subcommand(1);

  bohmfin::FlagValues fv;
  std::string input;
  int compare_tau = 1;

  auto* analyze = app.add_subcommand(
    "analyze", "full multi-scale pipeline: walls, widths, scaling fits");
  analyze->add_option("--input", input, "price file")->required();
  bohmfin::add_common_flags(analyze, fv);

  auto* compare = app.add_subcommand(
    "compare", "market vs matched white noise on a shared grid");
  compare->add_option("--input", input, "price file")->required();
  compare->add_option("--tau", compare_tau, "time scale to compare at");
  bohmfin::add_common_flags(compare, fv);

  auto* synth = app.add_subcommand("synth", "write a synthetic price file");
  std::string kind = "white", out_path = "synth.csv";
  bohmfin::SynthSpec spec;
  synth->add_option("--kind", kind, "white|fgn");
  synth->add_option("--n", spec.n, "number of returns")->required();
  synth->add_option("--sigma", spec.sigma, "return standard deviation");
  synth->add_option("--hurst", spec.hurst, "Hurst parameter (fgn)");
  synth->add_option("--seed", spec.seed, "generator seed");
  synth->add_option("--out", out_path, "output price file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed())
      return bohmfin::run_analyze(input, bohmfin::resolve_config(analyze, fv));
    if (compare->parsed())
      return bohmfin::run_compare(input, bohmfin::resolve_config(compare, fv),
                                  compare_tau);
    if (synth->parsed()) {
      if (kind == "white")
        spec.kind = bohmfin::SynthKind::white;
      else if (kind == "fgn")
        spec.kind = bohmfin::SynthKind::fgn;
      else
        throw bohmfin::Error(bohmfin::ErrorKind::invalid_argument,
                             "synth: kind must be 'white' or 'fgn'");
      return bohmfin::run_synth(spec, out_path);
    }
  } catch (const bohmfin::Error& e) {
    std::cout << bohmfin::error_object(e, "config").dump(2) << std::endl;
    return 1;
  }
  return 1;
}
