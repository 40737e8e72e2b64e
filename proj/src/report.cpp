#include "bohmfin/report.hpp"

#include "bohmfin/synth.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

namespace bohmfin {

namespace {

using nlohmann::json;

std::string stride_to_string(StrideMode s) { return to_string(s); }

StrideMode stride_from_string(const std::string& s)
{
  if (s == "1") return StrideMode::one;
  if (s == "tau") return StrideMode::tau;
  throw Error(ErrorKind::invalid_argument, "config: stride must be '1' or 'tau'");
}

DensityMethod estimator_from_string(const std::string& s)
{
  if (s == "kde") return DensityMethod::kde;
  if (s == "histogram") return DensityMethod::histogram;
  throw Error(ErrorKind::invalid_argument,
              "config: estimator must be 'kde' or 'histogram'");
}

WallStrategy strategy_from_string(const std::string& s)
{
  if (s == "potential-peak") return WallStrategy::potential_peak;
  if (s == "support-edge") return WallStrategy::support_edge;
  throw Error(ErrorKind::invalid_argument,
              "config: wall-strategy must be 'potential-peak' or 'support-edge'");
}

DateFormat date_format_from_string(const std::string& s)
{
  if (s == "iso") return DateFormat::iso;
  if (s == "dmy") return DateFormat::dmy;
  throw Error(ErrorKind::invalid_argument, "config: date-format must be 'iso' or 'dmy'");
}

void append_csv_double(std::string& out, double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

} // namespace

nlohmann::json to_json(const AnalysisConfig& cfg)
{
  json j;
  j["taus"] = cfg.taus;
  j["stride"] = stride_to_string(cfg.pipeline.stride);
  j["estimator"] = to_string(cfg.pipeline.estimator);
  j["bandwidth"] = cfg.pipeline.bandwidth_override;
  j["grid_points"] = cfg.pipeline.grid.points;
  j["grid_pad_sigmas"] = cfg.pipeline.grid.pad_sigmas;
  j["hbar"] = cfg.pipeline.hbar;
  j["mass"] = cfg.pipeline.mass;
  j["negate_potential"] = cfg.pipeline.negate_potential;
  j["wall_strategy"] = to_string(cfg.pipeline.wall_strategy);
  j["p_floor_rel"] = cfg.pipeline.wall_params.p_floor_rel;
  j["piecewise_delta"] = cfg.piecewise_delta;
  j["parallel"] = cfg.pipeline.parallel;
  j["seed"] = cfg.seed;
  j["out_dir"] = cfg.out_dir;
  j["emit_grids"] = cfg.emit_grids;
  j["date_column"] = cfg.load.date_column;
  j["price_column"] = cfg.load.price_column;
  j["date_format"] = cfg.load.date_format == DateFormat::iso ? "iso" : "dmy";
  return j;
}

void apply_json(AnalysisConfig& cfg, const nlohmann::json& j)
{
  if (!j.is_object())
    throw Error(ErrorKind::parse, "config: top level must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "taus")
        cfg.taus = value.get<std::vector<int>>();
      else if (key == "stride")
        cfg.pipeline.stride = stride_from_string(value.get<std::string>());
      else if (key == "estimator")
        cfg.pipeline.estimator = estimator_from_string(value.get<std::string>());
      else if (key == "bandwidth")
        cfg.pipeline.bandwidth_override = value.get<double>();
      else if (key == "grid_points")
        cfg.pipeline.grid.points = value.get<std::size_t>();
      else if (key == "grid_pad_sigmas")
        cfg.pipeline.grid.pad_sigmas = value.get<double>();
      else if (key == "hbar")
        cfg.pipeline.hbar = value.get<double>();
      else if (key == "mass")
        cfg.pipeline.mass = value.get<double>();
      else if (key == "negate_potential")
        cfg.pipeline.negate_potential = value.get<bool>();
      else if (key == "wall_strategy")
        cfg.pipeline.wall_strategy = strategy_from_string(value.get<std::string>());
      else if (key == "p_floor_rel")
        cfg.pipeline.wall_params.p_floor_rel = value.get<double>();
      else if (key == "piecewise_delta")
        cfg.piecewise_delta = value.get<double>();
      else if (key == "parallel")
        cfg.pipeline.parallel = value.get<bool>();
      else if (key == "seed")
        cfg.seed = value.get<std::uint64_t>();
      else if (key == "out_dir")
        cfg.out_dir = value.get<std::string>();
      else if (key == "emit_grids")
        cfg.emit_grids = value.get<bool>();
      else if (key == "date_column")
        cfg.load.date_column = value.get<std::string>();
      else if (key == "price_column")
        cfg.load.price_column = value.get<std::string>();
      else if (key == "date_format")
        cfg.load.date_format = date_format_from_string(value.get<std::string>());
      else
        throw Error(ErrorKind::parse, "config: unknown key '" + key + "'");
    } catch (const json::exception& e) {
      throw Error(ErrorKind::parse,
                  "config: bad value for '" + key + "': " + e.what());
    }
  }
}

nlohmann::json to_json(const WallPair& walls)
{
  json j;
  j["q_minus"] = walls.q_minus;
  j["q_plus"] = walls.q_plus;
  j["width"] = walls.width;
  j["mode_q"] = walls.mode_q;
  j["strategy"] = to_string(walls.strategy);
  j["fallback_minus"] = walls.minus.fell_back_to_support_edge;
  j["fallback_plus"] = walls.plus.fell_back_to_support_edge;
  return j;
}

namespace {

json report_common(const std::string& mode, const std::string& instrument_id,
                   const std::filesystem::path& input_path,
                   const AnalysisConfig& cfg)
{
  json j;
  j["schema_version"] = kSchemaVersion;
  j["tool_version"] = kToolVersion;
  j["generated_at"] = iso_utc_now();
  j["mode"] = mode;
  j["instrument_id"] = instrument_id;
  j["input"] = {{"path", input_path.string()},
                {"checksum", file_checksum(input_path)}};
  j["config"] = to_json(cfg);
  return j;
}

json baseline_to_json(const BaselineSummary& b)
{
  json j;
  j["seed"] = b.seed;
  j["matched_sigma"] = b.matched_sigma;
  j["n"] = b.n;
  j["generator"] = kGeneratorName;
  j["market_walls"] = to_json(b.market_walls);
  j["baseline_walls"] = to_json(b.baseline_walls);
  j["rms_potential_diff"] = b.rms_potential_diff;
  return j;
}

} // namespace

nlohmann::json analysis_report(
  const std::string& instrument_id, const std::filesystem::path& input_path,
  const AnalysisConfig& cfg, const WidthCurve& curve, const ScalingFit& fit,
  const std::optional<PiecewiseFit>& piecewise,
  const std::optional<BaselineSummary>& baseline,
  const std::vector<std::pair<int, std::string>>& grid_csv_paths)
{
  json j = report_common("analyze", instrument_id, input_path, cfg);

  json scales = json::array();
  for (const auto& pt : curve.points) {
    json rec = to_json(pt.walls);
    rec["tau"] = pt.tau;
    for (const auto& [tau, path] : grid_csv_paths)
      if (tau == pt.tau) rec["grid_csv"] = path;
    if (!rec.contains("grid_csv")) rec["grid_csv"] = nullptr;
    scales.push_back(std::move(rec));
  }
  j["scales"] = std::move(scales);

  json skipped = json::array();
  for (const auto& s : curve.skipped)
    skipped.push_back({{"tau", s.tau}, {"reason", s.reason}});
  j["skipped_scales"] = std::move(skipped);

  j["scaling_fit"] = {{"slope", fit.slope},
                      {"intercept", fit.intercept},
                      {"r_squared", fit.r_squared},
                      {"sse", fit.sse},
                      {"residuals", fit.residuals}};

  if (piecewise) {
    j["piecewise_fit"] = {{"breakpoint_tau", piecewise->breakpoint_tau},
                          {"slope_pre", piecewise->slope_pre},
                          {"slope_post", piecewise->slope_post},
                          {"sse_total", piecewise->sse_total},
                          {"preferred", piecewise->preferred}};
  } else {
    j["piecewise_fit"] = nullptr;
  }

  j["baseline_comparison"] = baseline ? baseline_to_json(*baseline) : json();
  ensure_finite_numbers(j);
  return j;
}

nlohmann::json compare_report(const std::string& instrument_id,
                              const std::filesystem::path& input_path,
                              const AnalysisConfig& cfg, int tau,
                              const BaselineSummary& baseline,
                              const std::string& curves_csv_path)
{
  json j = report_common("compare", instrument_id, input_path, cfg);
  j["tau"] = tau;
  j["baseline_comparison"] = baseline_to_json(baseline);
  j["curves_csv"] = curves_csv_path;
  ensure_finite_numbers(j);
  return j;
}

nlohmann::json error_object(const Error& e, const std::string& stage,
                            std::optional<int> tau)
{
  json j;
  j["error"] = {{"kind", e.kind_name()}, {"message", e.what()}, {"stage", stage}};
  if (tau) j["error"]["tau"] = *tau;
  return j;
}

void ensure_finite_numbers(const nlohmann::json& j)
{
  if (j.is_number_float()) {
    if (!std::isfinite(j.get<double>()))
      throw Error(ErrorKind::internal, "report contains a non-finite number");
  } else if (j.is_object() || j.is_array()) {
    for (const auto& v : j) ensure_finite_numbers(v);
  }
}

std::string file_checksum(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorKind::io, "cannot read file for checksum: " + path.string());
  std::uint64_t hash = 0xcbf29ce484222325ull;
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    const auto got = static_cast<std::size_t>(in.gcount());
    for (std::size_t i = 0; i < got; ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 0x100000001b3ull;
    }
  }
  char out[32];
  std::snprintf(out, sizeof out, "fnv1a64:%016llx",
                static_cast<unsigned long long>(hash));
  return out;
}

std::string iso_utc_now()
{
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text_atomic(const std::filesystem::path& path,
                       const std::string& content)
{
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw Error(ErrorKind::io, "cannot write: " + tmp);
    out << content;
    if (!out)
      throw Error(ErrorKind::io, "write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::string grid_csv(const DensityGrid& dens, const PotentialCurve& pot)
{
  std::string out = "q,p,u,valid\n";
  for (std::size_t i = 0; i < dens.size(); ++i) {
    append_csv_double(out, dens.q[i]);
    out += ',';
    append_csv_double(out, dens.p[i]);
    out += ',';
    append_csv_double(out, pot.valid[i] ? pot.u[i] : 0.0);
    out += ',';
    out += pot.valid[i] ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::string compare_csv(const DensityGrid& market_dens,
                        const PotentialCurve& market_pot,
                        const DensityGrid& baseline_dens,
                        const PotentialCurve& baseline_pot)
{
  std::string out =
    "q,p_market,u_market,valid_market,p_baseline,u_baseline,valid_baseline\n";
  for (std::size_t i = 0; i < market_dens.size(); ++i) {
    append_csv_double(out, market_dens.q[i]);
    out += ',';
    append_csv_double(out, market_dens.p[i]);
    out += ',';
    append_csv_double(out, market_pot.valid[i] ? market_pot.u[i] : 0.0);
    out += ',';
    out += market_pot.valid[i] ? '1' : '0';
    out += ',';
    append_csv_double(out, baseline_dens.p[i]);
    out += ',';
    append_csv_double(out, baseline_pot.valid[i] ? baseline_pot.u[i] : 0.0);
    out += ',';
    out += baseline_pot.valid[i] ? '1' : '0';
    out += '\n';
  }
  return out;
}

} // namespace bohmfin
