#include <doctest.h>

#include <fstream>

#include "bohmfin/report.hpp"
#include "bohmfin/synth.hpp"
#include "schema_check.hpp"
#include "test_util.hpp"

using namespace bohmfin;
using nlohmann::json;

namespace {

json load_schema()
{
  std::ifstream in(std::string(BOHMFIN_SOURCE_DIR) + "/schema/report.schema.json");
  REQUIRE(in.good());
  json schema;
  in >> schema;
  return schema;
}

// A small but real end-to-end run to feed report assembly.
struct RunArtifacts {
  std::filesystem::path input;
  AnalysisConfig cfg;
  WidthCurve curve;
  ScalingFit fit;
  std::optional<PiecewiseFit> piecewise;
  std::optional<BaselineSummary> baseline;
};

RunArtifacts small_run()
{
  RunArtifacts art;
  const auto dir = testutil::temp_dir("bohmfin_report");
  art.input = dir / "prices.csv";

  SynthSpec spec;
  spec.kind = SynthKind::white;
  spec.n = 1 << 15;
  spec.sigma = 0.01;
  spec.seed = 12;
  const auto returns = generate_white_noise(spec);
  const auto series = testutil::price_series_from_returns(returns.values);
  std::string csv = "date,price\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s,%.17g\n",
                  to_iso_string(series.dates[i]).c_str(), series.prices[i]);
    csv += buf;
  }
  testutil::write_file(art.input, csv);

  art.cfg.taus = {1, 2, 4, 8, 16, 32};
  art.cfg.out_dir = (dir / "out").string();
  art.curve = compute_width_curve(series, art.cfg.taus, art.cfg.pipeline);
  art.fit = fit_scaling(art.curve);
  art.piecewise = fit_piecewise(art.curve, art.cfg.piecewise_delta);

  const auto base_returns = log_returns(series, 1, 1);
  const auto dens = estimate_density(base_returns, art.cfg.pipeline.estimator,
                                     art.cfg.pipeline.grid);
  const auto pot = quantum_potential(amplitude(dens));
  const auto walls = detect_walls(pot, dens, art.cfg.pipeline.wall_strategy,
                                  art.cfg.pipeline.wall_params);
  BaselineSummary b;
  b.seed = art.cfg.seed;
  b.matched_sigma = 0.01;
  b.n = base_returns.size();
  b.market_walls = walls;
  b.baseline_walls = walls;
  b.rms_potential_diff = 0.0;
  art.baseline = b;
  return art;
}

} // namespace

TEST_CASE("config json round trip is stable")
{
  AnalysisConfig cfg;
  cfg.taus = {1, 3, 9};
  cfg.pipeline.estimator = DensityMethod::histogram;
  cfg.pipeline.wall_strategy = WallStrategy::support_edge;
  cfg.pipeline.stride = StrideMode::tau;
  cfg.pipeline.negate_potential = true;
  cfg.seed = 777;
  cfg.load.date_format = DateFormat::dmy;

  const auto j = to_json(cfg);
  AnalysisConfig other;
  apply_json(other, j);
  CHECK(to_json(other) == j);
}

TEST_CASE("config rejects unknown keys and bad values")
{
  AnalysisConfig cfg;
  CHECK_THROWS_WITH_AS(apply_json(cfg, json{{"tau_list", json::array()}}),
                       doctest::Contains("unknown key"), Error);
  CHECK_THROWS_AS(apply_json(cfg, json{{"estimator", "spline"}}), Error);
  CHECK_THROWS_AS(apply_json(cfg, json{{"taus", "not-an-array"}}), Error);
  CHECK_THROWS_AS(apply_json(cfg, json{{"stride", "2"}}), Error);
}

TEST_CASE("checksum is stable, content-sensitive, and prefixed")
{
  const auto dir = testutil::temp_dir("bohmfin_report");
  const auto path = dir / "sum.txt";
  testutil::write_file(path, "hello prices\n");
  const auto a = file_checksum(path);
  const auto b = file_checksum(path);
  CHECK(a == b);
  CHECK(a.rfind("fnv1a64:", 0) == 0);
  testutil::write_file(path, "hello prices!\n");
  CHECK(file_checksum(path) != a);
}

TEST_CASE("atomic write leaves no temp file behind")
{
  const auto dir = testutil::temp_dir("bohmfin_report");
  const auto path = dir / "atomic.json";
  write_text_atomic(path, "{}\n");
  std::ifstream in(path);
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  CHECK(content == "{}\n");
  CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
}

TEST_CASE("grid csv column order is the documented interface")
{
  const auto dens = testutil::analytic_normal_density(0.0, 1.0, -4.0, 4.0, 64);
  const auto pot = quantum_potential(amplitude(dens));
  const auto csv = grid_csv(dens, pot);
  CHECK(csv.rfind("q,p,u,valid\n", 0) == 0);
  const auto overlay = compare_csv(dens, pot, dens, pot);
  CHECK(overlay.rfind("q,p_market,u_market,valid_market,"
                      "p_baseline,u_baseline,valid_baseline\n",
                      0) == 0);
}

TEST_CASE("non-finite numbers never reach a report")
{
  json j;
  j["x"] = {{"y", json::array({1.0, 2.0})}};
  CHECK_NOTHROW(ensure_finite_numbers(j));
  j["x"]["bad"] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(ensure_finite_numbers(j), Error);
}

TEST_CASE("analysis report validates against the shipped schema")
{
  const auto art = small_run();
  const auto report =
    analysis_report("prices", art.input, art.cfg, art.curve, art.fit,
                    art.piecewise, art.baseline, {});
  const auto schema = load_schema();
  CHECK_NOTHROW(schemacheck::validate(schema, report));

  CHECK(report["mode"] == "analyze");
  CHECK(report["schema_version"] == kSchemaVersion);
  CHECK(report["scales"].size() == art.curve.points.size());
  CHECK(report["config"]["taus"].size() == 6);
}

TEST_CASE("compare report validates against the shipped schema")
{
  const auto art = small_run();
  const auto report = compare_report("prices", art.input, art.cfg, 1,
                                     *art.baseline, "curves.csv");
  CHECK_NOTHROW(schemacheck::validate(load_schema(), report));
  CHECK(report["mode"] == "compare");
  CHECK(report["tau"] == 1);
}

TEST_CASE("reports are reproducible modulo the timestamp")
{
  const auto art = small_run();
  auto a = analysis_report("prices", art.input, art.cfg, art.curve, art.fit,
                           art.piecewise, art.baseline, {});
  auto b = analysis_report("prices", art.input, art.cfg, art.curve, art.fit,
                           art.piecewise, art.baseline, {});
  a.erase("generated_at");
  b.erase("generated_at");
  CHECK(a.dump() == b.dump());
}

TEST_CASE("error objects carry kind, message, and stage")
{
  const Error e(ErrorKind::io, "cannot open");
  const auto j = error_object(e, "load", 16);
  CHECK(j["error"]["kind"] == "io");
  CHECK(j["error"]["message"] == "cannot open");
  CHECK(j["error"]["stage"] == "load");
  CHECK(j["error"]["tau"] == 16);
}
