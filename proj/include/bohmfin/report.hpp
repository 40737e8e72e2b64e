#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bohmfin/scaling.hpp"

namespace bohmfin {

inline constexpr const char* kToolVersion = "bohmfin 0.1.0";
inline constexpr const char* kSchemaVersion = "1";

// Everything a run needs; echoed verbatim into every report so a report
// plus its input file reproduces itself.
struct AnalysisConfig {
  std::vector<int> taus = {1, 2, 4, 8, 16, 32, 64, 128, 256};
  LoadFormat load;
  PipelineConfig pipeline;
  double piecewise_delta = kPiecewiseDelta;
  std::uint64_t seed = 1; // baseline generator seed
  std::string out_dir = ".";
  bool emit_grids = false;
};

nlohmann::json to_json(const AnalysisConfig& cfg);

// Overrides only the keys present in j; unknown keys are an error.
void apply_json(AnalysisConfig& cfg, const nlohmann::json& j);

// Inputs for the baseline half of a comparison.
struct BaselineSummary {
  std::uint64_t seed = 0;
  double matched_sigma = 0.0;
  std::size_t n = 0;
  WallPair market_walls;
  WallPair baseline_walls;
  double rms_potential_diff = 0.0; // over the shared valid region
};

nlohmann::json analysis_report(
  const std::string& instrument_id, const std::filesystem::path& input_path,
  const AnalysisConfig& cfg, const WidthCurve& curve, const ScalingFit& fit,
  const std::optional<PiecewiseFit>& piecewise,
  const std::optional<BaselineSummary>& baseline,
  const std::vector<std::pair<int, std::string>>& grid_csv_paths);

nlohmann::json compare_report(const std::string& instrument_id,
                              const std::filesystem::path& input_path,
                              const AnalysisConfig& cfg, int tau,
                              const BaselineSummary& baseline,
                              const std::string& curves_csv_path);

nlohmann::json error_object(const Error& e, const std::string& stage,
                            std::optional<int> tau = std::nullopt);

// Throws if any number anywhere in the document is non-finite.
void ensure_finite_numbers(const nlohmann::json& j);

// FNV-1a 64-bit over the raw file bytes, formatted "fnv1a64:<hex>".
std::string file_checksum(const std::filesystem::path& path);

std::string iso_utc_now();

// write-then-rename; the target never holds a partial document.
void write_text_atomic(const std::filesystem::path& path,
                       const std::string& content);

// Grid sidecar, columns: q,p,u,valid.
std::string grid_csv(const DensityGrid& dens, const PotentialCurve& pot);

// Overlay sidecar, columns:
// q,p_market,u_market,valid_market,p_baseline,u_baseline,valid_baseline.
std::string compare_csv(const DensityGrid& market_dens,
                        const PotentialCurve& market_pot,
                        const DensityGrid& baseline_dens,
                        const PotentialCurve& baseline_pot);

nlohmann::json to_json(const WallPair& walls);

} // namespace bohmfin
