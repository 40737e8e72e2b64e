#pragma once

#include <string>
#include <vector>

#include "bohmfin/bohm_potential.hpp"
#include "bohmfin/density.hpp"
#include "bohmfin/market_data.hpp"
#include "bohmfin/walls.hpp"

namespace bohmfin {

enum class StrideMode { one, tau }; // overlapping vs non-overlapping windows

const char* to_string(StrideMode s);

// Full parameter record for one wall-width pipeline run; echoed into
// results so any width curve is reproducible from its config.
struct PipelineConfig {
  StrideMode stride = StrideMode::one;
  DensityMethod estimator = DensityMethod::kde;
  double bandwidth_override = 0.0; // 0 = Silverman
  GridSpec grid;
  double hbar = 1.0;
  double mass = 1.0;
  bool negate_potential = false;
  WallStrategy wall_strategy = WallStrategy::potential_peak;
  WallParams wall_params;
  bool parallel = true;
};

struct WidthPoint {
  int tau = 0;
  double width = 0.0;
  WallPair walls;
};

struct SkippedScale {
  int tau = 0;
  std::string reason;
};

// Wall width per time scale. Fits need at least 4 points.
struct WidthCurve {
  std::vector<WidthPoint> points;
  std::vector<SkippedScale> skipped;
  PipelineConfig config;
};

struct ScalingFit {
  double slope = 0.0;     // exponent of width ~ tau^slope
  double intercept = 0.0; // in log-width units
  double r_squared = 0.0;
  double sse = 0.0;
  std::vector<double> residuals;
};

struct PiecewiseFit {
  int breakpoint_tau = 0; // last tau of the pre segment
  double slope_pre = 0.0;
  double slope_post = 0.0;
  double intercept_pre = 0.0;
  double intercept_post = 0.0;
  double sse_total = 0.0;
  bool preferred = false; // beats the single fit by factor >= 1 + delta
  std::size_t candidates_tried = 0;
};

// SSE-improvement factor required before the two-segment model is
// preferred over the single slope.
inline constexpr double kPiecewiseDelta = 0.25;

// Runs returns -> density -> amplitude -> potential -> walls for each
// scale. A scale that fails (too few returns, degenerate density, ...)
// is recorded in `skipped` and omitted; fewer than 4 surviving points is
// an error.
WidthCurve compute_width_curve(const PriceSeries& series,
                               const std::vector<int>& taus,
                               const PipelineConfig& config = {});

// Ordinary least squares of ln(width) on ln(tau). Requires >= 4 points.
ScalingFit fit_scaling(const WidthCurve& curve);

// Exhaustive breakpoint search over interior taus, two independent OLS
// fits per candidate, at least 2 points per segment. Requires >= 6
// points. The pre segment includes the breakpoint tau.
PiecewiseFit fit_piecewise(const WidthCurve& curve,
                           double delta = kPiecewiseDelta);

// Aggregated-variance Hurst estimator on a scale-1 return series:
// H = 1 + slope/2 where slope fits ln Var(block mean) vs ln(block size)
// over dyadic block sizes. Requires n >= 1000.
double estimate_hurst(const ReturnSeries& series);

// Convenience used by tests and the CLI: a width curve from bare
// (tau, width) pairs, e.g. for fitting synthetic curves.
WidthCurve make_width_curve(const std::vector<int>& taus,
                            const std::vector<double>& widths);

} // namespace bohmfin
