#include "bohmfin/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <variant>

namespace bohmfin {

namespace {

struct Ols {
  double slope = 0.0;
  double intercept = 0.0;
  double sse = 0.0;
  double sst = 0.0;
};

Ols ols_fit(const std::vector<double>& x, const std::vector<double>& y)
{
  const auto n = static_cast<double>(x.size());
  const double xm = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double ym = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - xm) * (x[i] - xm);
    sxy += (x[i] - xm) * (y[i] - ym);
  }
  if (!(sxx > 0.0))
    throw Error(ErrorKind::degenerate_distribution,
                "least squares: regressor has zero variance");
  Ols fit;
  fit.slope = sxy / sxx;
  fit.intercept = ym - fit.slope * xm;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    fit.sse += r * r;
    fit.sst += (y[i] - ym) * (y[i] - ym);
  }
  return fit;
}

void check_curve(const WidthCurve& curve, std::size_t min_points,
                 const char* op)
{
  if (curve.points.size() < min_points)
    throw Error(ErrorKind::insufficient_scales,
                std::string(op) + ": need at least " +
                  std::to_string(min_points) + " width points, got " +
                  std::to_string(curve.points.size()));
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const auto& pt = curve.points[i];
    if (pt.tau < 1 || !(pt.width > 0.0) || !std::isfinite(pt.width))
      throw Error(ErrorKind::invalid_argument,
                  std::string(op) + ": invalid width point at tau " +
                    std::to_string(pt.tau));
    if (i > 0 && curve.points[i - 1].tau >= pt.tau)
      throw Error(ErrorKind::invalid_argument,
                  std::string(op) + ": taus not strictly increasing");
  }
}

std::vector<double> log_taus(const WidthCurve& curve)
{
  std::vector<double> x(curve.points.size());
  std::transform(curve.points.begin(), curve.points.end(), x.begin(),
                 [](const WidthPoint& p) { return std::log(double(p.tau)); });
  return x;
}

std::vector<double> log_widths(const WidthCurve& curve)
{
  std::vector<double> y(curve.points.size());
  std::transform(curve.points.begin(), curve.points.end(), y.begin(),
                 [](const WidthPoint& p) { return std::log(p.width); });
  return y;
}

} // namespace

const char* to_string(StrideMode s)
{
  return s == StrideMode::one ? "1" : "tau";
}

WidthCurve compute_width_curve(const PriceSeries& series,
                               const std::vector<int>& taus,
                               const PipelineConfig& config)
{
  validate(series);
  std::vector<int> sorted_taus(taus);
  std::sort(sorted_taus.begin(), sorted_taus.end());
  if (std::adjacent_find(sorted_taus.begin(), sorted_taus.end()) !=
      sorted_taus.end())
    throw Error(ErrorKind::invalid_argument, "width curve: duplicate tau");
  if (!sorted_taus.empty() && sorted_taus.front() < 1)
    throw Error(ErrorKind::invalid_argument, "width curve: tau must be >= 1");

  using TauResult = std::variant<WidthPoint, SkippedScale>;
  auto run_one = [&](int tau) -> TauResult {
    try {
      const int stride = config.stride == StrideMode::one ? 1 : tau;
      const auto returns = log_returns(series, tau, stride);
      if (returns.size() < 100)
        return SkippedScale{tau, "fewer than 100 returns at this scale"};
      const auto dens = estimate_density(returns, config.estimator, config.grid,
                                         config.bandwidth_override);
      const auto amp = amplitude(dens);
      const auto pot = quantum_potential(amp, config.hbar, config.mass,
                                         config.negate_potential);
      const auto walls =
        detect_walls(pot, dens, config.wall_strategy, config.wall_params);
      return WidthPoint{tau, walls.width, walls};
    } catch (const Error& e) {
      return SkippedScale{tau, e.what()};
    }
  };

  std::vector<TauResult> results;
  results.reserve(sorted_taus.size());
  if (config.parallel && sorted_taus.size() > 1) {
    std::vector<std::future<TauResult>> futures;
    futures.reserve(sorted_taus.size());
    for (int tau : sorted_taus)
      futures.push_back(
        std::async(std::launch::async, [&run_one, tau] { return run_one(tau); }));
    for (auto& f : futures) results.push_back(f.get());
  } else {
    for (int tau : sorted_taus) results.push_back(run_one(tau));
  }

  WidthCurve curve;
  curve.config = config;
  for (auto& r : results) {
    if (std::holds_alternative<WidthPoint>(r))
      curve.points.push_back(std::get<WidthPoint>(std::move(r)));
    else
      curve.skipped.push_back(std::get<SkippedScale>(std::move(r)));
  }
  if (curve.points.size() < 4)
    throw Error(ErrorKind::insufficient_scales,
                "width curve: only " + std::to_string(curve.points.size()) +
                  " of " + std::to_string(sorted_taus.size()) +
                  " scales succeeded (need 4)");
  return curve;
}

ScalingFit fit_scaling(const WidthCurve& curve)
{
  check_curve(curve, 4, "fit_scaling");
  const auto x = log_taus(curve);
  const auto y = log_widths(curve);
  const auto ols = ols_fit(x, y);

  ScalingFit fit;
  fit.slope = ols.slope;
  fit.intercept = ols.intercept;
  fit.sse = ols.sse;
  fit.residuals.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    fit.residuals[i] = y[i] - (ols.intercept + ols.slope * x[i]);
  fit.r_squared =
    ols.sst > 0.0 ? std::clamp(1.0 - ols.sse / ols.sst, 0.0, 1.0) : 1.0;
  return fit;
}

PiecewiseFit fit_piecewise(const WidthCurve& curve, double delta)
{
  check_curve(curve, 6, "fit_piecewise");
  const auto x = log_taus(curve);
  const auto y = log_widths(curve);
  const std::size_t n = x.size();

  PiecewiseFit best;
  double best_sse = std::numeric_limits<double>::infinity();
  // Pre segment [0, b], post segment [b+1, n-1]; two points minimum each.
  for (std::size_t b = 1; b + 3 <= n; ++b) {
    std::vector<double> x1(x.begin(), x.begin() + b + 1);
    std::vector<double> y1(y.begin(), y.begin() + b + 1);
    std::vector<double> x2(x.begin() + b + 1, x.end());
    std::vector<double> y2(y.begin() + b + 1, y.end());
    const auto pre = ols_fit(x1, y1);
    const auto post = ols_fit(x2, y2);
    const double sse = pre.sse + post.sse;
    ++best.candidates_tried;
    if (sse < best_sse) {
      best_sse = sse;
      best.breakpoint_tau = curve.points[b].tau;
      best.slope_pre = pre.slope;
      best.slope_post = post.slope;
      best.intercept_pre = pre.intercept;
      best.intercept_post = post.intercept;
      best.sse_total = sse;
    }
  }

  const double single_sse = ols_fit(x, y).sse;
  // An essentially perfect single fit is never worth splitting.
  best.preferred =
    single_sse > 1e-20 && single_sse >= (1.0 + delta) * best.sse_total;
  return best;
}

double estimate_hurst(const ReturnSeries& series)
{
  if (series.scale_tau != 1)
    throw Error(ErrorKind::invalid_argument,
                "estimate_hurst: requires a scale-1 return series");
  const std::size_t n = series.size();
  if (n < 1000)
    throw Error(ErrorKind::insufficient_data,
                "estimate_hurst: need at least 1000 returns, got " +
                  std::to_string(n));

  // Dyadic block sizes, keeping at least 32 blocks per size.
  std::vector<double> log_m, log_var;
  for (std::size_t m = 1; n / m >= 32; m *= 2) {
    const std::size_t blocks = n / m;
    std::vector<double> means(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i) s += series.values[b * m + i];
      means[b] = s / static_cast<double>(m);
    }
    const double mm =
      std::accumulate(means.begin(), means.end(), 0.0) / double(blocks);
    double ss = 0.0;
    for (double v : means) ss += (v - mm) * (v - mm);
    const double var = ss / static_cast<double>(blocks - 1);
    if (!(var > 0.0))
      throw Error(ErrorKind::degenerate_distribution,
                  "estimate_hurst: degenerate block variance");
    log_m.push_back(std::log(static_cast<double>(m)));
    log_var.push_back(std::log(var));
  }
  if (log_m.size() < 4)
    throw Error(ErrorKind::insufficient_data,
                "estimate_hurst: too few block sizes");

  const auto fit = ols_fit(log_m, log_var);
  return 1.0 + fit.slope / 2.0;
}

WidthCurve make_width_curve(const std::vector<int>& taus,
                            const std::vector<double>& widths)
{
  if (taus.size() != widths.size())
    throw Error(ErrorKind::invalid_argument,
                "make_width_curve: taus/widths length mismatch");
  WidthCurve curve;
  curve.points.reserve(taus.size());
  for (std::size_t i = 0; i < taus.size(); ++i)
    curve.points.push_back(WidthPoint{taus[i], widths[i], {}});
  return curve;
}

} // namespace bohmfin
