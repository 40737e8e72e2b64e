#include "bohmfin/density.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bohmfin {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310002;

struct SampleStats {
  double mean = 0.0;
  double sd = 0.0; // ddof = 1
  double min = 0.0;
  double max = 0.0;
};

SampleStats sample_stats(const std::vector<double>& x)
{
  SampleStats s;
  const auto n = x.size();
  s.mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double v : x) ss += (v - s.mean) * (v - s.mean);
  s.sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
  auto [mn, mx] = std::minmax_element(x.begin(), x.end());
  s.min = *mn;
  s.max = *mx;
  return s;
}

// Linear-interpolation quantile on a sorted copy.
double quantile(std::vector<double> sorted, double prob)
{
  const auto n = sorted.size();
  const double pos = prob * static_cast<double>(n - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const auto hi = std::min(lo + 1, n - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

void check_sample(const ReturnSeries& sample)
{
  if (sample.size() < 100)
    throw Error(ErrorKind::insufficient_sample,
                "insufficient sample: need at least 100 returns, got " +
                  std::to_string(sample.size()));
  for (double v : sample.values)
    if (!std::isfinite(v))
      throw Error(ErrorKind::invalid_argument, "sample contains non-finite value");
  auto [mn, mx] = std::minmax_element(sample.values.begin(), sample.values.end());
  if (!(*mx > *mn))
    throw Error(ErrorKind::degenerate_distribution,
                "degenerate distribution: sample has zero variance");
}

// Linear binning: each sample splits its unit mass between the two
// enclosing grid points. Out-of-range samples are skipped.
std::vector<double> bin_linear(const std::vector<double>& x,
                               const std::vector<double>& q, double h)
{
  std::vector<double> bins(q.size(), 0.0);
  const double q0 = q.front();
  const double qn = q.back();
  const auto m = q.size();
  for (double v : x) {
    if (v < q0 || v > qn) continue;
    double t = (v - q0) / h;
    auto i = static_cast<std::size_t>(t);
    if (i >= m - 1) {
      bins[m - 1] += 1.0;
      continue;
    }
    const double w = t - static_cast<double>(i);
    bins[i] += 1.0 - w;
    bins[i + 1] += w;
  }
  return bins;
}

std::vector<double> kde_on_grid(const std::vector<double>& x,
                                const std::vector<double>& q, double h,
                                double bandwidth)
{
  const auto m = q.size();
  auto bins = bin_linear(x, q, h);

  // Gaussian taps out to 8 bandwidths; exp(-32) is below double noise.
  const auto reach = static_cast<std::size_t>(std::ceil(8.0 * bandwidth / h));
  const auto j_max = std::min(reach, m - 1);
  std::vector<double> taps(j_max + 1);
  for (std::size_t j = 0; j <= j_max; ++j) {
    const double u = static_cast<double>(j) * h / bandwidth;
    taps[j] = std::exp(-0.5 * u * u);
  }

  const double norm =
    1.0 / (static_cast<double>(x.size()) * bandwidth * kSqrt2Pi);
  std::vector<double> p(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (bins[i] == 0.0) continue;
    const double mass = bins[i];
    const std::size_t lo = i > j_max ? i - j_max : 0;
    const std::size_t hi = std::min(i + j_max, m - 1);
    for (std::size_t k = lo; k <= hi; ++k) {
      const std::size_t j = k > i ? k - i : i - k;
      p[k] += mass * taps[j];
    }
  }
  for (double& v : p) v *= norm;
  return p;
}

std::vector<double> histogram_on_grid(const std::vector<double>& x,
                                      const std::vector<double>& q)
{
  const auto n = x.size();
  std::vector<double> sorted(x);
  std::sort(sorted.begin(), sorted.end());
  const double iqr = quantile(sorted, 0.75) - quantile(sorted, 0.25);
  const double sd = sample_stats(x).sd;
  const double n_cbrt = std::cbrt(static_cast<double>(n));
  // Freedman-Diaconis width, Scott fallback when the IQR collapses.
  double width = 2.0 * iqr / n_cbrt;
  if (!(width > 0.0)) width = 3.49 * sd / n_cbrt;

  const double lo = sorted.front();
  const double hi = sorted.back();
  const auto nbins =
    std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((hi - lo) / width)));
  const double binw = (hi - lo) / static_cast<double>(nbins);

  std::vector<double> counts(nbins, 0.0);
  for (double v : sorted) {
    auto b = static_cast<std::size_t>((v - lo) / binw);
    if (b >= nbins) b = nbins - 1;
    counts[b] += 1.0;
  }

  std::vector<double> centers(nbins);
  std::vector<double> dens(nbins);
  for (std::size_t b = 0; b < nbins; ++b) {
    centers[b] = lo + (static_cast<double>(b) + 0.5) * binw;
    dens[b] = counts[b] / (static_cast<double>(n) * binw);
  }

  // Resample bin-center densities onto the grid; zero outside the data.
  std::vector<double> p(q.size(), 0.0);
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double v = q[i];
    if (v < centers.front() || v > centers.back()) continue;
    auto it = std::upper_bound(centers.begin(), centers.end(), v);
    if (it == centers.begin()) {
      p[i] = dens.front();
      continue;
    }
    const auto b = static_cast<std::size_t>(it - centers.begin()) - 1;
    if (b + 1 >= nbins) {
      p[i] = dens.back();
      continue;
    }
    const double t = (v - centers[b]) / binw;
    p[i] = dens[b] * (1.0 - t) + dens[b + 1] * t;
  }
  return p;
}

} // namespace

const char* to_string(DensityMethod m)
{
  return m == DensityMethod::kde ? "kde" : "histogram";
}

double DensityGrid::spacing() const
{
  return (q.back() - q.front()) / static_cast<double>(q.size() - 1);
}

double Amplitude::spacing() const
{
  return (q.back() - q.front()) / static_cast<double>(q.size() - 1);
}

double silverman_bandwidth(double sample_sd, std::size_t n)
{
  return 1.06 * sample_sd * std::pow(static_cast<double>(n), -0.2);
}

std::vector<double> make_uniform_grid(double lo, double hi, std::size_t points)
{
  if (points < 2 || !(hi > lo))
    throw Error(ErrorKind::invalid_argument, "invalid grid specification");
  std::vector<double> q(points);
  const double h = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i)
    q[i] = lo + static_cast<double>(i) * h;
  return q;
}

double trapezoid(const std::vector<double>& q, const std::vector<double>& f)
{
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < q.size(); ++i)
    sum += 0.5 * (q[i + 1] - q[i]) * (f[i] + f[i + 1]);
  return sum;
}

DensityGrid estimate_density(const ReturnSeries& sample, DensityMethod method,
                             const GridSpec& grid, double bandwidth_override)
{
  check_sample(sample);
  const auto stats = sample_stats(sample.values);
  auto q = make_uniform_grid(stats.min - grid.pad_sigmas * stats.sd,
                             stats.max + grid.pad_sigmas * stats.sd, grid.points);
  return estimate_density_on_grid(sample, method, std::move(q),
                                  bandwidth_override);
}

DensityGrid estimate_density_on_grid(const ReturnSeries& sample,
                                     DensityMethod method,
                                     std::vector<double> grid_q,
                                     double bandwidth_override)
{
  check_sample(sample);
  if (grid_q.size() < 8)
    throw Error(ErrorKind::invalid_argument, "density grid too short");
  const double h =
    (grid_q.back() - grid_q.front()) / static_cast<double>(grid_q.size() - 1);

  DensityGrid out;
  out.method = method;
  out.n_samples = sample.size();

  if (method == DensityMethod::kde) {
    const auto stats = sample_stats(sample.values);
    out.bandwidth = bandwidth_override > 0.0
                      ? bandwidth_override
                      : silverman_bandwidth(stats.sd, sample.size());
    out.p = kde_on_grid(sample.values, grid_q, h, out.bandwidth);
  } else {
    out.bandwidth = 0.0;
    out.p = histogram_on_grid(sample.values, grid_q);
  }
  out.q = std::move(grid_q);

  const double integral = trapezoid(out.q, out.p);
  if (!(integral > 0.0))
    throw Error(ErrorKind::degenerate_distribution,
                "estimated density has zero mass on the grid");
  for (double& v : out.p) v /= integral;
  return out;
}

Amplitude amplitude(const DensityGrid& density)
{
  Amplitude amp;
  amp.q = density.q;
  amp.r.resize(density.p.size());
  std::transform(density.p.begin(), density.p.end(), amp.r.begin(),
                 [](double p) { return std::sqrt(p); });
  return amp;
}

void validate(const DensityGrid& density)
{
  if (density.q.size() < 2 || density.q.size() != density.p.size())
    throw Error(ErrorKind::invalid_argument, "density grid: bad shape");
  const double h = density.spacing();
  for (std::size_t i = 0; i + 1 < density.q.size(); ++i) {
    const double dq = density.q[i + 1] - density.q[i];
    if (!(dq > 0.0))
      throw Error(ErrorKind::invalid_argument, "density grid: not increasing");
    if (std::abs(dq - h) > 1e-9 * h)
      throw Error(ErrorKind::invalid_argument, "density grid: not uniform");
  }
  for (double v : density.p)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw Error(ErrorKind::invalid_argument, "density grid: negative or non-finite p");
  const double integral = trapezoid(density.q, density.p);
  if (std::abs(integral - 1.0) > 1e-6)
    throw Error(ErrorKind::invalid_argument,
                "density grid: integral deviates from 1 by more than 1e-6");
}

void validate(const Amplitude& amp)
{
  if (amp.q.size() < 2 || amp.q.size() != amp.r.size())
    throw Error(ErrorKind::invalid_argument, "amplitude: bad shape");
  std::vector<double> r2(amp.r.size());
  std::transform(amp.r.begin(), amp.r.end(), r2.begin(),
                 [](double r) { return r * r; });
  for (double v : amp.r)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw Error(ErrorKind::invalid_argument, "amplitude: negative or non-finite r");
  if (std::abs(trapezoid(amp.q, r2) - 1.0) > 1e-6)
    throw Error(ErrorKind::invalid_argument,
                "amplitude: integral of r^2 deviates from 1 by more than 1e-6");
}

} // namespace bohmfin
