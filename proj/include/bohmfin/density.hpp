#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bohmfin/error.hpp"
#include "bohmfin/market_data.hpp"

namespace bohmfin {

enum class DensityMethod { kde, histogram };

const char* to_string(DensityMethod m);

// Uniform grid specification: M points spanning
// [min(sample) - pad*sigma, max(sample) + pad*sigma].
struct GridSpec {
  std::size_t points = 1024;
  double pad_sigmas = 3.0;
};

// Estimated probability density p(q) on a uniform grid, normalized so the
// trapezoid integral over the grid is 1.
struct DensityGrid {
  std::vector<double> q;
  std::vector<double> p;
  DensityMethod method = DensityMethod::kde;
  double bandwidth = 0.0; // kde only; 0 for histogram
  std::size_t n_samples = 0;

  std::size_t size() const { return q.size(); }
  double spacing() const;
};

// Amplitude r(q) = sqrt(p(q)) on the density's grid; integral of r^2 is 1.
struct Amplitude {
  std::vector<double> q;
  std::vector<double> r;

  std::size_t size() const { return q.size(); }
  double spacing() const;
};

// Gaussian-kernel KDE bandwidth, 1.06 * sd * n^(-1/5).
double silverman_bandwidth(double sample_sd, std::size_t n);

std::vector<double> make_uniform_grid(double lo, double hi, std::size_t points);

double trapezoid(const std::vector<double>& q, const std::vector<double>& f);

// Estimates p(q) from a return sample. Requires n >= 100 and nonzero
// variance. bandwidth_override > 0 replaces the Silverman bandwidth
// (kde only).
DensityGrid estimate_density(const ReturnSeries& sample,
                             DensityMethod method = DensityMethod::kde,
                             const GridSpec& grid = {},
                             double bandwidth_override = 0.0);

// Same estimator on a caller-supplied uniform grid (used when two samples
// must share one grid). Samples outside the grid do not contribute;
// the result is renormalized over the grid.
DensityGrid estimate_density_on_grid(const ReturnSeries& sample,
                                     DensityMethod method,
                                     std::vector<double> grid_q,
                                     double bandwidth_override = 0.0);

Amplitude amplitude(const DensityGrid& density);

void validate(const DensityGrid& density);
void validate(const Amplitude& amp);

} // namespace bohmfin
