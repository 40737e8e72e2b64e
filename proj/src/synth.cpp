#include "bohmfin/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bohmfin {

namespace {

constexpr double kTwoPi = 6.283185307179586;

void check_common(const SynthSpec& spec)
{
  if (spec.n < 2)
    throw Error(ErrorKind::invalid_argument, "synth: n must be >= 2");
  if (!(spec.sigma > 0.0))
    throw Error(ErrorKind::invalid_argument, "synth: sigma must be positive");
}

} // namespace

const char* to_string(SynthKind k)
{
  return k == SynthKind::white ? "white" : "fgn";
}

double NormalSampler::next()
{
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] so log never sees zero; u2 in [0, 1).
  const double u1 =
    (static_cast<double>(engine_() >> 11) + 1.0) * 0x1p-53;
  const double u2 = static_cast<double>(engine_() >> 11) * 0x1p-53;
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = kTwoPi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

ReturnSeries generate_white_noise(const SynthSpec& spec)
{
  if (spec.kind != SynthKind::white)
    throw Error(ErrorKind::invalid_argument, "generate_white_noise: kind must be white");
  check_common(spec);

  NormalSampler sampler(spec.seed);
  ReturnSeries out;
  out.scale_tau = 1;
  out.stride = 1;
  out.values.resize(spec.n);
  for (double& v : out.values) v = spec.sigma * sampler.next();
  return out;
}

double fgn_autocovariance(double sigma, double hurst, std::size_t k)
{
  const double twoH = 2.0 * hurst;
  const double kk = static_cast<double>(k);
  return 0.5 * sigma * sigma *
         (std::pow(kk + 1.0, twoH) - 2.0 * std::pow(kk, twoH) +
          std::pow(std::abs(kk - 1.0), twoH));
}

ReturnSeries generate_fgn(const SynthSpec& spec)
{
  if (spec.kind != SynthKind::fgn)
    throw Error(ErrorKind::invalid_argument, "generate_fgn: kind must be fgn");
  check_common(spec);
  if (!(spec.hurst > 0.0) || !(spec.hurst < 1.0))
    throw Error(ErrorKind::invalid_argument, "generate_fgn: hurst must lie in (0, 1)");
  if (!detail::is_power_of_two(spec.n))
    throw Error(ErrorKind::invalid_argument,
                "generate_fgn: n must be a power of two, got " +
                  std::to_string(spec.n));

  const std::size_t n = spec.n;
  const std::size_t m = 2 * n;

  // First row of the circulant embedding of the Toeplitz covariance.
  std::vector<std::complex<double>> c(m);
  for (std::size_t j = 0; j <= n; ++j)
    c[j] = fgn_autocovariance(spec.sigma, spec.hurst, j);
  for (std::size_t j = n + 1; j < m; ++j) c[j] = c[m - j];

  detail::fft_pow2(c, false);

  // Eigenvalues are real for a symmetric embedding; tiny negatives are
  // rounding noise and get clamped.
  const double lambda_max =
    std::accumulate(c.begin(), c.end(), 0.0,
                    [](double acc, std::complex<double> v) {
                      return std::max(acc, v.real());
                    });
  const double tol = 1e-10 * lambda_max;
  std::vector<double> lambda(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double ev = c[j].real();
    if (ev < -tol)
      throw Error(ErrorKind::embedding,
                  "circulant embedding produced a negative eigenvalue (H=" +
                    std::to_string(spec.hurst) + ", n=" + std::to_string(n) + ")");
    lambda[j] = std::max(ev, 0.0);
  }

  NormalSampler sampler(spec.seed);
  std::vector<std::complex<double>> z(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double a = sampler.next();
    const double b = sampler.next();
    const double scale = std::sqrt(lambda[j] / static_cast<double>(m));
    z[j] = std::complex<double>(scale * a, scale * b);
  }
  detail::fft_pow2(z, false);

  ReturnSeries out;
  out.scale_tau = 1;
  out.stride = 1;
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = z[i].real();
  return out;
}

ReturnSeries matched_white_noise(const ReturnSeries& market, std::uint64_t seed)
{
  if (market.size() < 2)
    throw Error(ErrorKind::insufficient_data,
                "matched_white_noise: market sample too short");
  const auto [mn, mx] =
    std::minmax_element(market.values.begin(), market.values.end());
  if (!(*mx > *mn))
    throw Error(ErrorKind::degenerate_distribution,
                "matched_white_noise: market sample has zero variance");
  const double mean =
    std::accumulate(market.values.begin(), market.values.end(), 0.0) /
    static_cast<double>(market.size());
  double ss = 0.0;
  for (double v : market.values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(market.size() - 1));

  SynthSpec spec;
  spec.kind = SynthKind::white;
  spec.n = market.size();
  spec.sigma = sd;
  spec.seed = seed;
  return generate_white_noise(spec);
}

namespace detail {

bool is_power_of_two(std::size_t n)
{
  return n != 0 && (n & (n - 1)) == 0;
}

void fft_pow2(std::vector<std::complex<double>>& a, bool inverse)
{
  const std::size_t n = a.size();
  if (!is_power_of_two(n))
    throw Error(ErrorKind::invalid_argument, "fft: size must be a power of two");

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double angle = (inverse ? kTwoPi : -kTwoPi) / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(angle), std::sin(angle));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const auto even = a[i + k];
        const auto odd = a[i + k + len / 2] * w;
        a[i + k] = even + odd;
        a[i + k + len / 2] = even - odd;
        w *= wlen;
      }
    }
  }

  if (inverse)
    for (auto& v : a) v /= static_cast<double>(n);
}

} // namespace detail

} // namespace bohmfin
