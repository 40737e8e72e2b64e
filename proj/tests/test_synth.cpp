#include <doctest.h>

#include <cmath>
#include <complex>
#include <numeric>

#include "bohmfin/synth.hpp"
#include "bohmfin/walls.hpp"
#include "test_util.hpp"

using namespace bohmfin;

namespace {

double sample_mean(const std::vector<double>& v)
{
  return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
}

double sample_var(const std::vector<double>& v)
{
  const double m = sample_mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return ss / double(v.size() - 1);
}

double lag1_autocorr(const std::vector<double>& v)
{
  const double m = sample_mean(v);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i)
    num += (v[i] - m) * (v[i + 1] - m);
  for (double x : v) den += (x - m) * (x - m);
  return num / den;
}

SynthSpec white_spec(std::size_t n, double sigma, std::uint64_t seed)
{
  SynthSpec s;
  s.kind = SynthKind::white;
  s.n = n;
  s.sigma = sigma;
  s.seed = seed;
  return s;
}

SynthSpec fgn_spec(std::size_t n, double hurst, std::uint64_t seed,
                   double sigma = 1.0)
{
  SynthSpec s;
  s.kind = SynthKind::fgn;
  s.n = n;
  s.sigma = sigma;
  s.hurst = hurst;
  s.seed = seed;
  return s;
}

} // namespace

TEST_CASE("white noise: identical spec gives bitwise-identical output")
{
  const auto a = generate_white_noise(white_spec(5000, 0.4, 77));
  const auto b = generate_white_noise(white_spec(5000, 0.4, 77));
  CHECK(a.values == b.values);
  const auto c = generate_white_noise(white_spec(5000, 0.4, 78));
  CHECK(a.values != c.values);
}

TEST_CASE("white noise: moments at n = 10^6")
{
  const auto s = generate_white_noise(white_spec(1000000, 1.0, 2024));
  CHECK(std::abs(sample_var(s.values) - 1.0) < 0.01);
  CHECK(std::abs(sample_mean(s.values)) < 0.005);
}

TEST_CASE("fft agrees with the naive dft and inverts cleanly")
{
  NormalSampler rng(5);
  std::vector<std::complex<double>> a(16);
  for (auto& v : a) v = {rng.next(), rng.next()};

  auto spectrum = a;
  detail::fft_pow2(spectrum, false);
  for (std::size_t k = 0; k < a.size(); ++k) {
    std::complex<double> expected{0.0, 0.0};
    for (std::size_t j = 0; j < a.size(); ++j) {
      const double ang = -2.0 * 3.141592653589793 * double(j * k) / double(a.size());
      expected += a[j] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    CHECK(std::abs(spectrum[k] - expected) < 1e-10);
  }

  auto back = spectrum;
  detail::fft_pow2(back, true);
  for (std::size_t j = 0; j < a.size(); ++j)
    CHECK(std::abs(back[j] - a[j]) < 1e-12);

  std::vector<std::complex<double>> bad(12);
  CHECK_THROWS_AS(detail::fft_pow2(bad, false), Error);
}

TEST_CASE("fgn: determinism and the power-of-two requirement")
{
  const auto a = generate_fgn(fgn_spec(1 << 12, 0.7, 9));
  const auto b = generate_fgn(fgn_spec(1 << 12, 0.7, 9));
  CHECK(a.values == b.values);

  CHECK_THROWS_WITH_AS(generate_fgn(fgn_spec(1000, 0.7, 9)),
                       doctest::Contains("power of two"), Error);
  CHECK_THROWS_AS(generate_fgn(fgn_spec(1 << 12, 1.2, 9)), Error);
  CHECK_THROWS_AS(generate_fgn(fgn_spec(1 << 12, 0.0, 9)), Error);
}

TEST_CASE("fgn: H = 1/2 reduces to white noise statistics")
{
  CHECK(fgn_autocovariance(1.0, 0.5, 1) == doctest::Approx(0.0).epsilon(1e-12));
  const auto s = generate_fgn(fgn_spec(1 << 20, 0.5, 11));
  CHECK(std::abs(lag1_autocorr(s.values)) < 0.01);
  CHECK(std::abs(sample_var(s.values) - 1.0) < 0.02);
}

TEST_CASE("fgn: H = 0.7 matches the closed-form lag-1 autocorrelation")
{
  // gamma(1)/gamma(0) = 2^(2H-1) - 1 = 0.31950... at H = 0.7
  const double expected = std::pow(2.0, 0.4) - 1.0;
  CHECK(fgn_autocovariance(1.0, 0.7, 1) ==
        doctest::Approx(expected).epsilon(1e-12));
  const auto s = generate_fgn(fgn_spec(1 << 20, 0.7, 13));
  CHECK(std::abs(lag1_autocorr(s.values) - expected) < 0.01);
}

TEST_CASE("fgn: variance tracks sigma^2 for H below and above 1/2")
{
  for (double hurst : {0.3, 0.7}) {
    const auto s = generate_fgn(fgn_spec(1 << 18, hurst, 21, 0.5));
    CHECK(sample_var(s.values) == doctest::Approx(0.25).epsilon(0.05));
  }
}

TEST_CASE("matched white noise copies n and sigma from the market sample")
{
  SynthSpec market_spec = white_spec(3800, 0.012, 55);
  const auto market = generate_white_noise(market_spec);
  const double market_sd = std::sqrt(sample_var(market.values));

  const auto matched = matched_white_noise(market, 99);
  CHECK(matched.size() == 3800);
  const double matched_sd = std::sqrt(sample_var(matched.values));
  CHECK(std::abs(matched_sd - market_sd) / market_sd < 0.03);

  const auto other_seed = matched_white_noise(market, 100);
  CHECK(other_seed.size() == matched.size());
  CHECK(other_seed.values != matched.values);

  ReturnSeries constant;
  constant.values.assign(500, 0.001);
  try {
    matched_white_noise(constant, 1);
    FAIL("expected zero-variance error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate_distribution);
  }
}

TEST_CASE("property: fat-tailed sample vs matched gaussian reproduces the "
          "wall ordering")
{
  // Student-t(3) scaled to unit variance against its matched white
  // noise: more mass at the mode inside the walls, more gaussian mass
  // beyond them. The bandwidth is widened past Silverman and the floor
  // raised so the outermost potential peak is the distributional one
  // (near sqrt(5/3)) and not a tail-noise ripple.
  const std::size_t n = 400000;
  const double bandwidth = 0.4;
  const WallParams params{1e-2};
  const auto market = testutil::student_t3_unit_var(n, 31337);
  const auto noise = matched_white_noise(market, 4242);

  const auto dens_m =
    estimate_density(market, DensityMethod::kde, {8192, 3.0}, bandwidth);
  const auto dens_g = estimate_density_on_grid(noise, DensityMethod::kde,
                                               dens_m.q, bandwidth);
  const auto pot_m = quantum_potential(amplitude(dens_m));
  const auto walls =
    detect_walls(pot_m, dens_m, WallStrategy::potential_peak, params);

  // walls at the smoothed distribution's own potential peaks
  CHECK_FALSE(walls.minus.fell_back_to_support_edge);
  CHECK_FALSE(walls.plus.fell_back_to_support_edge);
  CHECK(walls.q_plus > 1.0);
  CHECK(walls.q_plus < 2.1);

  // density at the mode region: t above gaussian
  for (std::size_t i = 0; i < dens_m.size(); ++i)
    if (std::abs(dens_m.q[i] - walls.mode_q) < 0.25)
      CHECK(dens_m.p[i] >= dens_g.p[i]);

  // tail mass beyond the t-walls: gaussian above t frequency
  double matched_sd = std::sqrt(sample_var(noise.values));
  const double gauss_tail =
    testutil::normal_cdf(walls.q_minus / matched_sd) +
    1.0 - testutil::normal_cdf(walls.q_plus / matched_sd);
  std::size_t outside = 0;
  for (double v : market.values)
    if (v < walls.q_minus || v > walls.q_plus) ++outside;
  const double t_tail = double(outside) / double(n);
  CHECK(gauss_tail > t_tail);
}
