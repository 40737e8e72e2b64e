#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "bohmfin/density.hpp"
#include "bohmfin/synth.hpp"
#include "test_util.hpp"

using namespace bohmfin;

namespace {

ReturnSeries standard_normal_sample(std::size_t n, std::uint64_t seed)
{
  SynthSpec spec;
  spec.kind = SynthKind::white;
  spec.n = n;
  spec.sigma = 1.0;
  spec.seed = seed;
  return generate_white_noise(spec);
}

double sup_norm_vs_normal_pdf(const DensityGrid& dens)
{
  double worst = 0.0;
  for (std::size_t i = 0; i < dens.size(); ++i)
    worst = std::max(worst,
                     std::abs(dens.p[i] - testutil::normal_pdf(dens.q[i], 0, 1)));
  return worst;
}

} // namespace

TEST_CASE("kde matches the analytic normal pdf within 0.01 sup-norm")
{
  const auto sample = standard_normal_sample(100000, 20240601);
  const auto dens = estimate_density(sample, DensityMethod::kde, {1024, 3.0});
  validate(dens);
  CHECK(sup_norm_vs_normal_pdf(dens) < 0.01);
  CHECK(dens.bandwidth == doctest::Approx(silverman_bandwidth(1.0, 100000))
                            .epsilon(0.05));
}

TEST_CASE("kde on uniform(0,1) draws is flat on the interior")
{
  SynthSpec spec;
  spec.kind = SynthKind::white;
  spec.n = 100000;
  spec.seed = 99;
  // Map normal draws through the cdf to get uniforms; keeps the
  // generator contract in one place.
  auto sample = generate_white_noise(spec);
  for (double& v : sample.values) v = testutil::normal_cdf(v);

  const auto dens = estimate_density(sample, DensityMethod::kde, {2048, 3.0});
  for (std::size_t i = 0; i < dens.size(); ++i) {
    if (dens.q[i] < 0.1 || dens.q[i] > 0.9) continue;
    CHECK(dens.p[i] == doctest::Approx(1.0).epsilon(0.05));
  }
}

TEST_CASE("degenerate and undersized samples are rejected")
{
  ReturnSeries constant;
  constant.values.assign(500, 0.0123);
  try {
    estimate_density(constant);
    FAIL("expected degenerate error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate_distribution);
    CHECK(std::string(e.what()).find("degenerate distribution") !=
          std::string::npos);
  }

  ReturnSeries tiny;
  tiny.values = {0.1, 0.2, 0.3};
  try {
    estimate_density(tiny);
    FAIL("expected insufficient-sample error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::insufficient_sample);
  }
}

TEST_CASE("histogram estimator also lands on the normal pdf")
{
  const auto sample = standard_normal_sample(100000, 5);
  const auto dens = estimate_density(sample, DensityMethod::histogram, {1024, 3.0});
  validate(dens);
  CHECK(dens.bandwidth == 0.0);
  // Coarser than the kde; only sanity-bound the sup-norm.
  CHECK(sup_norm_vs_normal_pdf(dens) < 0.05);
}

TEST_CASE("amplitude is the pointwise square root and keeps normalization")
{
  const auto sample = standard_normal_sample(20000, 17);
  const auto dens = estimate_density(sample);
  const auto amp = amplitude(dens);
  validate(amp);
  for (std::size_t i = 0; i < dens.size(); i += 97)
    CHECK(amp.r[i] == doctest::Approx(std::sqrt(dens.p[i])).epsilon(1e-12));

  DensityGrid toy;
  toy.q = make_uniform_grid(0.0, 1.0, 9);
  toy.p.assign(9, 0.0);
  toy.p[4] = 0.25;
  const auto toy_amp = amplitude(toy);
  CHECK(toy_amp.r[0] == 0.0);
  CHECK(toy_amp.r[4] == 0.5);
}

TEST_CASE("normalization holds to 1e-6 across estimators and scales")
{
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const auto sample = standard_normal_sample(5000, seed);
    for (auto method : {DensityMethod::kde, DensityMethod::histogram}) {
      const auto dens = estimate_density(sample, method, {512, 3.0});
      std::vector<double> r2(dens.p);
      const auto amp = amplitude(dens);
      for (std::size_t i = 0; i < r2.size(); ++i) r2[i] = amp.r[i] * amp.r[i];
      CHECK(std::abs(trapezoid(dens.q, dens.p) - 1.0) < 1e-6);
      CHECK(std::abs(trapezoid(amp.q, r2) - 1.0) < 1e-6);
    }
  }
}

TEST_CASE("property: affine covariance under sample rescaling")
{
  const auto sample = standard_normal_sample(50000, 31);
  const double c = 3.5;
  auto scaled = sample;
  for (double& v : scaled.values) v *= c;

  const auto dens = estimate_density(sample, DensityMethod::kde, {1024, 3.0});
  const auto dens_c = estimate_density(scaled, DensityMethod::kde, {1024, 3.0});

  for (std::size_t i = 0; i < dens.size(); ++i) {
    CHECK(dens_c.q[i] == doctest::Approx(c * dens.q[i]).epsilon(1e-9));
    if (dens.p[i] > 1e-3) // relative comparison needs signal
      CHECK(dens_c.p[i] == doctest::Approx(dens.p[i] / c).epsilon(1e-3));
  }
}

TEST_CASE("property: doubling n does not worsen kde sup-norm error")
{
  double err_small = 0.0, err_large = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    err_small += sup_norm_vs_normal_pdf(
      estimate_density(standard_normal_sample(50000, seed)));
    err_large += sup_norm_vs_normal_pdf(
      estimate_density(standard_normal_sample(100000, seed + 1000)));
  }
  CHECK(err_large / 5.0 <= err_small / 5.0);
}

TEST_CASE("density on an explicit shared grid renormalizes over that grid")
{
  const auto sample = standard_normal_sample(20000, 8);
  auto grid = make_uniform_grid(-6.0, 6.0, 1024);
  const auto dens = estimate_density_on_grid(sample, DensityMethod::kde, grid);
  CHECK(dens.q.front() == -6.0);
  CHECK(dens.q.back() == 6.0);
  CHECK(std::abs(trapezoid(dens.q, dens.p) - 1.0) < 1e-6);
}
