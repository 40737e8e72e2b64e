#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bohmfin/market_data.hpp"

namespace bohmfin {

enum class SynthKind { white, fgn };

const char* to_string(SynthKind k);

// All generators are pure functions of the spec: identical spec gives a
// bitwise-identical series. The generator algorithm is pinned by name and
// version (kGeneratorName) and recorded in synth output metadata.
struct SynthSpec {
  SynthKind kind = SynthKind::white;
  std::size_t n = 0;
  double sigma = 1.0;
  double hurst = 0.5;     // fgn only, in (0, 1)
  std::uint64_t seed = 1;
};

inline constexpr const char* kGeneratorName = "mt19937-64/box-muller/v1";

// Streaming standard-normal sampler: mt19937_64 driving trig-form
// Box-Muller. Deterministic per seed.
class NormalSampler {
public:
  explicit NormalSampler(std::uint64_t seed) : engine_(seed) {}
  double next();

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// n iid Gaussian(0, sigma^2) draws at scale tau = 1.
ReturnSeries generate_white_noise(const SynthSpec& spec);

// Fractional Gaussian noise with autocovariance
//   gamma(k) = (sigma^2/2) (|k+1|^(2H) - 2|k|^(2H) + |k-1|^(2H)),
// generated by circulant embedding; n must be a power of two.
ReturnSeries generate_fgn(const SynthSpec& spec);

// White noise matching the sample's n and standard deviation.
ReturnSeries matched_white_noise(const ReturnSeries& market, std::uint64_t seed);

// fGn autocovariance at lag k for unit lag spacing.
double fgn_autocovariance(double sigma, double hurst, std::size_t k);

namespace detail {

// In-place radix-2 Cooley-Tukey; size must be a power of two.
void fft_pow2(std::vector<std::complex<double>>& a, bool inverse);

bool is_power_of_two(std::size_t n);

} // namespace detail

} // namespace bohmfin
