#pragma once

#include <vector>

#include "bohmfin/density.hpp"

namespace bohmfin {

// Quantum potential u = (hbar^2 / 2m) * r'' / r on the amplitude grid.
// valid[i] is false at the grid endpoints and wherever r falls below the
// amplitude floor; u is meaningful only where valid. negated records
// whether the stored values carry the opposite sign convention.
struct PotentialCurve {
  std::vector<double> q;
  std::vector<double> u;
  std::vector<char> valid;
  double hbar = 1.0;
  double mass = 1.0;
  bool negated = false;

  std::size_t size() const { return q.size(); }
  double spacing() const;
};

// Points with r <= amplitude_floor_rel * max(r) are masked: the ratio
// r''/r is numerically meaningless there.
inline constexpr double kAmplitudeFloorRel = 1e-6;

// Central second differences of the amplitude. Requires at least 5 grid
// points. negate flips the sign of every stored value (a presentation
// convention; detection code canonicalizes via the negated flag).
PotentialCurve quantum_potential(const Amplitude& amp, double hbar = 1.0,
                                 double mass = 1.0, bool negate = false);

// Closed form for an exact normal density:
//   u(q) = (q - mu)^2 / (8 sigma^4) - 1 / (4 sigma^2)
// evaluated exactly on the grid; every point valid.
PotentialCurve analytic_gaussian_potential(double mu, double sigma,
                                           std::vector<double> grid);

void validate(const PotentialCurve& pot);

} // namespace bohmfin
