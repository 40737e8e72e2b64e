#pragma once

#include <string>

#include "bohmfin/bohm_potential.hpp"
#include "bohmfin/density.hpp"

namespace bohmfin {

enum class WallStrategy { potential_peak, support_edge };

const char* to_string(WallStrategy s);

struct WallParams {
  // Reliable support: grid points with p >= p_floor_rel * max(p).
  double p_floor_rel = 1e-3;
};

struct WallSideDiagnostics {
  bool fell_back_to_support_edge = false;
  std::string note;
};

// The two potential limits bounding probable returns.
struct WallPair {
  double q_minus = 0.0; // below the mode
  double q_plus = 0.0;  // above the mode
  double width = 0.0;   // q_plus - q_minus
  double mode_q = 0.0;
  WallStrategy strategy = WallStrategy::potential_peak;
  WallSideDiagnostics minus;
  WallSideDiagnostics plus;
};

// Locates one wall on each side of the density mode. potential_peak takes
// the outermost local maximum of the potential inside the reliable
// support, falling back to the support edge when a side has no interior
// peak (recorded in the diagnostics). support_edge takes the outermost
// grid point still inside the reliable support. Requires pot and dens on
// the same grid and at least 3 valid potential points per side.
WallPair detect_walls(const PotentialCurve& pot, const DensityGrid& dens,
                      WallStrategy strategy = WallStrategy::potential_peak,
                      const WallParams& params = {});

double wall_width(const WallPair& pair);

} // namespace bohmfin
