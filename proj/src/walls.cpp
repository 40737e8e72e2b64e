#include "bohmfin/walls.hpp"

#include <algorithm>
#include <cmath>

namespace bohmfin {

namespace {

// Mode = global argmax of p; an exact plateau takes its midpoint index.
std::size_t mode_index(const std::vector<double>& p)
{
  const auto first =
    static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
  std::size_t last = first;
  while (last + 1 < p.size() && p[last + 1] == p[first]) ++last;
  return (first + last) / 2;
}

} // namespace

const char* to_string(WallStrategy s)
{
  return s == WallStrategy::potential_peak ? "potential-peak" : "support-edge";
}

WallPair detect_walls(const PotentialCurve& pot, const DensityGrid& dens,
                      WallStrategy strategy, const WallParams& params)
{
  const auto m = dens.size();
  if (pot.size() != m || m < 5 || pot.q.front() != dens.q.front() ||
      pot.q.back() != dens.q.back())
    throw Error(ErrorKind::invalid_argument,
                "detect_walls: potential and density grids differ");
  if (!(params.p_floor_rel > 0.0) || params.p_floor_rel >= 1.0)
    throw Error(ErrorKind::invalid_argument,
                "detect_walls: p_floor_rel must lie in (0, 1)");

  const std::size_t mode = mode_index(dens.p);
  const double floor = params.p_floor_rel * dens.p[mode];
  const auto in_support = [&](std::size_t i) { return dens.p[i] >= floor; };

  // Orient so walls are always peaks of the as-printed potential.
  const double sign = pot.negated ? -1.0 : 1.0;
  const auto u = [&](std::size_t i) { return sign * pot.u[i]; };

  for (int side = 0; side < 2; ++side) {
    std::size_t n_valid = 0;
    if (side == 0) {
      for (std::size_t i = 0; i < mode; ++i)
        if (pot.valid[i] && in_support(i)) ++n_valid;
    } else {
      for (std::size_t i = mode + 1; i < m; ++i)
        if (pot.valid[i] && in_support(i)) ++n_valid;
    }
    if (n_valid < 3)
      throw Error(ErrorKind::insufficient_tail_resolution,
                  std::string("insufficient tail resolution ") +
                    (side == 0 ? "below" : "above") + " the mode (" +
                    std::to_string(n_valid) + " valid points)");
  }

  // Outermost support point on each side of the mode.
  std::size_t minus_edge = mode;
  for (std::size_t i = 0; i < mode; ++i)
    if (in_support(i)) {
      minus_edge = i;
      break;
    }
  std::size_t plus_edge = mode;
  for (std::size_t i = m; i-- > mode + 1;)
    if (in_support(i)) {
      plus_edge = i;
      break;
    }

  WallPair pair;
  pair.strategy = strategy;
  pair.mode_q = dens.q[mode];

  auto locate = [&](bool upper, WallSideDiagnostics& diag) -> double {
    const std::size_t edge = upper ? plus_edge : minus_edge;
    if (strategy == WallStrategy::support_edge) return dens.q[edge];

    // Outermost interior local maximum of the potential inside the
    // reliable support; ties resolve outward because the scan starts
    // at the outermost candidate.
    if (upper) {
      for (std::size_t i = edge; i-- > mode + 1;) {
        if (!pot.valid[i] || !pot.valid[i - 1] || !pot.valid[i + 1]) continue;
        if (!in_support(i)) continue;
        if (u(i) >= u(i - 1) && u(i) >= u(i + 1)) return dens.q[i];
      }
    } else {
      for (std::size_t i = edge + 1; i < mode; ++i) {
        if (!pot.valid[i] || !pot.valid[i - 1] || !pot.valid[i + 1]) continue;
        if (!in_support(i)) continue;
        if (u(i) >= u(i - 1) && u(i) >= u(i + 1)) return dens.q[i];
      }
    }
    diag.fell_back_to_support_edge = true;
    diag.note = "no interior potential peak; support edge used";
    return dens.q[edge];
  };

  pair.q_plus = locate(true, pair.plus);
  pair.q_minus = locate(false, pair.minus);
  pair.width = pair.q_plus - pair.q_minus;

  if (!(pair.q_minus < pair.mode_q) || !(pair.q_plus > pair.mode_q))
    throw Error(ErrorKind::internal, "detect_walls: walls do not bracket the mode");
  return pair;
}

double wall_width(const WallPair& pair)
{
  return pair.q_plus - pair.q_minus;
}

} // namespace bohmfin
