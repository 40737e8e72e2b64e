#include "bohmfin/bohm_potential.hpp"

#include <algorithm>
#include <cmath>

namespace bohmfin {

double PotentialCurve::spacing() const
{
  return (q.back() - q.front()) / static_cast<double>(q.size() - 1);
}

PotentialCurve quantum_potential(const Amplitude& amp, double hbar, double mass,
                                 bool negate)
{
  const auto m = amp.size();
  if (m < 5)
    throw Error(ErrorKind::invalid_argument,
                "quantum potential: grid too short (need at least 5 points)");
  if (!(hbar > 0.0) || !(mass > 0.0))
    throw Error(ErrorKind::invalid_argument,
                "quantum potential: hbar and mass must be positive");

  PotentialCurve pot;
  pot.q = amp.q;
  pot.u.assign(m, 0.0);
  pot.valid.assign(m, 0);
  pot.hbar = hbar;
  pot.mass = mass;
  pot.negated = negate;

  const double h = amp.spacing();
  const double r_floor =
    kAmplitudeFloorRel * *std::max_element(amp.r.begin(), amp.r.end());
  const double coeff = (negate ? -1.0 : 1.0) * hbar * hbar / (2.0 * mass * h * h);

  for (std::size_t i = 1; i + 1 < m; ++i) {
    if (!(amp.r[i] > r_floor)) continue;
    const double second = amp.r[i + 1] - 2.0 * amp.r[i] + amp.r[i - 1];
    const double u = coeff * second / amp.r[i];
    if (!std::isfinite(u)) continue;
    pot.u[i] = u;
    pot.valid[i] = 1;
  }
  return pot;
}

PotentialCurve analytic_gaussian_potential(double mu, double sigma,
                                           std::vector<double> grid)
{
  if (!(sigma > 0.0))
    throw Error(ErrorKind::invalid_argument,
                "analytic gaussian potential: sigma must be positive");

  PotentialCurve pot;
  pot.u.resize(grid.size());
  pot.valid.assign(grid.size(), 1);
  const double s2 = sigma * sigma;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double d = grid[i] - mu;
    pot.u[i] = d * d / (8.0 * s2 * s2) - 1.0 / (4.0 * s2);
  }
  pot.q = std::move(grid);
  return pot;
}

void validate(const PotentialCurve& pot)
{
  if (pot.q.size() != pot.u.size() || pot.q.size() != pot.valid.size())
    throw Error(ErrorKind::invalid_argument, "potential curve: bad shape");
  for (std::size_t i = 0; i < pot.size(); ++i)
    if (pot.valid[i] && !std::isfinite(pot.u[i]))
      throw Error(ErrorKind::invalid_argument,
                  "potential curve: non-finite value marked valid");
}

} // namespace bohmfin
