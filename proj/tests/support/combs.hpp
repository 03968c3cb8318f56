#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "qpencil/propagator.hpp"

namespace qpencil::testing {

/// Random Dirac comb with up to `max_atoms` sites in [-3, 3]. Sites are at least 0.1 apart and
/// nonzero masses are kept away from zero so that all eigenvalues stay at desk scale.
inline Coefficients random_comb(std::mt19937_64& rng, int max_atoms, double omega_bound = 2.0,
                                double upsilon_bound = 2.0, int min_atoms = 1) {
  std::uniform_int_distribution<int> count(min_atoms, max_atoms);
  std::uniform_real_distribution<double> pos(-3.0, 3.0);
  std::uniform_real_distribution<double> w(-omega_bound, omega_bound);
  std::uniform_real_distribution<double> v(0.0, upsilon_bound);
  std::bernoulli_distribution keep(0.75);
  const int n = count(rng);
  std::vector<double> sites;
  while (static_cast<int>(sites.size()) < n) {
    const double x = pos(rng);
    if (std::all_of(sites.begin(), sites.end(), [&](double s) { return std::abs(s - x) >= 0.1; })) {
      sites.push_back(x);
    }
  }
  std::sort(sites.begin(), sites.end());
  std::vector<Atom<double>> oa, va;
  for (double x : sites) {
    bool any = false;
    if (keep(rng)) {
      double m = 0.0;
      while (std::abs(m) < 0.1) m = w(rng);
      oa.push_back({x, m});
      any = true;
    }
    if (keep(rng) || !any) {
      double m = 0.0;
      while (m < 0.1) m = v(rng);
      va.push_back({x, m});
    }
  }
  return {CoefficientMeasure(oa, {}), CoefficientMeasure(va, {}, false)};
}

/// Random comb plus a few non-overlapping density pieces.
inline Coefficients random_mixed(std::mt19937_64& rng, int max_atoms) {
  const Coefficients atoms = random_comb(rng, max_atoms);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Piece<double>> op, vp;
  double x = -3.5 + u(rng);
  for (int i = 0; i < 2; ++i) {
    const double len = 0.3 + u(rng);
    op.push_back({x, x + len, 2.0 * u(rng) - 1.0});
    vp.push_back({x + 0.5 * len, x + len + 0.4, u(rng)});
    x += len + 1.0 + u(rng);
  }
  return {CoefficientMeasure(atoms.omega().atoms(), op),
          CoefficientMeasure(atoms.upsilon().atoms(), vp, false)};
}

inline double rel(std::complex<double> a, std::complex<double> b) {
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

}  // namespace qpencil::testing
