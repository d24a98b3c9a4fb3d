#pragma once

// Result types shared by the spectrum solver and the wavefunction builders,
// together with the integral bound on the number of bound states. These live
// apart from the solvers so that the wavefunction module can consume level
// records (and the counting bound) without pulling in the root search.

#include <cmath>
#include <utility>
#include <vector>

#include "sqrtwell/errors.hpp"
#include "sqrtwell/model.hpp"

namespace sqrtwell {

// One bound level: index counts levels from the ground state up and always
// equals the number of interior nodes of the associated wavefunction.
struct EnergyLevel {
  int index = 0;                    // 0 = ground state
  double E = 0.0;                   // energy, strictly negative
  double spectral_residual = 0.0;   // |S(E)| at the converged root
  int node_count = 0;               // interior nodes of the wavefunction
};

struct SpectrumResult {
  std::vector<EnergyLevel> levels;        // ascending in E
  double chadan_bound = 0.0;              // upper bound on the level count
  int exact_count = 0;                    // from the zero-energy node count
  std::pair<double, double> scan_window;  // [E_min, E_max] actually scanned
};

// Integral of |V(x)|^(1/2) over the half line, in units of sqrt(2m)/hbar:
// substituting t = 1 - exp(-x/sigma) gives an elementary closed form.
inline double calogero_integral(const PhysParams& p) {
  require_vanishing_well(p);
  return 4.0 * (std::sqrt(2.0) - 1.0) *
         std::sqrt(p.m * p.sigma * p.sigma * p.V0 / (p.hbar * p.hbar));
}

// Upper bound on the number of bound states: half the Calogero integral.
inline double chadan_bound(const PhysParams& p) { return 0.5 * calogero_integral(p); }

}  // namespace sqrtwell
