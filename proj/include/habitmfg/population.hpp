#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "habitmfg/types.hpp"

namespace habitmfg {

// homogeneous: every agent equals the base type.
// shrinking: deterministic zeta_i = cos(i) perturbs all three components by
//            kappa * zeta_i / sqrt(n).
// shrinking_seeded: same scaling with zeta_i ~ U[-1,1] drawn from `seed`.
enum class PerturbScheme { homogeneous, shrinking, shrinking_seeded };

struct Population {
  std::vector<TypeVector> agents;
  TypeVector base;
  PerturbScheme scheme = PerturbScheme::homogeneous;
  double kappa = 0.0;
  double p_low = 0.0;   // min_i p_i
  double p_high = 0.0;  // max_i p_i

  std::size_t size() const { return agents.size(); }
};

// Builds n agent types around `base`. Perturbed exponents are clipped into
// [p_min, p_max]; a perturbation that leaves (0,1) before clipping, or a
// non-positive volatility, is a configuration error. The construction is a
// pure function of (base, n, scheme, kappa, seed), so equal inputs give
// bit-identical populations, and max_i |o_i - base| <= kappa / sqrt(n)
// componentwise.
Population sample_population(const TypeVector& base, std::size_t n, PerturbScheme scheme,
                             double kappa, std::uint64_t seed, double p_min = 0.05,
                             double p_max = 0.95);

}  // namespace habitmfg
