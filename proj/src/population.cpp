#include "habitmfg/population.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace habitmfg {

Population sample_population(const TypeVector& base, std::size_t n, PerturbScheme scheme,
                             double kappa, std::uint64_t seed, double p_min, double p_max) {
  validate(base);
  if (n == 0) throw ConfigError("population size must be positive");
  if (kappa < 0.0) throw ConfigError("kappa must be non-negative");
  if (!(p_min > 0.0 && p_min < p_max && p_max < 1.0))
    throw ConfigError("p clip range must satisfy 0 < p_min < p_max < 1");

  Population pop;
  pop.base = base;
  pop.scheme = scheme;
  pop.kappa = (scheme == PerturbScheme::homogeneous) ? 0.0 : kappa;
  pop.agents.reserve(n);

  std::mt19937_64 eng(seed ^ 0xa02c9ed27c53e4d1ull);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double scale = pop.kappa / std::sqrt(static_cast<double>(n));

  pop.p_low = 1.0;
  pop.p_high = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double zeta = 0.0;
    if (scheme == PerturbScheme::shrinking) zeta = std::cos(static_cast<double>(i));
    else if (scheme == PerturbScheme::shrinking_seeded) zeta = unit(eng);

    TypeVector o = base;
    const double bump = scale * zeta;
    o.mu += bump;
    o.sigma += bump;
    const double p_raw = base.p + bump;
    if (!(p_raw > 0.0 && p_raw < 1.0))
      throw ConfigError("perturbation drives p outside (0,1) for agent " + std::to_string(i));
    o.p = std::clamp(p_raw, p_min, p_max);
    if (!(o.sigma > 0.0))
      throw ConfigError("perturbation drives sigma non-positive for agent " + std::to_string(i));

    pop.p_low = std::min(pop.p_low, o.p);
    pop.p_high = std::max(pop.p_high, o.p);
    pop.agents.push_back(o);
  }
  return pop;
}

}  // namespace habitmfg
