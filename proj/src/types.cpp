#include "habitmfg/types.hpp"

#include <algorithm>
#include <cmath>

namespace habitmfg {

void validate(const TypeVector& o) {
  if (!std::isfinite(o.mu)) throw DomainError("mu must be finite");
  if (!(o.sigma > 0.0) || !std::isfinite(o.sigma)) throw DomainError("sigma must be positive");
  if (!(o.p > 0.0 && o.p < 1.0)) throw DomainError("p must lie in (0,1)");
}

double merton_rate(const TypeVector& o) {
  const double q = 1.0 - o.p;
  return o.mu * o.mu * o.p / (2.0 * o.sigma * o.sigma * q * q);
}

double merton_fraction(const TypeVector& o) {
  return o.mu / ((1.0 - o.p) * o.sigma * o.sigma);
}

double default_epsilon(double z0) { return std::min(z0 / 2.0, 0.01); }

double effective_epsilon(const HabitSpec& h) {
  return h.epsilon > 0.0 ? h.epsilon : default_epsilon(h.z0);
}

void validate(const HabitSpec& h, Mode mode) {
  if (!(h.T > 0.0)) throw ConfigError("T must be positive");
  if (!(h.x0 > 0.0)) throw ConfigError("x0 must be positive");
  if (!(h.z0 > 0.0)) throw ConfigError("z0 must be positive");
  if (!(h.delta > 0.0)) throw ConfigError("delta must be positive");
  if (mode == Mode::multiplicative) {
    if (!(h.alpha > 0.0 && h.alpha <= 1.0)) throw ConfigError("alpha must be in (0,1]");
    const double eps = effective_epsilon(h);
    if (!(eps > 0.0 && eps < h.z0)) throw ConfigError("epsilon must satisfy 0 < epsilon < z0");
  } else {
    // Addictive consumption floor: wealth must dominate the habit commitment.
    if (!(h.x0 > h.z0 * h.T))
      throw InfeasibleError("x0 must exceed z0*T: initial wealth cannot fund the habit floor");
  }
}

TimeGrid make_grid(double T, std::size_t n_steps) {
  if (!(T > 0.0)) throw DomainError("grid horizon must be positive");
  if (n_steps < 2) throw DomainError("grid needs at least two steps");
  TimeGrid g;
  g.T = T;
  g.n_steps = n_steps;
  g.nodes.resize(n_steps + 1);
  for (std::size_t k = 0; k <= n_steps; ++k)
    g.nodes[k] = T * static_cast<double>(k) / static_cast<double>(n_steps);
  g.nodes.back() = T;
  return g;
}

}  // namespace habitmfg
