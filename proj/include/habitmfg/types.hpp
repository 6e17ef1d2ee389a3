#pragma once

#include <cstddef>
#include <vector>

#include "habitmfg/errors.hpp"

namespace habitmfg {

enum class Mode { linear, multiplicative };

// Market and preference parameters of a single agent: asset drift mu, asset
// volatility sigma > 0, and power-utility exponent p in (0,1).
struct TypeVector {
  double mu = 0.0;
  double sigma = 1.0;
  double p = 0.5;
};

void validate(const TypeVector& o);

// Growth rate of the habit-free investment-consumption problem,
//   a = mu^2 p / (2 sigma^2 (1-p)^2).
double merton_rate(const TypeVector& o);

// Constant optimal risky fraction mu / ((1-p) sigma^2).
double merton_fraction(const TypeVector& o);

// Habit parameters shared by the whole population. delta is the memory decay
// of the habit average, alpha the strength of the multiplicative comparison,
// epsilon the positive habit floor parameter used by the multiplicative
// solver (0 requests default_epsilon(z0)).
struct HabitSpec {
  double x0 = 1.0;     // common initial wealth
  double z0 = 1.0;     // common initial habit level
  double delta = 0.1;  // habit decay rate
  double alpha = 1.0;  // multiplicative habit exponent, in (0,1]
  double T = 1.0;      // horizon
  double epsilon = 0.0;
};

double default_epsilon(double z0);
double effective_epsilon(const HabitSpec& h);
void validate(const HabitSpec& h, Mode mode);

// Uniform grid 0 = t_0 < ... < t_N = T with N = n_steps intervals.
struct TimeGrid {
  double T = 1.0;
  std::size_t n_steps = 1;
  std::vector<double> nodes;

  double dt() const { return T / static_cast<double>(n_steps); }
  std::size_t size() const { return nodes.size(); }
};

TimeGrid make_grid(double T, std::size_t n_steps);

}  // namespace habitmfg
