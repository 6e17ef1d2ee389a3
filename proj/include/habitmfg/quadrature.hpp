#pragma once

#include <cstddef>
#include <vector>

#include "habitmfg/types.hpp"

namespace habitmfg {

// Cumulative trapezoid integral along the grid: out[0] = 0 and
// out[k] = out[k-1] + (v[k-1] + v[k]) * dt / 2. Tail integrals over [t_k, T]
// are read off as out.back() - out[k].
void cumulative_trapezoid(const double* values, std::size_t n, double dt, double* out);
std::vector<double> cumulative_trapezoid(const std::vector<double>& values, const TimeGrid& grid);

// Total trapezoid integral over [0, T].
double trapezoid(const std::vector<double>& values, const TimeGrid& grid);

// Habit level generated by a consumption-rate path:
//   Z_k = exp(-delta t_k) * (z0 + int_0^{t_k} delta e^{delta s} C_s ds),
// with the integral discretized by the trapezoid rule.
void discounted_habit(const TimeGrid& grid, double delta, double z0, const double* consumption,
                      double* out);
std::vector<double> discounted_habit(const TimeGrid& grid, double delta, double z0,
                                     const std::vector<double>& consumption);

}  // namespace habitmfg
