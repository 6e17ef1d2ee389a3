#include "habitmfg/quadrature.hpp"

#include <cmath>

namespace habitmfg {

void cumulative_trapezoid(const double* values, std::size_t n, double dt, double* out) {
  if (n == 0) return;
  out[0] = 0.0;
  const double half = 0.5 * dt;
  for (std::size_t k = 1; k < n; ++k) out[k] = out[k - 1] + (values[k - 1] + values[k]) * half;
}

std::vector<double> cumulative_trapezoid(const std::vector<double>& values, const TimeGrid& grid) {
  if (values.size() != grid.size()) throw DomainError("cumulative_trapezoid: length mismatch with grid");
  std::vector<double> out(values.size());
  cumulative_trapezoid(values.data(), values.size(), grid.dt(), out.data());
  return out;
}

double trapezoid(const std::vector<double>& values, const TimeGrid& grid) {
  if (values.size() != grid.size()) throw DomainError("trapezoid: length mismatch with grid");
  double acc = 0.0;
  for (std::size_t k = 1; k < values.size(); ++k) acc += values[k - 1] + values[k];
  return acc * 0.5 * grid.dt();
}

void discounted_habit(const TimeGrid& grid, double delta, double z0, const double* consumption,
                      double* out) {
  const std::size_t n = grid.size();
  const double dt = grid.dt();
  double acc = 0.0;
  double w_prev = delta * consumption[0];  // delta e^{delta*0} C_0
  out[0] = z0;
  for (std::size_t k = 1; k < n; ++k) {
    const double w = delta * std::exp(delta * grid.nodes[k]) * consumption[k];
    acc += 0.5 * dt * (w_prev + w);
    out[k] = std::exp(-delta * grid.nodes[k]) * (z0 + acc);
    w_prev = w;
  }
}

std::vector<double> discounted_habit(const TimeGrid& grid, double delta, double z0,
                                     const std::vector<double>& consumption) {
  if (consumption.size() != grid.size())
    throw DomainError("discounted_habit: length mismatch with grid");
  std::vector<double> out(consumption.size());
  discounted_habit(grid, delta, z0, consumption.data(), out.data());
  return out;
}

}  // namespace habitmfg
