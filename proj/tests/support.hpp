#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "habitmfg/linear_mfe.hpp"
#include "habitmfg/mult_mfe.hpp"
#include "habitmfg/types.hpp"

// Shared fixtures: the benchmark parameter sets exercised across the tests,
// a Runge-Kutta integrator used as an independent ODE oracle, and finite
// difference evaluators for the dynamic programming equations.
namespace testsup {

inline habitmfg::TypeVector typ(double mu, double sigma, double p) {
  habitmfg::TypeVector o;
  o.mu = mu;
  o.sigma = sigma;
  o.p = p;
  return o;
}

inline habitmfg::HabitSpec hab(double T, double x0, double z0, double delta,
                               double alpha = 1.0) {
  habitmfg::HabitSpec h;
  h.T = T;
  h.x0 = x0;
  h.z0 = z0;
  h.delta = delta;
  h.alpha = alpha;
  return h;
}

struct SweepCase {
  habitmfg::TypeVector type;
  habitmfg::HabitSpec habit;
  double x_eval = 1.0;
};

// addictive habit, risk aversion swept
inline std::vector<SweepCase> linear_risk_cases() {
  std::vector<SweepCase> out;
  for (double p : {0.2, 0.3, 0.5}) out.push_back({typ(0.2, 0.6, p), hab(2.0, 5.0, 1.0, 0.1), 5.0});
  return out;
}

// multiplicative habit, risk aversion swept
inline std::vector<SweepCase> mult_risk_cases() {
  std::vector<SweepCase> out;
  for (double p : {0.2, 0.5, 0.7}) out.push_back({typ(0.2, 0.2, p), hab(2.0, 5.0, 10.0, 0.1), 1.0});
  return out;
}

// addictive habit, habit persistence swept
inline std::vector<SweepCase> linear_habit_cases() {
  std::vector<SweepCase> out;
  for (double d : {0.1, 0.2, 0.3}) out.push_back({typ(0.1, 0.1, 0.1), hab(2.0, 3.0, 0.5, d), 2.0});
  return out;
}

// multiplicative habit, habit persistence swept
inline std::vector<SweepCase> mult_habit_cases() {
  std::vector<SweepCase> out;
  for (double d : {0.1, 0.2, 0.3}) out.push_back({typ(0.2, 0.2, 0.4), hab(2.0, 3.0, 10.0, d), 1.0});
  return out;
}

// multiplicative habit, comparison strength swept
inline std::vector<SweepCase> mult_competition_cases() {
  std::vector<SweepCase> out;
  for (double a : {0.5, 0.8, 1.0})
    out.push_back({typ(0.1, 0.8, 0.5), hab(2.0, 3.0, 0.2, 0.1, a), 1.0});
  return out;
}

inline std::vector<SweepCase> all_linear_cases() {
  auto out = linear_risk_cases();
  for (const auto& c : linear_habit_cases()) out.push_back(c);
  return out;
}

inline std::vector<SweepCase> all_mult_cases() {
  auto out = mult_risk_cases();
  for (const auto& c : mult_habit_cases()) out.push_back(c);
  for (const auto& c : mult_competition_cases()) out.push_back(c);
  return out;
}

// classic fourth order steps from y(T) backward to y(0) on the grid nodes
inline std::vector<double> rk4_backward(const std::function<double(double, double)>& f,
                                        const habitmfg::TimeGrid& grid, double y_terminal) {
  std::vector<double> y(grid.size());
  y.back() = y_terminal;
  const double h = -grid.dt();
  for (std::size_t k = grid.size() - 1; k > 0; --k) {
    const double t = grid.nodes[k], v = y[k];
    const double k1 = f(t, v);
    const double k2 = f(t + 0.5 * h, v + 0.5 * h * k1);
    const double k3 = f(t + 0.5 * h, v + 0.5 * h * k2);
    const double k4 = f(t + h, v + h * k3);
    y[k - 1] = v + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y;
}

// iterate the habit response map to a fixed point, independent of the
// closed-form constant used by the solver
inline std::vector<double> picard_fixed_point_linear(const habitmfg::TimeGrid& grid,
                                                     const habitmfg::TypeVector& o,
                                                     const habitmfg::HabitSpec& habit,
                                                     std::vector<double> z,
                                                     int max_iter = 600,
                                                     double tol = 1e-13) {
  for (int it = 0; it < max_iter; ++it) {
    auto next = habitmfg::picard_map_linear(grid, o, habit, z);
    double d = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) d = std::max(d, std::fabs(next[k] - z[k]));
    z = std::move(next);
    if (d < tol) break;
  }
  return z;
}

// relative residual of the dynamic programming equation at an interior node,
// central differences in both time and wealth
inline double hjb_residual_linear(const habitmfg::LinearMfe& mfe, std::size_t k, double x) {
  const double dt = mfe.grid.dt();
  const double p = mfe.type.p, mu = mfe.type.mu, sigma = mfe.type.sigma;
  const double hx = 1e-4 * x;
  auto V = [&](std::size_t j, double xx) { return habitmfg::linear_value(mfe, j, xx); };
  const double vt = (V(k + 1, x) - V(k - 1, x)) / (2.0 * dt);
  const double vx = (V(k, x + hx) - V(k, x - hx)) / (2.0 * hx);
  const double vxx = (V(k, x + hx) - 2.0 * V(k, x) + V(k, x - hx)) / (hx * hx);
  const double quad = mu * mu / (2.0 * sigma * sigma) * vx * vx / vxx;
  const double cons = (1.0 - p) / p * std::pow(vx, p / (p - 1.0));
  const double res = vt - quad - mfe.zbar[k] * vx + cons;
  const double scale =
      std::fabs(vt) + std::fabs(quad) + std::fabs(mfe.zbar[k] * vx) + std::fabs(cons);
  return std::fabs(res) / std::max(scale, 1e-12);
}

inline double hjb_residual_mult(const habitmfg::MultMfe& mfe, std::size_t k, double x) {
  const double dt = mfe.grid.dt();
  const double p = mfe.type.p, mu = mfe.type.mu, sigma = mfe.type.sigma;
  const double alpha = mfe.habit.alpha;
  const double hx = 1e-4 * x;
  auto V = [&](std::size_t j, double xx) { return habitmfg::mult_value(mfe, j, xx); };
  const double vt = (V(k + 1, x) - V(k - 1, x)) / (2.0 * dt);
  const double vx = (V(k, x + hx) - V(k, x - hx)) / (2.0 * hx);
  const double vxx = (V(k, x + hx) - 2.0 * V(k, x) + V(k, x - hx)) / (hx * hx);
  const double q = std::pow(mfe.zbar[k], alpha * p / (p - 1.0));
  const double quad = mu * mu / (2.0 * sigma * sigma) * vx * vx / vxx;
  const double cons = (1.0 - p) / p * q * std::pow(vx, p / (p - 1.0));
  const double res = vt - quad + cons;
  const double scale = std::fabs(vt) + std::fabs(quad) + std::fabs(cons);
  return std::fabs(res) / std::max(scale, 1e-12);
}

inline double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::fabs(a[k] - b[k]));
  return d;
}

}  // namespace testsup
