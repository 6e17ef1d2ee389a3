#pragma once

#include <cstddef>
#include <vector>

#include "habitmfg/types.hpp"

namespace habitmfg {

// Deterministic value coefficient of the addictive-habit problem along the
// grid. u solves u' = -a u - 1 backward from u(T) = 1 with a = merton_rate,
// and g = u^{1-p}; the marginal-consumption kernel g^{1/(p-1)} equals 1/u.
struct LinearCoefficient {
  std::vector<double> g;
  std::vector<double> u;
};

LinearCoefficient linear_coefficient(const TimeGrid& grid, const TypeVector& o);

// Solved addictive-habit mean field equilibrium. The average habit resolves
// in closed form: zbar_t = z0 + delta * K * int_0^t phi, where
// phi(t) = exp(int_0^t (r - 1/u)) / u(t) with r = mu^2 / ((1-p) sigma^2), and
// K = (x0 - z0 T) / (1 + delta * int_0^T int_0^t phi).
struct LinearMfe {
  TimeGrid grid;
  TypeVector type;
  HabitSpec habit;

  std::vector<double> zbar;      // equilibrium average habit
  std::vector<double> g, u;      // value coefficient and its kernel
  std::vector<double> phi;       // response kernel
  std::vector<double> phi_cum;   // int_0^t phi
  std::vector<double> growth;    // int_0^t (r - 1/u), log-growth of the mean surplus
  std::vector<double> zbar_cum;  // int_0^t zbar
  double K_surplus = 0.0;        // x0 - int_0^T zbar
  double residual = 0.0;         // sup-norm self-map residual of zbar

  // Committed habit consumption over [t_k, T].
  double tail(std::size_t k) const { return zbar_cum.back() - zbar_cum[k]; }
};

LinearMfe solve_linear_mfe(const TimeGrid& grid, const TypeVector& o, const HabitSpec& habit);

// One application of the equilibrium self-map to a trial habit curve:
//   Phi(zbar)(t) = z0 + delta * (x0 - int_0^T zbar) * int_0^t phi.
// Shipped as a cross-check oracle for the closed form.
std::vector<double> picard_map_linear(const TimeGrid& grid, const TypeVector& o,
                                      const HabitSpec& habit, const std::vector<double>& zbar);

struct Feedback {
  double portfolio_fraction = 0.0;  // fraction of wealth in the risky asset
  double consumption_rate = 0.0;    // c = C / x
  double consumption = 0.0;         // consumption flow C
};

// Optimal feedback at grid node k and wealth x; requires x above the
// committed habit consumption tail(k).
Feedback linear_feedback(const LinearMfe& mfe, std::size_t k, double x);

// Value function (1/p) (x - tail)^p g(t_k).
double linear_value(const LinearMfe& mfe, std::size_t k, double x);

// E[Y_t] of the equilibrium surplus process, K_surplus * exp(growth(t)).
std::vector<double> expected_surplus(const LinearMfe& mfe);

}  // namespace habitmfg
