#pragma once

#include <cstddef>
#include <vector>

#include "habitmfg/types.hpp"

namespace habitmfg {

// Value coefficient of the multiplicative-habit problem for a given habit
// curve. h solves h' = -a h - q(t) backward from h(T) = 1 with forcing
// q(t) = zbar(t)^{alpha p / (p-1)} and a = merton_rate; g = h^{1-p} and the
// consumption kernel g^{1/(p-1)} equals 1/h. With q constant this is the
// classic Merton annuity, so h >= 1 and the value sits above terminal utility.
struct MultCoefficient {
  std::vector<double> g;
  std::vector<double> h;
  std::vector<double> q;  // forcing zbar^{alpha p/(p-1)}
};

MultCoefficient mult_coefficient(const TimeGrid& grid, const TypeVector& o, double alpha,
                                 const std::vector<double>& zbar);

// Optimal consumption rate c*(t) = q(t) / h(t); deterministic in this model.
std::vector<double> mult_consumption(const MultCoefficient& coef);

// Mean optimal wealth f(t) = x0 exp(int_0^t (r - c*(s)) ds) with
// r = mu^2 / ((1-p) sigma^2).
std::vector<double> expected_wealth(const TimeGrid& grid, const TypeVector& o,
                                    const std::vector<double>& c_star, double x0);

// One sweep of the equilibrium map: the habit generated by the mean
// consumption flow c*(t) f(t) of the best response to `zbar`.
std::vector<double> picard_step_mult(const TimeGrid& grid, const TypeVector& o,
                                     const HabitSpec& habit, const std::vector<double>& zbar);

enum class MultSolverMode {
  damped,    // damped fixed-point iteration of the full curve
  stitched,  // accept updates on a growing prefix of [0,T], then polish globally
};

struct MultSolverOptions {
  double tol = 1e-8;
  int max_iter = 200;
  double damping = 1.0;  // step length; halved whenever the residual grows
  double damping_floor = 0.125;
  MultSolverMode mode = MultSolverMode::damped;
  std::vector<double> initial;  // optional start; default z0 e^{-delta t}
};

struct MultMfe {
  TimeGrid grid;
  TypeVector type;
  HabitSpec habit;

  std::vector<double> zbar;    // equilibrium average habit
  std::vector<double> g, h;    // value coefficient and its kernel
  std::vector<double> c_star;  // optimal consumption rate
  std::vector<double> f;       // mean optimal wealth
  double pi_star = 0.0;        // constant optimal risky fraction
  double beta = 0.0;           // habit floor epsilon^{1/(1-p)}
  int iterations = 0;
  double residual = 0.0;                 // final sup-norm fixed-point residual
  std::vector<double> residual_history;  // residual per sweep
};

MultMfe solve_mult_mfe(const TimeGrid& grid, const TypeVector& o, const HabitSpec& habit,
                       const MultSolverOptions& opts = {});

// Value function x^p g(t_k) / p for x > 0.
double mult_value(const MultMfe& mfe, std::size_t k, double x);

}  // namespace habitmfg
