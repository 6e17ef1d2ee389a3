// Fixed-point solver for the mean field equilibrium under multiplicative
// habit formation. Unlike the addictive model there is no closed form: the
// habit average is the fixed point of zbar -> habit generated by the mean
// consumption of the best response to zbar, iterated with adaptive damping.

#include "habitmfg/mult_mfe.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "habitmfg/quadrature.hpp"

namespace habitmfg {

MultCoefficient mult_coefficient(const TimeGrid& grid, const TypeVector& o, double alpha,
                                 const std::vector<double>& zbar) {
  validate(o);
  if (zbar.size() != grid.size()) throw DomainError("mult_coefficient: length mismatch with grid");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must be in [0,1]");
  const double a = merton_rate(o);
  if (a * grid.T > 300.0) throw DomainError("merton rate too large for this horizon");

  const std::size_t n = grid.size();
  MultCoefficient out;
  out.q.resize(n);
  const double expo = alpha * o.p / (o.p - 1.0);  // negative
  for (std::size_t k = 0; k < n; ++k) {
    if (!(zbar[k] > 0.0)) throw DomainError("mult_coefficient: habit curve must be positive");
    out.q[k] = std::pow(zbar[k], expo);
  }

  // h(t) = e^{a(T-t)} + int_t^T e^{a(s-t)} q(s) ds, via one cumulative pass.
  // All weights are e^{a * nonnegative}, so the sums carry no cancellation.
  std::vector<double> grown_q(n);
  for (std::size_t k = 0; k < n; ++k) grown_q[k] = std::exp(a * grid.nodes[k]) * out.q[k];
  const std::vector<double> F = cumulative_trapezoid(grown_q, grid);
  out.h.resize(n);
  out.g.resize(n);
  const double qpow = 1.0 - o.p;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = grid.nodes[k];
    const double h = std::exp(a * (grid.T - t)) + std::exp(-a * t) * (F.back() - F[k]);
    out.h[k] = h;
    out.g[k] = std::pow(h, qpow);
  }
  return out;
}

std::vector<double> mult_consumption(const MultCoefficient& coef) {
  std::vector<double> c(coef.q.size());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = coef.q[k] / coef.h[k];
  return c;
}

std::vector<double> expected_wealth(const TimeGrid& grid, const TypeVector& o,
                                    const std::vector<double>& c_star, double x0) {
  if (c_star.size() != grid.size()) throw DomainError("expected_wealth: length mismatch with grid");
  if (!(x0 > 0.0)) throw DomainError("x0 must be positive");
  const double r = o.mu * merton_fraction(o);
  std::vector<double> integrand(c_star.size());
  for (std::size_t k = 0; k < c_star.size(); ++k) integrand[k] = r - c_star[k];
  const std::vector<double> cum = cumulative_trapezoid(integrand, grid);
  std::vector<double> f(c_star.size());
  for (std::size_t k = 0; k < c_star.size(); ++k) f[k] = x0 * std::exp(cum[k]);
  return f;
}

std::vector<double> picard_step_mult(const TimeGrid& grid, const TypeVector& o,
                                     const HabitSpec& habit, const std::vector<double>& zbar) {
  const MultCoefficient coef = mult_coefficient(grid, o, habit.alpha, zbar);
  const std::vector<double> c = mult_consumption(coef);
  const std::vector<double> f = expected_wealth(grid, o, c, habit.x0);
  std::vector<double> flow(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) flow[k] = c[k] * f[k];
  return discounted_habit(grid, habit.delta, habit.z0, flow);
}

namespace {

double sup_diff(const std::vector<double>& a, const std::vector<double>& b, std::size_t upto) {
  double m = 0.0;
  for (std::size_t k = 0; k < upto; ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

}  // namespace

MultMfe solve_mult_mfe(const TimeGrid& grid, const TypeVector& o, const HabitSpec& habit,
                       const MultSolverOptions& opts) {
  validate(o);
  if (!(habit.z0 > 0.0)) throw ConfigError("z0 must be positive");
  if (!(habit.alpha > 0.0 && habit.alpha <= 1.0)) throw ConfigError("alpha must be in (0,1]");
  if (habit.delta < 0.0) throw DomainError("delta must be non-negative");
  const double eps = effective_epsilon(habit);
  if (!(eps > 0.0 && eps < habit.z0)) throw ConfigError("epsilon must satisfy 0 < epsilon < z0");
  if (!(opts.tol > 0.0) || opts.max_iter < 1) throw ConfigError("bad solver options");

  const std::size_t n = grid.size();
  std::vector<double> z = opts.initial;
  if (z.empty()) {
    z.resize(n);
    for (std::size_t k = 0; k < n; ++k) z[k] = habit.z0 * std::exp(-habit.delta * grid.nodes[k]);
  } else if (z.size() != n) {
    throw DomainError("solve_mult_mfe: initial curve length mismatch with grid");
  }

  MultMfe mfe;
  mfe.grid = grid;
  mfe.type = o;
  mfe.habit = habit;
  mfe.pi_star = merton_fraction(o);
  mfe.beta = std::pow(eps, 1.0 / (1.0 - o.p));

  double lambda = opts.damping;
  double prev_resid = -1.0;
  int iter = 0;
  bool converged = false;

  const std::size_t chunks = (opts.mode == MultSolverMode::stitched) ? 8 : 1;
  std::size_t prefix = (opts.mode == MultSolverMode::stitched) ? (n + chunks - 1) / chunks : n;

  while (iter < opts.max_iter) {
    const std::vector<double> mapped = picard_step_mult(grid, o, habit, z);
    ++iter;
    const double resid = sup_diff(mapped, z, n);
    mfe.residual_history.push_back(resid);
    if (resid < opts.tol && prefix >= n) {
      z = mapped;
      converged = true;
      break;
    }
    // While stitching, the frozen tail keeps the global residual pinned, so the
    // damping heuristic listens to the active prefix only.
    const double active = (prefix < n) ? sup_diff(mapped, z, prefix) : resid;
    if (prev_resid >= 0.0 && active > prev_resid)
      lambda = std::max(lambda * 0.5, opts.damping_floor);
    prev_resid = active;
    // Stitched mode only accepts the update on the current prefix of [0,T];
    // once the prefix has settled it is extended until it covers the grid.
    if (prefix < n && active < opts.tol) {
      prefix = std::min(n, prefix + (n + chunks - 1) / chunks);
      prev_resid = -1.0;
      lambda = opts.damping;
    }
    for (std::size_t k = 0; k < prefix; ++k) z[k] += lambda * (mapped[k] - z[k]);
  }

  if (!converged) {
    const double last = mfe.residual_history.empty() ? -1.0 : mfe.residual_history.back();
    throw SolverError("habit fixed point did not converge within " +
                          std::to_string(opts.max_iter) + " sweeps (residual " +
                          std::to_string(last) + ")",
                      last, iter);
  }

  mfe.zbar = std::move(z);
  mfe.iterations = iter;
  MultCoefficient coef = mult_coefficient(grid, o, habit.alpha, mfe.zbar);
  mfe.c_star = mult_consumption(coef);
  mfe.f = expected_wealth(grid, o, mfe.c_star, habit.x0);
  mfe.g = std::move(coef.g);
  mfe.h = std::move(coef.h);
  const std::vector<double> mapped = picard_step_mult(grid, o, habit, mfe.zbar);
  mfe.residual = sup_diff(mapped, mfe.zbar, n);
  return mfe;
}

double mult_value(const MultMfe& mfe, std::size_t k, double x) {
  if (k >= mfe.grid.size()) throw DomainError("mult_value: node out of range");
  if (!(x > 0.0)) throw DomainError("wealth must be positive");
  return std::pow(x, mfe.type.p) * mfe.g[k] / mfe.type.p;
}

}  // namespace habitmfg
