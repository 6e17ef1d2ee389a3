// Closed-form mean field equilibrium under addictive habit formation.
// The equilibrium habit average is affine in the cumulative response kernel,
// so the fixed point resolves explicitly and no iteration is needed; the
// Picard map is kept only as a cross-check oracle.

#include "habitmfg/linear_mfe.hpp"

#include <cmath>

#include "habitmfg/quadrature.hpp"

namespace habitmfg {

namespace {

// Shared deterministic ingredients of the solve and the Picard map.
struct Kernel {
  LinearCoefficient coef;
  std::vector<double> growth;   // int_0^t (r - 1/u)
  std::vector<double> phi;      // e^{growth} / u
  std::vector<double> phi_cum;  // int_0^t phi
  double double_int = 0.0;      // int_0^T phi_cum
};

Kernel build_kernel(const TimeGrid& grid, const TypeVector& o) {
  Kernel k;
  k.coef = linear_coefficient(grid, o);
  const double r = o.mu * merton_fraction(o);
  const std::size_t n = grid.size();
  std::vector<double> integrand(n);
  for (std::size_t i = 0; i < n; ++i) integrand[i] = r - 1.0 / k.coef.u[i];
  k.growth = cumulative_trapezoid(integrand, grid);
  k.phi.resize(n);
  for (std::size_t i = 0; i < n; ++i) k.phi[i] = std::exp(k.growth[i]) / k.coef.u[i];
  k.phi_cum = cumulative_trapezoid(k.phi, grid);
  k.double_int = trapezoid(k.phi_cum, grid);
  return k;
}

}  // namespace

LinearCoefficient linear_coefficient(const TimeGrid& grid, const TypeVector& o) {
  validate(o);
  const double a = merton_rate(o);
  if (a * grid.T > 300.0) throw DomainError("merton rate too large for this horizon");
  LinearCoefficient out;
  const std::size_t n = grid.size();
  out.u.resize(n);
  out.g.resize(n);
  const double q = 1.0 - o.p;
  for (std::size_t k = 0; k < n; ++k) {
    const double tau = grid.T - grid.nodes[k];
    // u = e^{a tau} + (e^{a tau} - 1)/a, written with expm1 so the a -> 0
    // limit u = 1 + tau is reached without cancellation.
    const double u = (a > 0.0) ? std::exp(a * tau) + std::expm1(a * tau) / a : 1.0 + tau;
    out.u[k] = u;
    out.g[k] = std::pow(u, q);
  }
  return out;
}

LinearMfe solve_linear_mfe(const TimeGrid& grid, const TypeVector& o, const HabitSpec& habit) {
  validate(o);
  if (!(habit.x0 > habit.z0 * grid.T))
    throw InfeasibleError("x0 must exceed z0*T: initial wealth cannot fund the habit floor");
  if (habit.delta < 0.0) throw DomainError("delta must be non-negative");

  Kernel k = build_kernel(grid, o);

  LinearMfe mfe;
  mfe.grid = grid;
  mfe.type = o;
  mfe.habit = habit;
  mfe.g = std::move(k.coef.g);
  mfe.u = std::move(k.coef.u);
  mfe.growth = std::move(k.growth);
  mfe.phi = std::move(k.phi);
  mfe.phi_cum = std::move(k.phi_cum);

  mfe.K_surplus = (habit.x0 - habit.z0 * grid.T) / (1.0 + habit.delta * k.double_int);
  const std::size_t n = grid.size();
  mfe.zbar.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    mfe.zbar[i] = habit.z0 + habit.delta * mfe.K_surplus * mfe.phi_cum[i];
  mfe.zbar_cum = cumulative_trapezoid(mfe.zbar, grid);

  // Self-map residual; with the closed form this is rounding noise.
  const std::vector<double> mapped = picard_map_linear(grid, o, habit, mfe.zbar);
  double resid = 0.0;
  for (std::size_t i = 0; i < n; ++i) resid = std::max(resid, std::abs(mapped[i] - mfe.zbar[i]));
  mfe.residual = resid;
  return mfe;
}

std::vector<double> picard_map_linear(const TimeGrid& grid, const TypeVector& o,
                                      const HabitSpec& habit, const std::vector<double>& zbar) {
  if (zbar.size() != grid.size()) throw DomainError("picard_map_linear: length mismatch with grid");
  Kernel k = build_kernel(grid, o);
  const double surplus = habit.x0 - trapezoid(zbar, grid);
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    out[i] = habit.z0 + habit.delta * surplus * k.phi_cum[i];
  return out;
}

Feedback linear_feedback(const LinearMfe& mfe, std::size_t k, double x) {
  if (k >= mfe.grid.size()) throw DomainError("linear_feedback: node out of range");
  const double tail = mfe.tail(k);
  if (!(x > tail)) throw DomainError("wealth must exceed the committed habit consumption");
  Feedback f;
  const double surplus = x - tail;
  f.portfolio_fraction = merton_fraction(mfe.type) * surplus / x;
  f.consumption = mfe.zbar[k] + surplus / mfe.u[k];
  f.consumption_rate = f.consumption / x;
  return f;
}

double linear_value(const LinearMfe& mfe, std::size_t k, double x) {
  if (k >= mfe.grid.size()) throw DomainError("linear_value: node out of range");
  const double tail = mfe.tail(k);
  if (!(x > tail)) throw DomainError("wealth must exceed the committed habit consumption");
  return std::pow(x - tail, mfe.type.p) * mfe.g[k] / mfe.type.p;
}

std::vector<double> expected_surplus(const LinearMfe& mfe) {
  std::vector<double> out(mfe.grid.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = mfe.K_surplus * std::exp(mfe.growth[i]);
  return out;
}

}  // namespace habitmfg
