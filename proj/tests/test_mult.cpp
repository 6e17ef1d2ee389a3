#include <cmath>
#include <vector>

#include "doctest.h"
#include "habitmfg/errors.hpp"
#include "habitmfg/mult_mfe.hpp"
#include "habitmfg/quadrature.hpp"
#include "support.hpp"

using namespace habitmfg;

namespace {
const TimeGrid kGrid = make_grid(2.0, 2000);

std::vector<double> node_map(const TimeGrid& grid, double (*f)(double)) {
  std::vector<double> out(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) out[k] = f(grid.nodes[k]);
  return out;
}
}  // namespace

TEST_CASE("kernel meets its terminal condition") {
  for (const auto& cs : testsup::all_mult_cases()) {
    auto mfe = solve_mult_mfe(kGrid, cs.type, cs.habit, {});
    CHECK(mfe.h.back() == 1.0);
    CHECK(mfe.g.back() == 1.0);
  }
}

TEST_CASE("constant comparison level gives the merton annuity") {
  auto o = testsup::typ(0.2, 0.6, 0.5);
  const double a = merton_rate(o);
  std::vector<double> flat(kGrid.size(), 1.0);
  auto coef = mult_coefficient(kGrid, o, 0.7, flat);
  for (std::size_t k = 0; k < kGrid.size(); k += 100) {
    double e = std::exp(a * (kGrid.T - kGrid.nodes[k]));
    double want = e + (e - 1.0) / a;
    CHECK(std::fabs(coef.h[k] - want) < 1e-6);
    CHECK(coef.q[k] == 1.0);
  }
}

TEST_CASE("exponential comparison level gives an integrable closed form") {
  auto o = testsup::typ(0.2, 0.2, 0.4);
  const double alpha = 0.8, p = o.p, a = merton_rate(o);
  const double gamma = alpha * p / (p - 1.0);
  auto zbar = node_map(kGrid, [](double t) { return std::exp(t); });
  auto coef = mult_coefficient(kGrid, o, alpha, zbar);
  auto anti = [&](double s) { return std::expm1((gamma + a) * s) / (gamma + a); };
  for (std::size_t k = 0; k < kGrid.size(); k += 100) {
    const double t = kGrid.nodes[k];
    double want = std::exp(a * (kGrid.T - t)) + std::exp(-a * t) * (anti(kGrid.T) - anti(t));
    CHECK(std::fabs(coef.h[k] - want) / want < 5e-6);
  }
}

TEST_CASE("zero risk premium reduces the kernel to plain integration") {
  auto o = testsup::typ(0.0, 0.2, 0.4);
  const double alpha = 0.8, gamma = alpha * o.p / (o.p - 1.0);
  auto zbar = node_map(kGrid, [](double t) { return std::exp(t); });
  auto coef = mult_coefficient(kGrid, o, alpha, zbar);
  for (std::size_t k = 0; k < kGrid.size(); k += 200) {
    const double t = kGrid.nodes[k];
    double want = 1.0 + (std::exp(gamma * kGrid.T) - std::exp(gamma * t)) / gamma;
    CHECK(std::fabs(coef.h[k] - want) / want < 5e-6);
  }
}

TEST_CASE("consumption rate ends on the forcing and respects its bound") {
  for (const auto& cs : testsup::all_mult_cases()) {
    auto mfe = solve_mult_mfe(kGrid, cs.type, cs.habit, {});
    const double p = cs.type.p, alpha = cs.habit.alpha;
    double q_T = std::pow(mfe.zbar.back(), alpha * p / (p - 1.0));
    CHECK(mfe.c_star.back() == doctest::Approx(q_T).epsilon(1e-14));

    // h >= 1, so the rate never exceeds the forcing at its largest
    double bound = std::pow(cs.habit.z0 * std::exp(-cs.habit.delta * kGrid.T),
                            alpha * p / (p - 1.0));
    for (double c : mfe.c_star) CHECK(c <= bound * (1.0 + 1e-12));
  }
}

TEST_CASE("a vanishing comparison exponent removes the interaction") {
  auto o = testsup::typ(0.2, 0.2, 0.5);
  auto zbar = node_map(kGrid, [](double t) { return 10.0 * std::exp(-0.1 * t); });
  auto coef = mult_coefficient(kGrid, o, 1e-14, zbar);
  for (double q : coef.q) CHECK(std::fabs(q - 1.0) < 1e-12);
}

TEST_CASE("solved habit is a fixed point with the promised floors") {
  for (const auto& cs : testsup::all_mult_cases()) {
    auto mfe = solve_mult_mfe(kGrid, cs.type, cs.habit, {});
    CHECK(mfe.residual < 1e-8);
    CHECK(mfe.iterations <= 200);
    auto mapped = picard_step_mult(kGrid, cs.type, cs.habit, mfe.zbar);
    CHECK(testsup::sup_diff(mapped, mfe.zbar) < 2e-8);
    for (std::size_t k = 0; k < kGrid.size(); ++k) {
      CHECK(mfe.zbar[k] >= mfe.beta * (1.0 - 1e-13));
      CHECK(mfe.zbar[k] >=
            cs.habit.z0 * std::exp(-cs.habit.delta * kGrid.nodes[k]) * (1.0 - 1e-13));
    }
  }
}

TEST_CASE("the fixed point does not depend on the start") {
  for (const auto& cs : {testsup::mult_habit_cases()[2], testsup::mult_competition_cases()[0]}) {
    auto a = solve_mult_mfe(kGrid, cs.type, cs.habit, {});
    MultSolverOptions opts;
    opts.initial.assign(kGrid.size(), cs.habit.z0);
    auto b = solve_mult_mfe(kGrid, cs.type, cs.habit, opts);
    CHECK(testsup::sup_diff(a.zbar, b.zbar) < 1e-7);
  }
}

TEST_CASE("vanishing memory keeps the comparison level at its start") {
  auto cs = testsup::mult_competition_cases()[2];
  cs.habit.delta = 1e-12;
  auto mfe = solve_mult_mfe(kGrid, cs.type, cs.habit, {});
  CHECK(testsup::sup_diff(mfe.zbar, std::vector<double>(kGrid.size(), cs.habit.z0)) < 1e-9);
}

TEST_CASE("rich initial habit dips before it recovers") {
  for (const auto& cs : testsup::mult_habit_cases()) {
    auto mfe = solve_mult_mfe(kGrid, cs.type, cs.habit, {});
    std::size_t argmin = 0;
    for (std::size_t k = 1; k < kGrid.size(); ++k)
      if (mfe.zbar[k] < mfe.zbar[argmin]) argmin = k;
    CHECK(argmin > 0);
    CHECK(argmin < kGrid.size() - 1);
    CHECK(mfe.zbar[0] - mfe.zbar[argmin] > 1e-3 * cs.habit.z0);
    CHECK(mfe.zbar.back() > mfe.zbar[argmin]);
    for (std::size_t k = 1; k <= argmin; ++k) CHECK(mfe.zbar[k] <= mfe.zbar[k - 1] + 1e-12);
    for (std::size_t k = argmin + 1; k < kGrid.size(); ++k)
      CHECK(mfe.zbar[k] >= mfe.zbar[k - 1] - 1e-12);
  }
}

TEST_CASE("stitched sweeps land on the damped answer") {
  for (const auto& cs : {testsup::mult_risk_cases()[1], testsup::mult_competition_cases()[1]}) {
    auto damped = solve_mult_mfe(kGrid, cs.type, cs.habit, {});
    MultSolverOptions opts;
    opts.mode = MultSolverMode::stitched;
    auto stitched = solve_mult_mfe(kGrid, cs.type, cs.habit, opts);
    CHECK(testsup::sup_diff(damped.zbar, stitched.zbar) < 1e-7);
  }
}

TEST_CASE("residuals contract sweep over sweep") {
  auto cs = testsup::mult_risk_cases()[1];
  auto mfe = solve_mult_mfe(kGrid, cs.type, cs.habit, {});
  REQUIRE(mfe.residual_history.size() >= 2);
  for (std::size_t k = 1; k < mfe.residual_history.size(); ++k)
    CHECK(mfe.residual_history[k] <= mfe.residual_history[k - 1] * 1.05 + 1e-14);
  CHECK(mfe.residual_history.back() < mfe.residual_history.front());
}

TEST_CASE("full comparison strength linearizes the habit recursion") {
  auto cs = testsup::mult_risk_cases()[1];  // alpha = 1
  auto mfe = solve_mult_mfe(kGrid, cs.type, cs.habit, {});
  const double p = cs.type.p, delta = cs.habit.delta;
  const double kappa = cs.habit.alpha * p * delta / (1.0 - p);
  std::vector<double> rate(kGrid.size());
  for (std::size_t k = 0; k < kGrid.size(); ++k)
    rate[k] = delta / (1.0 - p) * (mfe.f[k] / mfe.h[k]) *
              std::exp((delta + kappa) * kGrid.nodes[k]);
  auto lifted = cumulative_trapezoid(rate, kGrid);
  double worst = 0.0;
  for (std::size_t k = 0; k < kGrid.size(); ++k) {
    double hat = std::pow(cs.habit.z0, 1.0 / (1.0 - p)) + lifted[k];
    double back = std::pow(hat, 1.0 - p) * std::exp(-delta * kGrid.nodes[k]);
    worst = std::max(worst, std::fabs(back - mfe.zbar[k]) / mfe.zbar[k]);
  }
  CHECK(worst < 1e-5);
}

TEST_CASE("value scales with the power of wealth") {
  auto cs = testsup::mult_competition_cases()[1];
  auto mfe = solve_mult_mfe(kGrid, cs.type, cs.habit, {});
  const double p = cs.type.p;
  for (std::size_t k : {std::size_t(0), kGrid.size() / 2, kGrid.size() - 1}) {
    CHECK(mult_value(mfe, k, 2.0 * 1.3) ==
          doctest::Approx(std::pow(2.0, p) * mult_value(mfe, k, 1.3)).epsilon(1e-13));
  }
  CHECK(mult_value(mfe, kGrid.size() - 1, 1.7) ==
        doctest::Approx(std::pow(1.7, p) / p).epsilon(1e-14));
  CHECK_THROWS_AS(mult_value(mfe, 0, 0.0), DomainError);
}

TEST_CASE("value function satisfies the dynamic programming equation") {
  for (const auto& cs : {testsup::mult_risk_cases()[1], testsup::mult_competition_cases()[1]}) {
    auto mfe = solve_mult_mfe(kGrid, cs.type, cs.habit, {});
    const std::size_t m = kGrid.size();
    for (std::size_t k : {m / 5, m / 2, 4 * m / 5})
      for (double x : {0.5, 1.0, 3.0}) CHECK(testsup::hjb_residual_mult(mfe, k, x) < 1e-5);
  }
}

TEST_CASE("mean wealth under zero risk premium decays with consumption") {
  auto o = testsup::typ(0.0, 0.5, 0.3);
  std::vector<double> c(kGrid.size(), 0.7);
  auto f = expected_wealth(kGrid, o, c, 3.0);
  CHECK(f[0] == 3.0);
  for (std::size_t k = 0; k < kGrid.size(); k += 250)
    CHECK(f[k] == doctest::Approx(3.0 * std::exp(-0.7 * kGrid.nodes[k])).epsilon(1e-13));
}

TEST_CASE("exhausting the sweep budget reports the residual") {
  auto cs = testsup::mult_risk_cases()[0];
  MultSolverOptions opts;
  opts.tol = 1e-16;
  opts.max_iter = 3;
  try {
    solve_mult_mfe(kGrid, cs.type, cs.habit, opts);
    FAIL("expected SolverError");
  } catch (const SolverError& e) {
    CHECK(e.iterations == 3);
    CHECK(e.residual > 0.0);
    CHECK(std::string(e.what()).find("did not converge") != std::string::npos);
  }
}
