#include <cmath>
#include <cstdlib>
#include <vector>

#include "doctest.h"
#include "habitmfg/errors.hpp"
#include "habitmfg/population.hpp"
#include "habitmfg/quadrature.hpp"
#include "habitmfg/rng.hpp"
#include "habitmfg/stats.hpp"
#include "habitmfg/types.hpp"
#include "support.hpp"

using namespace habitmfg;

TEST_CASE("grid nodes are uniform and hit the endpoints") {
  TimeGrid grid = make_grid(2.0, 4);
  REQUIRE(grid.size() == 5);
  CHECK(grid.nodes[0] == 0.0);
  CHECK(grid.nodes[2] == 1.0);
  CHECK(grid.nodes.back() == 2.0);
  CHECK(grid.dt() == 0.5);
  CHECK_THROWS_AS(make_grid(0.0, 10), DomainError);
  CHECK_THROWS_AS(make_grid(1.0, 1), DomainError);
}

TEST_CASE("trapezoid rule is exact on affine integrands") {
  TimeGrid grid = make_grid(2.0, 400);
  std::vector<double> flat(grid.size(), 3.0);
  auto cum = cumulative_trapezoid(flat, grid);
  CHECK(cum.back() == doctest::Approx(6.0).epsilon(1e-14));

  std::vector<double> ramp(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) ramp[k] = grid.nodes[k];
  CHECK(trapezoid(ramp, grid) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("trapezoid rule converges on smooth integrands") {
  TimeGrid grid = make_grid(1.0, 2000);
  std::vector<double> v(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) v[k] = std::exp(grid.nodes[k]);
  CHECK(std::fabs(trapezoid(v, grid) - std::expm1(1.0)) < 1e-7);
}

TEST_CASE("discounted habit of constant consumption has a closed form") {
  TimeGrid grid = make_grid(2.0, 1000);
  const double delta = 0.3, z0 = 1.0, c = 4.0;
  std::vector<double> cons(grid.size(), c);
  auto z = discounted_habit(grid, delta, z0, cons);
  CHECK(z[0] == z0);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    double want = c + (z0 - c) * std::exp(-delta * grid.nodes[k]);
    CHECK(std::fabs(z[k] - want) < 1e-6);
  }
}

TEST_CASE("discounted habit with vanishing memory stays put") {
  TimeGrid grid = make_grid(2.0, 100);
  std::vector<double> cons(grid.size(), 7.0);
  auto z = discounted_habit(grid, 0.0, 2.5, cons);
  for (double v : z) CHECK(v == 2.5);
}

TEST_CASE("merton quantities") {
  CHECK(merton_rate(testsup::typ(0.2, 0.6, 0.5)) == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
  CHECK(merton_rate(testsup::typ(0.2, 0.2, 0.5)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(merton_rate(testsup::typ(0.0, 0.4, 0.3)) == 0.0);
  // invariant under joint scaling of drift and volatility
  CHECK(merton_rate(testsup::typ(0.74, 1.11, 0.3)) ==
        doctest::Approx(merton_rate(testsup::typ(0.2, 0.3, 0.3))).epsilon(1e-13));
  CHECK(merton_fraction(testsup::typ(0.2, 0.6, 0.5)) ==
        doctest::Approx(10.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("type and habit validation") {
  CHECK_NOTHROW(validate(testsup::typ(0.2, 0.6, 0.5)));
  CHECK_THROWS_AS(validate(testsup::typ(0.2, 0.0, 0.5)), DomainError);
  CHECK_THROWS_AS(validate(testsup::typ(0.2, 0.6, 1.0)), DomainError);
  CHECK_THROWS_AS(validate(testsup::typ(0.2, 0.6, 0.0)), DomainError);

  CHECK_NOTHROW(validate(testsup::hab(2.0, 5.0, 1.0, 0.1), Mode::linear));
  CHECK_THROWS_AS(validate(testsup::hab(2.0, 1.0, 1.0, 0.1), Mode::linear), InfeasibleError);
  CHECK_THROWS_WITH_AS(validate(testsup::hab(2.0, 5.0, 1.0, 0.1, 1.5), Mode::multiplicative),
                       "alpha must be in (0,1]", ConfigError);
  CHECK_THROWS_AS(validate(testsup::hab(0.0, 5.0, 1.0, 0.1), Mode::linear), ConfigError);
}

TEST_CASE("default habit floor sits below the initial habit") {
  CHECK(effective_epsilon(testsup::hab(2.0, 5.0, 10.0, 0.1)) == doctest::Approx(0.01));
  CHECK(effective_epsilon(testsup::hab(2.0, 5.0, 0.01, 0.1)) == doctest::Approx(0.005));
  auto h = testsup::hab(2.0, 5.0, 10.0, 0.1);
  h.epsilon = 0.25;
  CHECK(effective_epsilon(h) == 0.25);
}

TEST_CASE("gaussian streams are reproducible and separated") {
  GaussianStream a(42, stream_index(3, 7));
  GaussianStream b(42, stream_index(3, 7));
  GaussianStream c(42, stream_index(3, 8));
  for (int i = 0; i < 64; ++i) CHECK(a.next() == b.next());
  CHECK(a.counter() == 64);
  bool any_diff = false;
  GaussianStream a2(42, stream_index(3, 7));
  for (int i = 0; i < 64 && !any_diff; ++i) any_diff = a2.next() != c.next();
  CHECK(any_diff);
}

TEST_CASE("gaussian draws have standard moments") {
  auto x = gaussian_draws(9001, 5, 1000000);
  double sum = 0.0, sq = 0.0;
  for (double v : x) {
    sum += v;
    sq += v * v;
  }
  double mean = sum / x.size();
  double var = sq / x.size() - mean * mean;
  CHECK(std::fabs(mean) < 4e-3);
  CHECK(std::fabs(var - 1.0) < 1e-2);
}

TEST_CASE("homogeneous populations copy the base type") {
  auto pop = sample_population(testsup::typ(0.2, 0.6, 0.5), 8, PerturbScheme::homogeneous, 0.7, 1);
  REQUIRE(pop.size() == 8);
  for (const auto& o : pop.agents) {
    CHECK(o.mu == 0.2);
    CHECK(o.sigma == 0.6);
    CHECK(o.p == 0.5);
  }
}

TEST_CASE("perturbations shrink like the square root of the population") {
  auto base = testsup::typ(0.2, 0.6, 0.5);
  auto dev = [&](std::size_t n) {
    auto pop = sample_population(base, n, PerturbScheme::shrinking, 0.5, 1);
    double d = 0.0;
    for (const auto& o : pop.agents) d = std::max(d, std::fabs(o.mu - base.mu));
    return d;
  };
  double d100 = dev(100), d10000 = dev(10000);
  CHECK(d100 <= 0.5 / 10.0 + 1e-15);
  CHECK(d10000 <= 0.5 / 100.0 + 1e-15);
  // the deterministic profile keeps max|cos| near one at both sizes
  CHECK(d100 / d10000 == doctest::Approx(10.0).epsilon(0.05));
}

TEST_CASE("seeded perturbations are reproducible and bounded") {
  auto base = testsup::typ(0.2, 0.6, 0.5);
  auto a = sample_population(base, 50, PerturbScheme::shrinking_seeded, 0.3, 77);
  auto b = sample_population(base, 50, PerturbScheme::shrinking_seeded, 0.3, 77);
  auto c = sample_population(base, 50, PerturbScheme::shrinking_seeded, 0.3, 78);
  bool differs = false;
  for (std::size_t i = 0; i < 50; ++i) {
    CHECK(a.agents[i].mu == b.agents[i].mu);
    CHECK(std::fabs(a.agents[i].mu - base.mu) <= 0.3 / std::sqrt(50.0) + 1e-15);
    differs = differs || a.agents[i].mu != c.agents[i].mu;
  }
  CHECK(differs);
}

TEST_CASE("perturbed risk aversion is kept inside the open unit interval") {
  auto base = testsup::typ(0.2, 0.6, 0.93);
  // bump of 0.04 lands at 0.97 and is clipped to the default ceiling
  auto pop = sample_population(base, 1, PerturbScheme::shrinking, 0.04 / std::cos(0.0), 1);
  CHECK(pop.agents[0].p == doctest::Approx(0.95));
  CHECK(pop.p_high == doctest::Approx(0.95));
  // a bump that pushes p past one is an error, not a clip
  CHECK_THROWS_AS(sample_population(base, 1, PerturbScheme::shrinking, 0.2, 1), ConfigError);
}

TEST_CASE("running moments match direct formulas and merge cleanly") {
  std::vector<double> xs = {1.0, 4.0, -2.0, 0.5, 3.25, 7.0};
  auto direct = mean_se(xs);
  RunningMoments whole;
  RunningMoments left, right;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    whole.add(xs[i]);
    (i < 3 ? left : right).add(xs[i]);
  }
  left.merge(right);
  CHECK(whole.result().mean == doctest::Approx(direct.mean).epsilon(1e-14));
  CHECK(whole.result().se == doctest::Approx(direct.se).epsilon(1e-14));
  CHECK(left.result().mean == doctest::Approx(direct.mean).epsilon(1e-14));
  CHECK(left.result().se == doctest::Approx(direct.se).epsilon(1e-14));
  CHECK(whole.result().count == 6);
}

TEST_CASE("log-log fit recovers an exact power law") {
  std::vector<double> n = {8, 16, 32, 64, 256};
  std::vector<double> y;
  for (double v : n) y.push_back(3.0 * std::pow(v, -1.5));
  auto fit = fit_loglog(n, y);
  CHECK(fit.slope == doctest::Approx(-1.5).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-10));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_WITH_AS(fit_loglog({1.0, 2.0}, {1.0, 2.0}), "need >= 3 points for slope",
                       DomainError);
}
