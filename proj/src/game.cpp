#include "habitmfg/game.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <utility>

#include "habitmfg/errors.hpp"
#include "habitmfg/quadrature.hpp"

namespace habitmfg {

namespace {

double util(double y, double p) {
  if (y <= 0.0) return 0.0;  // infeasible terminal wealth contributes nothing
  return std::pow(y, p) / p;
}

void check_grid(const GameConfig& cfg, const TimeGrid& mfe_grid) {
  if (cfg.grid.size() != mfe_grid.size() || cfg.grid.T != mfe_grid.T)
    throw ConfigError("simulation grid does not match the equilibrium grid");
  if (cfg.population.size() == 0) throw ConfigError("population is empty");
  if (cfg.n_paths == 0) throw ConfigError("n_paths must be positive");
}

std::vector<std::pair<std::size_t, std::size_t>> partition_range(std::size_t count,
                                                                 int threads) {
  std::size_t parts = threads > 0 ? static_cast<std::size_t>(threads) : 1;
  parts = std::min(parts, std::max<std::size_t>(count, 1));
  std::vector<std::pair<std::size_t, std::size_t>> out(parts);
  std::size_t base = count / parts, rem = count % parts, begin = 0;
  for (std::size_t t = 0; t < parts; ++t) {
    std::size_t len = base + (t < rem ? 1 : 0);
    out[t] = {begin, begin + len};
    begin += len;
  }
  return out;
}

template <class Work>
void run_parts(std::size_t nparts, const Work& work) {
  if (nparts <= 1) {
    work(0);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nparts);
  for (std::size_t t = 0; t < nparts; ++t) pool.emplace_back(work, t);
  for (auto& th : pool) th.join();
}

// Streams one scalar sample per replication; merge order is fixed by the
// partition so results are reproducible for a given thread count.
template <class Engine, class SampleFn>
std::pair<MeanSe, std::size_t> stream_samples(const Engine& game, const SampleFn& fn) {
  const GameConfig& cfg = game.config();
  auto parts = partition_range(cfg.n_paths, cfg.threads);
  std::vector<RunningMoments> acc(parts.size());
  std::vector<std::size_t> bad(parts.size(), 0);
  run_parts(parts.size(), [&](std::size_t t) {
    PathEnsemble buf;
    for (std::size_t rep = parts[t].first; rep < parts[t].second; ++rep) {
      game.simulate(rep, buf);
      acc[t].add(fn(buf));
      bad[t] += buf.infeasible;
    }
  });
  RunningMoments total;
  std::size_t infeasible = 0;
  for (std::size_t t = 0; t < parts.size(); ++t) {
    total.merge(acc[t]);
    infeasible += bad[t];
  }
  return {total.result(), infeasible};
}

template <class Engine, class Mfe>
ConvergenceReport rate_study(const RateStudyConfig& study, const Mfe& mfe, Mode mode) {
  if (study.n_list.size() < 3) throw DomainError("need >= 3 points for slope");
  if (study.replications < 2) throw ConfigError("replications must be at least 2");
  const std::size_t m = study.grid.size();
  ConvergenceReport report;
  for (std::size_t n : study.n_list) {
    if (n == 0) throw ConfigError("population sizes must be positive");
    GameConfig cfg;
    cfg.population = sample_population(study.base, n, study.scheme, study.kappa,
                                       study.seed + n);
    cfg.habit = study.habit;
    cfg.mode = mode;
    cfg.grid = study.grid;
    cfg.n_paths = study.replications;
    cfg.seed = study.seed;
    cfg.threads = study.threads;
    Engine game(cfg, mfe);

    auto parts = partition_range(study.replications, study.threads);
    std::vector<std::vector<double>> d2(parts.size()), d4(parts.size());
    run_parts(parts.size(), [&](std::size_t t) {
      d2[t].assign(m, 0.0);
      d4[t].assign(m, 0.0);
      std::vector<double> z;
      for (std::size_t rep = parts[t].first; rep < parts[t].second; ++rep) {
        game.zbar_star(rep, z);
        for (std::size_t k = 0; k < m; ++k) {
          double d = z[k] - mfe.zbar[k];
          double sq = d * d;
          d2[t][k] += sq;
          d4[t][k] += sq * sq;
        }
      }
    });
    for (std::size_t t = 1; t < parts.size(); ++t)
      for (std::size_t k = 0; k < m; ++k) {
        d2[0][k] += d2[t][k];
        d4[0][k] += d4[t][k];
      }

    const double reps = static_cast<double>(study.replications);
    std::size_t worst = 0;
    double worst_mean = -1.0;
    for (std::size_t k = 0; k < m; ++k) {
      double mean = d2[0][k] / reps;
      if (mean > worst_mean) {
        worst_mean = mean;
        worst = k;
      }
    }
    double var = (d4[0][worst] - reps * worst_mean * worst_mean) / (reps - 1.0);
    ConvergencePoint pt;
    pt.n = n;
    pt.metric = worst_mean;
    pt.se = std::sqrt(std::max(var, 0.0) / reps);
    report.points.push_back(pt);
  }

  std::vector<double> xs, ys;
  for (const auto& pt : report.points) {
    xs.push_back(static_cast<double>(pt.n));
    ys.push_back(pt.metric);
  }
  report.fit = fit_loglog(xs, ys);
  return report;
}

constexpr std::uint64_t kDeviationSalt = 0x5851f42d4c957f2dull;

}  // namespace

LinearGame::LinearGame(const GameConfig& cfg, const LinearMfe& mfe)
    : cfg_(cfg), mfe_(mfe) {
  check_grid(cfg_, mfe_.grid);
  const TimeGrid& grid = cfg_.grid;
  const std::size_t n = cfg_.population.size(), m = grid.size();
  const double dt = grid.dt();

  tail_.resize(m);
  for (std::size_t k = 0; k < m; ++k)
    tail_[k] = mfe_.zbar_cum.back() - mfe_.zbar_cum[k];

  drift_int_.resize(n, m);
  inv_u_.resize(n, m);
  theta_tilde_.resize(n);
  std::vector<double> g_rate(m);
  for (std::size_t i = 0; i < n; ++i) {
    const TypeVector& o = cfg_.population.agents[i];
    LinearCoefficient coef = linear_coefficient(grid, o);
    const double frac = merton_fraction(o);
    const double r = o.mu * frac;
    const double theta = o.sigma * frac;
    theta_tilde_[i] = theta;
    double* iu = inv_u_.row(i);
    for (std::size_t k = 0; k < m; ++k) {
      iu[k] = 1.0 / coef.u[k];
      g_rate[k] = r - iu[k] - 0.5 * theta * theta;
    }
    cumulative_trapezoid(g_rate.data(), m, dt, drift_int_.row(i));
  }
}

void LinearGame::simulate(std::uint64_t replication, PathEnsemble& out) const {
  const TimeGrid& grid = cfg_.grid;
  const std::size_t n = cfg_.population.size(), m = grid.size();
  const double dt = grid.dt(), sq_dt = std::sqrt(dt);
  const double z0 = cfg_.habit.z0, delta = cfg_.habit.delta;
  const double K = mfe_.K_surplus;

  out.n_agents = n;
  out.seed = cfg_.seed;
  out.replication = replication;
  out.infeasible = 0;
  out.wealth.resize(n, m);
  out.habit.resize(n, m);
  out.consumption.resize(n, m);
  out.surplus.resize(n, m);
  out.zbar_star.assign(m, 0.0);
  out.cbar_star.assign(m, 0.0);

  std::vector<double> mean_i(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    GaussianStream gs(cfg_.seed, stream_index(i, replication));
    double w = 0.0;
    double* y = out.surplus.row(i);
    const double* di = drift_int_.row(i);
    const double* iu = inv_u_.row(i);
    y[0] = K;
    mean_i[0] += K * iu[0];
    for (std::size_t k = 1; k < m; ++k) {
      w += sq_dt * gs.next();
      y[k] = K * std::exp(di[k] + theta_tilde_[i] * w);
      mean_i[k] += y[k] * iu[k];
    }
  }
  for (std::size_t k = 0; k < m; ++k) mean_i[k] /= static_cast<double>(n);

  // average habit solves the same discounted trapezoid rule the per-agent
  // habits use, so it can be peeled off node by node before consumption is
  // formed; the node equation is linear in zbar*_k.
  std::vector<double>& z = out.zbar_star;
  z[0] = z0;
  double acc = 0.0;
  double w_prev = delta * (z[0] + mean_i[0]);
  for (std::size_t k = 1; k < m; ++k) {
    const double t = grid.nodes[k];
    const double decay = std::exp(-delta * t);
    const double rhs =
        decay * (z0 + acc + 0.5 * dt * w_prev) + 0.5 * dt * delta * mean_i[k];
    z[k] = rhs / (1.0 - 0.5 * dt * delta);
    const double w_k = delta * std::exp(delta * t) * (z[k] + mean_i[k]);
    acc += 0.5 * dt * (w_prev + w_k);
    w_prev = w_k;
  }

  std::vector<double> drift_gap(m), gap_int(m);
  for (std::size_t k = 0; k < m; ++k) drift_gap[k] = z[k] - mfe_.zbar[k];
  cumulative_trapezoid(drift_gap.data(), m, dt, gap_int.data());

  for (std::size_t i = 0; i < n; ++i) {
    const double* y = out.surplus.row(i);
    const double* iu = inv_u_.row(i);
    double* c = out.consumption.row(i);
    double* x = out.wealth.row(i);
    bool bad = false;
    for (std::size_t k = 0; k < m; ++k) {
      c[k] = z[k] + y[k] * iu[k];
      x[k] = y[k] + tail_[k] - gap_int[k];
      if (x[k] <= 0.0) bad = true;
    }
    if (bad) ++out.infeasible;
    discounted_habit(grid, delta, z0, c, out.habit.row(i));
  }
  for (std::size_t k = 0; k < m; ++k) out.cbar_star[k] = z[k] + mean_i[k];
}

PathEnsemble LinearGame::simulate(std::uint64_t replication) const {
  PathEnsemble out;
  simulate(replication, out);
  return out;
}

void LinearGame::zbar_star(std::uint64_t replication, std::vector<double>& out) const {
  const TimeGrid& grid = cfg_.grid;
  const std::size_t n = cfg_.population.size(), m = grid.size();
  const double dt = grid.dt(), sq_dt = std::sqrt(dt);
  const double z0 = cfg_.habit.z0, delta = cfg_.habit.delta;
  const double K = mfe_.K_surplus;

  std::vector<double> mean_i(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    GaussianStream gs(cfg_.seed, stream_index(i, replication));
    double w = 0.0;
    const double* di = drift_int_.row(i);
    const double* iu = inv_u_.row(i);
    mean_i[0] += K * iu[0];
    for (std::size_t k = 1; k < m; ++k) {
      w += sq_dt * gs.next();
      mean_i[k] += K * std::exp(di[k] + theta_tilde_[i] * w) * iu[k];
    }
  }
  for (std::size_t k = 0; k < m; ++k) mean_i[k] /= static_cast<double>(n);

  out.assign(m, 0.0);
  out[0] = z0;
  double acc = 0.0;
  double w_prev = delta * (out[0] + mean_i[0]);
  for (std::size_t k = 1; k < m; ++k) {
    const double t = grid.nodes[k];
    const double decay = std::exp(-delta * t);
    const double rhs =
        decay * (z0 + acc + 0.5 * dt * w_prev) + 0.5 * dt * delta * mean_i[k];
    out[k] = rhs / (1.0 - 0.5 * dt * delta);
    const double w_k = delta * std::exp(delta * t) * (out[k] + mean_i[k]);
    acc += 0.5 * dt * (w_prev + w_k);
    w_prev = w_k;
  }
}

double LinearGame::objective_sample(const PathEnsemble& e, std::size_t agent) const {
  const std::size_t m = cfg_.grid.size();
  const double dt = cfg_.grid.dt();
  const double p = cfg_.population.agents[agent].p;
  const double* y = e.surplus.row(agent);
  const double* iu = inv_u_.row(agent);
  double sum = 0.0, prev = util(y[0] * iu[0], p);
  for (std::size_t k = 1; k < m; ++k) {
    double v = util(y[k] * iu[k], p);
    sum += 0.5 * dt * (prev + v);
    prev = v;
  }
  return sum + util(e.wealth.at(agent, m - 1), p);
}

double LinearGame::deviation_sample(const PathEnsemble& e, std::size_t agent) const {
  const std::size_t m = cfg_.grid.size();
  const double dt = cfg_.grid.dt();
  const double p = cfg_.population.agents[agent].p;
  const double* y = e.surplus.row(agent);
  const double* iu = inv_u_.row(agent);
  double sum = 0.0, prev = util(y[0] * iu[0], p);
  for (std::size_t k = 1; k < m; ++k) {
    double v = util(y[k] * iu[k], p);
    sum += 0.5 * dt * (prev + v);
    prev = v;
  }
  return sum + util(y[m - 1], p);
}

MultGame::MultGame(const GameConfig& cfg, const MultMfe& mfe)
    : cfg_(cfg), mfe_(mfe) {
  check_grid(cfg_, mfe_.grid);
  const TimeGrid& grid = cfg_.grid;
  const std::size_t n = cfg_.population.size(), m = grid.size();
  const double dt = grid.dt();

  c_star_.resize(n, m);
  drift_int_.resize(n, m);
  vol_.resize(n);
  log_zbar_m_.resize(m);
  for (std::size_t k = 0; k < m; ++k) log_zbar_m_[k] = std::log(mfe_.zbar[k]);

  std::vector<double> drift(m);
  for (std::size_t i = 0; i < n; ++i) {
    const TypeVector& o = cfg_.population.agents[i];
    MultCoefficient coef = mult_coefficient(grid, o, cfg_.habit.alpha, mfe_.zbar);
    const double pi = merton_fraction(o);
    vol_[i] = o.sigma * pi;
    double* c = c_star_.row(i);
    for (std::size_t k = 0; k < m; ++k) {
      c[k] = coef.q[k] / coef.h[k];
      drift[k] = pi * o.mu - 0.5 * vol_[i] * vol_[i] - c[k];
    }
    cumulative_trapezoid(drift.data(), m, dt, drift_int_.row(i));
  }
}

void MultGame::simulate(std::uint64_t replication, PathEnsemble& out) const {
  const TimeGrid& grid = cfg_.grid;
  const std::size_t n = cfg_.population.size(), m = grid.size();
  const double dt = grid.dt(), sq_dt = std::sqrt(dt);
  const double x0 = cfg_.habit.x0, z0 = cfg_.habit.z0, delta = cfg_.habit.delta;

  out.n_agents = n;
  out.seed = cfg_.seed;
  out.replication = replication;
  out.infeasible = 0;
  out.wealth.resize(n, m);
  out.habit.resize(n, m);
  out.consumption.resize(n, m);
  out.surplus.resize(0, 0);
  out.zbar_star.assign(m, 0.0);
  out.cbar_star.assign(m, 0.0);

  for (std::size_t i = 0; i < n; ++i) {
    GaussianStream gs(cfg_.seed, stream_index(i, replication));
    double w = 0.0;
    double* x = out.wealth.row(i);
    double* c = out.consumption.row(i);
    const double* di = drift_int_.row(i);
    const double* cs = c_star_.row(i);
    x[0] = x0;
    c[0] = cs[0] * x0;
    out.cbar_star[0] += c[0];
    for (std::size_t k = 1; k < m; ++k) {
      w += sq_dt * gs.next();
      x[k] = x0 * std::exp(di[k] + vol_[i] * w);
      c[k] = cs[k] * x[k];
      out.cbar_star[k] += c[k];
    }
    discounted_habit(grid, delta, z0, c, out.habit.row(i));
  }
  for (std::size_t k = 0; k < m; ++k) out.cbar_star[k] /= static_cast<double>(n);
  discounted_habit(grid, delta, z0, out.cbar_star.data(), out.zbar_star.data());
}

PathEnsemble MultGame::simulate(std::uint64_t replication) const {
  PathEnsemble out;
  simulate(replication, out);
  return out;
}

void MultGame::zbar_star(std::uint64_t replication, std::vector<double>& out) const {
  const TimeGrid& grid = cfg_.grid;
  const std::size_t n = cfg_.population.size(), m = grid.size();
  const double dt = grid.dt(), sq_dt = std::sqrt(dt);
  const double x0 = cfg_.habit.x0, z0 = cfg_.habit.z0, delta = cfg_.habit.delta;

  std::vector<double> cbar(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    GaussianStream gs(cfg_.seed, stream_index(i, replication));
    double w = 0.0;
    const double* di = drift_int_.row(i);
    const double* cs = c_star_.row(i);
    cbar[0] += cs[0] * x0;
    for (std::size_t k = 1; k < m; ++k) {
      w += sq_dt * gs.next();
      cbar[k] += cs[k] * x0 * std::exp(di[k] + vol_[i] * w);
    }
  }
  for (std::size_t k = 0; k < m; ++k) cbar[k] /= static_cast<double>(n);
  out.assign(m, 0.0);
  discounted_habit(grid, delta, z0, cbar.data(), out.data());
}

double MultGame::objective_sample(const PathEnsemble& e, std::size_t agent) const {
  const std::size_t m = cfg_.grid.size();
  const double dt = cfg_.grid.dt();
  const double p = cfg_.population.agents[agent].p;
  const double alpha = cfg_.habit.alpha;
  const double* c = e.consumption.row(agent);
  double sum = 0.0;
  double prev = util(c[0] / std::pow(e.zbar_star[0], alpha), p);
  for (std::size_t k = 1; k < m; ++k) {
    double v = util(c[k] / std::pow(e.zbar_star[k], alpha), p);
    sum += 0.5 * dt * (prev + v);
    prev = v;
  }
  return sum + util(e.wealth.at(agent, m - 1), p);
}

double MultGame::deviation_sample(const PathEnsemble& e, std::size_t agent) const {
  const std::size_t m = cfg_.grid.size();
  const double dt = cfg_.grid.dt();
  const double p = cfg_.population.agents[agent].p;
  const double alpha = cfg_.habit.alpha;
  const double* c = e.consumption.row(agent);
  double sum = 0.0;
  double prev = std::exp(p * (std::log(c[0]) - alpha * log_zbar_m_[0])) / p;
  for (std::size_t k = 1; k < m; ++k) {
    double v = std::exp(p * (std::log(c[k]) - alpha * log_zbar_m_[k])) / p;
    sum += 0.5 * dt * (prev + v);
    prev = v;
  }
  return sum + util(e.wealth.at(agent, m - 1), p);
}

PathEnsemble simulate_linear_game(const GameConfig& cfg, const LinearMfe& mfe,
                                  std::uint64_t replication) {
  return LinearGame(cfg, mfe).simulate(replication);
}

PathEnsemble simulate_mult_game(const GameConfig& cfg, const MultMfe& mfe,
                                std::uint64_t replication) {
  return MultGame(cfg, mfe).simulate(replication);
}

MeanSe estimate_objective(const GameConfig& cfg, const LinearMfe& mfe, std::size_t agent) {
  if (agent >= cfg.population.size()) throw DomainError("agent index out of range");
  LinearGame game(cfg, mfe);
  return stream_samples(game, [&](const PathEnsemble& e) {
           return game.objective_sample(e, agent);
         })
      .first;
}

MeanSe estimate_objective(const GameConfig& cfg, const MultMfe& mfe, std::size_t agent) {
  if (agent >= cfg.population.size()) throw DomainError("agent index out of range");
  MultGame game(cfg, mfe);
  return stream_samples(game, [&](const PathEnsemble& e) {
           return game.objective_sample(e, agent);
         })
      .first;
}

GapEstimate nash_gap(const GameConfig& cfg, const LinearMfe& mfe, std::size_t agent,
                     bool common_random_numbers) {
  if (agent >= cfg.population.size()) throw DomainError("agent index out of range");
  const std::size_t last = cfg.grid.size() - 1;
  const double p = cfg.population.agents[agent].p;
  GapEstimate out;
  if (common_random_numbers) {
    LinearGame game(cfg, mfe);
    // the running terms coincide path by path, only terminal wealth differs
    auto r = stream_samples(game, [&](const PathEnsemble& e) {
      return util(e.surplus.at(agent, last), p) - util(e.wealth.at(agent, last), p);
    });
    out.gap = r.first;
    out.infeasible = r.second;
    return out;
  }
  GameConfig alt = cfg;
  alt.seed = cfg.seed ^ kDeviationSalt;
  LinearGame played(cfg, mfe), shadow(alt, mfe);
  auto a = stream_samples(played, [&](const PathEnsemble& e) {
    return played.objective_sample(e, agent);
  });
  auto b = stream_samples(shadow, [&](const PathEnsemble& e) {
    return shadow.deviation_sample(e, agent);
  });
  out.gap.mean = b.first.mean - a.first.mean;
  out.gap.se = std::sqrt(a.first.se * a.first.se + b.first.se * b.first.se);
  out.gap.count = a.first.count;
  out.infeasible = a.second + b.second;
  return out;
}

GapEstimate nash_gap(const GameConfig& cfg, const MultMfe& mfe, std::size_t agent,
                     bool common_random_numbers) {
  if (agent >= cfg.population.size()) throw DomainError("agent index out of range");
  const std::size_t m = cfg.grid.size();
  const double dt = cfg.grid.dt();
  const double p = cfg.population.agents[agent].p;
  const double alpha = cfg.habit.alpha;
  GapEstimate out;
  if (common_random_numbers) {
    MultGame game(cfg, mfe);
    std::vector<double> zm_pow(m);
    for (std::size_t k = 0; k < m; ++k)
      zm_pow[k] = std::pow(mfe.zbar[k], -alpha * p);
    auto r = stream_samples(game, [&](const PathEnsemble& e) {
      const double* c = e.consumption.row(agent);
      double sum = 0.0;
      double prev = std::pow(c[0], p) *
                    (zm_pow[0] - std::pow(e.zbar_star[0], -alpha * p));
      for (std::size_t k = 1; k < m; ++k) {
        double v = std::pow(c[k], p) *
                   (zm_pow[k] - std::pow(e.zbar_star[k], -alpha * p));
        sum += 0.5 * dt * (prev + v);
        prev = v;
      }
      return sum / p;
    });
    out.gap = r.first;
    out.infeasible = r.second;
    return out;
  }
  GameConfig alt = cfg;
  alt.seed = cfg.seed ^ kDeviationSalt;
  MultGame played(cfg, mfe), shadow(alt, mfe);
  auto a = stream_samples(played, [&](const PathEnsemble& e) {
    return played.objective_sample(e, agent);
  });
  auto b = stream_samples(shadow, [&](const PathEnsemble& e) {
    return shadow.deviation_sample(e, agent);
  });
  out.gap.mean = b.first.mean - a.first.mean;
  out.gap.se = std::sqrt(a.first.se * a.first.se + b.first.se * b.first.se);
  out.gap.count = a.first.count;
  out.infeasible = a.second + b.second;
  return out;
}

ConvergenceReport habit_deviation_rate(const RateStudyConfig& study, const LinearMfe& mfe) {
  return rate_study<LinearGame>(study, mfe, Mode::linear);
}

ConvergenceReport habit_deviation_rate(const RateStudyConfig& study, const MultMfe& mfe) {
  return rate_study<MultGame>(study, mfe, Mode::multiplicative);
}

}  // namespace habitmfg
