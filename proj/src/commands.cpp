#include "habitmfg/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <utility>

#include "habitmfg/csv.hpp"
#include "habitmfg/errors.hpp"
#include "habitmfg/game.hpp"

namespace habitmfg {

namespace {

namespace fs = std::filesystem;

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory: " + dir);
}

std::vector<std::string> header(const ExperimentConfig& cfg, const char* command) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(config_hash(cfg)));
  return {std::string("habitmfg ") + command, std::string("config_hash = ") + buf,
          "seed = " + std::to_string(cfg.seed)};
}

std::string join_short(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_short(values[i]);
  }
  return out;
}

// curves of one sweep entry evaluated at fixed wealth x_eval
struct SweepCurves {
  std::vector<double> consumption, portfolio, habit;
};

SweepCurves eval_curves(const ExperimentConfig& cfg, const TimeGrid& grid) {
  validate(cfg.type);
  validate(cfg.habit, cfg.mode);
  const double x = cfg.eval_wealth();
  const std::size_t m = grid.size();
  SweepCurves out;
  out.consumption.resize(m);
  out.portfolio.resize(m);
  out.habit.resize(m);
  if (cfg.mode == Mode::linear) {
    LinearMfe mfe = solve_linear_mfe(grid, cfg.type, cfg.habit);
    for (std::size_t k = 0; k < m; ++k) {
      Feedback fb = linear_feedback(mfe, k, x);
      out.consumption[k] = fb.consumption;
      out.portfolio[k] = fb.portfolio_fraction;
      out.habit[k] = mfe.zbar[k];
    }
  } else {
    MultMfe mfe = solve_mult_mfe(grid, cfg.type, cfg.habit, cfg.solver);
    for (std::size_t k = 0; k < m; ++k) {
      out.consumption[k] = mfe.c_star[k] * x;
      out.portfolio[k] = mfe.pi_star;
      out.habit[k] = mfe.zbar[k];
    }
  }
  return out;
}

}  // namespace

std::vector<std::string> cmd_solve(const ExperimentConfig& cfg, const std::string& out_dir) {
  ensure_dir(out_dir);
  const TimeGrid grid = make_grid(cfg.habit.T, cfg.n_steps);
  const auto comments = header(cfg, "solve");
  CurveTable table;
  std::vector<std::pair<std::string, std::string>> meta;
  meta.emplace_back("mode", mode_name(cfg.mode));
  meta.emplace_back("n_steps", std::to_string(cfg.n_steps));

  if (cfg.mode == Mode::linear) {
    LinearMfe mfe = solve_linear_mfe(grid, cfg.type, cfg.habit);
    table.columns = {"t", "zbar", "g", "u", "phi"};
    for (std::size_t k = 0; k < grid.size(); ++k)
      table.rows.push_back({grid.nodes[k], mfe.zbar[k], mfe.g[k], mfe.u[k], mfe.phi[k]});
    meta.emplace_back("k_surplus", format_double(mfe.K_surplus));
    meta.emplace_back("merton_fraction", format_double(merton_fraction(cfg.type)));
    meta.emplace_back("merton_rate", format_double(merton_rate(cfg.type)));
    meta.emplace_back("residual", format_double(mfe.residual));
  } else {
    MultMfe mfe = solve_mult_mfe(grid, cfg.type, cfg.habit, cfg.solver);
    table.columns = {"t", "zbar", "g", "h", "c_star"};
    for (std::size_t k = 0; k < grid.size(); ++k)
      table.rows.push_back({grid.nodes[k], mfe.zbar[k], mfe.g[k], mfe.h[k], mfe.c_star[k]});
    meta.emplace_back("pi_star", format_double(mfe.pi_star));
    meta.emplace_back("beta", format_double(mfe.beta));
    meta.emplace_back("iterations", std::to_string(mfe.iterations));
    meta.emplace_back("residual", format_double(mfe.residual));
  }

  const std::string csv_path = join(out_dir, "mfe.csv");
  const std::string meta_path = join(out_dir, "mfe_meta.txt");
  write_csv(csv_path, table, comments);
  write_meta(meta_path, meta, comments);
  return {csv_path, meta_path};
}

std::vector<std::string> cmd_figures(const ExperimentConfig& cfg, const std::string& out_dir) {
  if (cfg.p_list.empty() && cfg.delta_list.empty() && cfg.alpha_list.empty())
    throw ConfigError("figures needs at least one sweep list");
  if (cfg.mode == Mode::linear && !cfg.alpha_list.empty())
    throw ConfigError("alpha sweep requires multiplicative mode");
  ensure_dir(out_dir);
  const TimeGrid grid = make_grid(cfg.habit.T, cfg.n_steps);
  const auto comments = header(cfg, "figures");
  std::vector<std::string> written;

  struct Sweep {
    const char* tag;
    const std::vector<double>* values;
  };
  const Sweep sweeps[] = {{"p", &cfg.p_list},
                          {"delta", &cfg.delta_list},
                          {"alpha", &cfg.alpha_list}};

  for (const Sweep& sw : sweeps) {
    if (sw.values->empty()) continue;
    CurveTable cons, port, hab;
    cons.columns = port.columns = hab.columns = {"t"};
    const std::size_t m = grid.size();
    cons.rows.assign(m, {});
    port.rows.assign(m, {});
    hab.rows.assign(m, {});
    for (std::size_t k = 0; k < m; ++k) {
      cons.rows[k].push_back(grid.nodes[k]);
      port.rows[k].push_back(grid.nodes[k]);
      hab.rows[k].push_back(grid.nodes[k]);
    }
    for (double v : *sw.values) {
      ExperimentConfig local = cfg;
      if (sw.tag[0] == 'p')
        local.type.p = v;
      else if (sw.tag[0] == 'd')
        local.habit.delta = v;
      else
        local.habit.alpha = v;
      SweepCurves curves = eval_curves(local, grid);
      const std::string label = std::string(sw.tag) + "=" + format_short(v);
      cons.columns.push_back(label);
      port.columns.push_back(label);
      hab.columns.push_back(label);
      for (std::size_t k = 0; k < m; ++k) {
        cons.rows[k].push_back(curves.consumption[k]);
        port.rows[k].push_back(curves.portfolio[k]);
        hab.rows[k].push_back(curves.habit[k]);
      }
    }
    const std::string base = std::string("figure_") + sw.tag;
    const std::string f1 = join(out_dir, base + "_consumption.csv");
    const std::string f2 = join(out_dir, base + "_portfolio.csv");
    const std::string f3 = join(out_dir, base + "_habit.csv");
    write_csv(f1, cons, comments);
    write_csv(f2, port, comments);
    write_csv(f3, hab, comments);
    written.push_back(f1);
    written.push_back(f2);
    written.push_back(f3);
  }

  std::vector<std::pair<std::string, std::string>> meta;
  meta.emplace_back("mode", mode_name(cfg.mode));
  meta.emplace_back("x_eval", format_double(cfg.eval_wealth()));
  meta.emplace_back("n_steps", std::to_string(cfg.n_steps));
  if (!cfg.p_list.empty()) meta.emplace_back("p_list", join_short(cfg.p_list));
  if (!cfg.delta_list.empty()) meta.emplace_back("delta_list", join_short(cfg.delta_list));
  if (!cfg.alpha_list.empty()) meta.emplace_back("alpha_list", join_short(cfg.alpha_list));
  const std::string meta_path = join(out_dir, "figures_meta.txt");
  write_meta(meta_path, meta, comments);
  written.push_back(meta_path);
  return written;
}

std::vector<std::string> cmd_converge(const ExperimentConfig& cfg, const std::string& out_dir,
                                      int threads) {
  if (cfg.n_list.size() < 3) throw ConfigError("need >= 3 points for slope");
  if (cfg.sim_m < 2) throw ConfigError("sim.M must be at least 2");
  ensure_dir(out_dir);
  const TimeGrid grid = make_grid(cfg.habit.T, cfg.n_steps);
  const auto comments = header(cfg, "converge");

  RateStudyConfig study;
  study.base = cfg.type;
  study.scheme = cfg.sim_scheme;
  study.kappa = cfg.sim_kappa;
  study.habit = cfg.habit;
  study.grid = grid;
  study.n_list = cfg.n_list;
  study.replications = cfg.sim_m;
  study.seed = cfg.seed;
  study.threads = threads;

  ConvergenceReport report;
  if (cfg.mode == Mode::linear) {
    LinearMfe mfe = solve_linear_mfe(grid, cfg.type, cfg.habit);
    report = habit_deviation_rate(study, mfe);
  } else {
    MultMfe mfe = solve_mult_mfe(grid, cfg.type, cfg.habit, cfg.solver);
    report = habit_deviation_rate(study, mfe);
  }

  CurveTable table;
  table.columns = {"n", "metric", "std_error"};
  for (const auto& pt : report.points)
    table.rows.push_back({static_cast<double>(pt.n), pt.metric, pt.se});

  const double band_low = -1.3, band_high = -0.7;
  const bool pass = report.fit.slope >= band_low && report.fit.slope <= band_high;
  std::vector<std::pair<std::string, std::string>> meta;
  meta.emplace_back("mode", mode_name(cfg.mode));
  meta.emplace_back("scheme", scheme_name(cfg.sim_scheme));
  meta.emplace_back("kappa", format_double(cfg.sim_kappa));
  meta.emplace_back("replications", std::to_string(cfg.sim_m));
  meta.emplace_back("slope", format_double(report.fit.slope));
  meta.emplace_back("intercept", format_double(report.fit.intercept));
  meta.emplace_back("r_squared", format_double(report.fit.r_squared));
  meta.emplace_back("target_order", format_double(-1.0));
  meta.emplace_back("band_low", format_double(band_low));
  meta.emplace_back("band_high", format_double(band_high));
  meta.emplace_back("verdict", pass ? "pass" : "fail");

  const std::string csv_path = join(out_dir, "convergence.csv");
  const std::string meta_path = join(out_dir, "convergence_meta.txt");
  write_csv(csv_path, table, comments);
  write_meta(meta_path, meta, comments);
  return {csv_path, meta_path};
}

std::vector<std::string> cmd_nashgap(const ExperimentConfig& cfg, const std::string& out_dir,
                                     int threads) {
  if (cfg.n_list.size() < 2)
    throw ConfigError("need at least two population sizes for the gap trend");
  if (cfg.sim_m < 2) throw ConfigError("sim.M must be at least 2");
  ensure_dir(out_dir);
  const TimeGrid grid = make_grid(cfg.habit.T, cfg.n_steps);
  const auto comments = header(cfg, "nashgap");

  LinearMfe lmfe;
  MultMfe mmfe;
  if (cfg.mode == Mode::linear)
    lmfe = solve_linear_mfe(grid, cfg.type, cfg.habit);
  else
    mmfe = solve_mult_mfe(grid, cfg.type, cfg.habit, cfg.solver);

  CurveTable table;
  table.columns = {"n", "gap", "std_error"};
  std::size_t infeasible = 0;
  std::vector<GapEstimate> gaps;
  for (std::size_t n : cfg.n_list) {
    if (cfg.sim_agent >= n)
      throw ConfigError("sim.agent out of range for population size " + std::to_string(n));
    GameConfig game;
    game.population =
        sample_population(cfg.type, n, cfg.sim_scheme, cfg.sim_kappa, cfg.seed + n);
    game.habit = cfg.habit;
    game.mode = cfg.mode;
    game.grid = grid;
    game.n_paths = cfg.sim_m;
    game.seed = cfg.seed;
    game.threads = threads;
    GapEstimate est = cfg.mode == Mode::linear
                          ? nash_gap(game, lmfe, cfg.sim_agent, cfg.sim_crn)
                          : nash_gap(game, mmfe, cfg.sim_agent, cfg.sim_crn);
    gaps.push_back(est);
    infeasible += est.infeasible;
    table.rows.push_back({static_cast<double>(n), est.gap.mean, est.gap.se});
  }

  std::size_t i_min = 0, i_max = 0;
  for (std::size_t i = 1; i < cfg.n_list.size(); ++i) {
    if (cfg.n_list[i] < cfg.n_list[i_min]) i_min = i;
    if (cfg.n_list[i] > cfg.n_list[i_max]) i_max = i;
  }
  const double g_small = std::fabs(gaps[i_min].gap.mean);
  const double g_large = std::fabs(gaps[i_max].gap.mean);
  const double spread = std::sqrt(gaps[i_min].gap.se * gaps[i_min].gap.se +
                                  gaps[i_max].gap.se * gaps[i_max].gap.se);
  const bool pass = g_large < g_small + 2.0 * spread;

  std::vector<std::pair<std::string, std::string>> meta;
  meta.emplace_back("mode", mode_name(cfg.mode));
  meta.emplace_back("agent", std::to_string(cfg.sim_agent));
  meta.emplace_back("replications", std::to_string(cfg.sim_m));
  meta.emplace_back("crn", cfg.sim_crn ? "true" : "false");
  meta.emplace_back("gap_small_n", format_double(gaps[i_min].gap.mean));
  meta.emplace_back("gap_large_n", format_double(gaps[i_max].gap.mean));
  meta.emplace_back("verdict", pass ? "pass" : "fail");
  meta.emplace_back("infeasible_paths", std::to_string(infeasible));

  const std::string csv_path = join(out_dir, "nashgap.csv");
  const std::string meta_path = join(out_dir, "nashgap_meta.txt");
  write_csv(csv_path, table, comments);
  write_meta(meta_path, meta, comments);
  return {csv_path, meta_path};
}

}  // namespace habitmfg
