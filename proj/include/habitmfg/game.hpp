#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "habitmfg/linear_mfe.hpp"
#include "habitmfg/mult_mfe.hpp"
#include "habitmfg/population.hpp"
#include "habitmfg/rng.hpp"
#include "habitmfg/stats.hpp"
#include "habitmfg/types.hpp"

namespace habitmfg {

struct GameConfig {
  Population population;
  HabitSpec habit;
  Mode mode = Mode::linear;
  TimeGrid grid;
  std::size_t n_paths = 1;  // number of system replications
  std::uint64_t seed = 0;
  int threads = 1;
};

// Dense agent-by-node storage for one system replication.
struct PathMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<double> a;

  void resize(std::size_t r, std::size_t c) {
    rows = r;
    cols = c;
    a.assign(r * c, 0.0);
  }
  double* row(std::size_t r) { return a.data() + r * cols; }
  const double* row(std::size_t r) const { return a.data() + r * cols; }
  double& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
  bool empty() const { return a.empty(); }
};

// One replication of the n-agent system on the grid. `consumption` holds the
// consumption flow C_t = c_t X_t; in linear mode `surplus` carries the exact
// lognormal driver Y^i of each agent. Estimators stream over replications,
// so an ensemble never holds more than one replication.
struct PathEnsemble {
  std::size_t n_agents = 0;
  std::uint64_t seed = 0;       // master seed (rng provenance)
  std::uint64_t replication = 0;
  PathMatrix wealth, habit, consumption, surplus;
  std::vector<double> zbar_star;  // average habit across agents
  std::vector<double> cbar_star;  // average consumption flow
  std::size_t infeasible = 0;     // non-positive wealth/surplus events
};

// Precomputed per-agent curves for the addictive-habit candidate profile.
class LinearGame {
 public:
  LinearGame(const GameConfig& cfg, const LinearMfe& mfe);

  PathEnsemble simulate(std::uint64_t replication) const;
  void simulate(std::uint64_t replication, PathEnsemble& out) const;

  // Average habit only (no per-agent storage); used by the rate study.
  void zbar_star(std::uint64_t replication, std::vector<double>& out) const;

  const GameConfig& config() const { return cfg_; }
  const LinearMfe& mfe() const { return mfe_; }

  // Objective of agent i for one simulated replication:
  //   trapezoid_t U_i(C_i - zbar*) + U_i(X_i(T)).
  double objective_sample(const PathEnsemble& e, std::size_t agent) const;
  // Auxiliary objective of the best response to the mean-field curve, on the
  // same shocks: running term identical by construction, terminal wealth Y_T.
  double deviation_sample(const PathEnsemble& e, std::size_t agent) const;

 private:
  GameConfig cfg_;
  LinearMfe mfe_;
  std::vector<double> tail_;         // int_t^T zbar
  PathMatrix drift_int_;             // per-agent int_0^t G_i
  PathMatrix inv_u_;                 // per-agent 1/u_i
  std::vector<double> theta_tilde_;  // per-agent mu/((1-p) sigma)
};

// Precomputed per-agent curves for the multiplicative-habit candidate profile.
class MultGame {
 public:
  MultGame(const GameConfig& cfg, const MultMfe& mfe);

  PathEnsemble simulate(std::uint64_t replication) const;
  void simulate(std::uint64_t replication, PathEnsemble& out) const;
  void zbar_star(std::uint64_t replication, std::vector<double>& out) const;

  const GameConfig& config() const { return cfg_; }
  const MultMfe& mfe() const { return mfe_; }

  double objective_sample(const PathEnsemble& e, std::size_t agent) const;
  double deviation_sample(const PathEnsemble& e, std::size_t agent) const;

 private:
  GameConfig cfg_;
  MultMfe mfe_;
  PathMatrix c_star_;     // per-agent consumption rate
  PathMatrix drift_int_;  // per-agent int_0^t (pi mu - c - sigma^2 pi^2/2)
  std::vector<double> vol_;  // per-agent sigma pi
  std::vector<double> log_zbar_m_;
};

PathEnsemble simulate_linear_game(const GameConfig& cfg, const LinearMfe& mfe,
                                  std::uint64_t replication = 0);
PathEnsemble simulate_mult_game(const GameConfig& cfg, const MultMfe& mfe,
                                std::uint64_t replication = 0);

// Mean and standard error of agent `agent`'s realized objective across
// cfg.n_paths replications.
MeanSe estimate_objective(const GameConfig& cfg, const LinearMfe& mfe, std::size_t agent);
MeanSe estimate_objective(const GameConfig& cfg, const MultMfe& mfe, std::size_t agent);

struct GapEstimate {
  MeanSe gap;                 // auxiliary objective minus realized objective
  std::size_t infeasible = 0; // infeasible paths encountered (should be zero)
};

// Approximate-equilibrium gap for one agent. With common random numbers both
// objectives are evaluated on the same shocks so the running terms cancel
// analytically where they coincide; without, two independent seeds are used.
GapEstimate nash_gap(const GameConfig& cfg, const LinearMfe& mfe, std::size_t agent,
                     bool common_random_numbers = true);
GapEstimate nash_gap(const GameConfig& cfg, const MultMfe& mfe, std::size_t agent,
                     bool common_random_numbers = true);

struct ConvergencePoint {
  std::size_t n = 0;
  double metric = 0.0;  // sup over nodes of mean (zbar*_n - zbar)^2
  double se = 0.0;      // standard error of the mean at the sup node
};

struct ConvergenceReport {
  std::vector<ConvergencePoint> points;
  SlopeFit fit;  // log metric against log n
};

struct RateStudyConfig {
  TypeVector base;
  PerturbScheme scheme = PerturbScheme::homogeneous;
  double kappa = 0.0;
  HabitSpec habit;
  TimeGrid grid;
  std::vector<std::size_t> n_list;
  std::size_t replications = 200;
  std::uint64_t seed = 0;
  int threads = 1;
};

// Measures how fast the finite-population average habit approaches the mean
// field curve and fits the log-log decay rate.
ConvergenceReport habit_deviation_rate(const RateStudyConfig& study, const LinearMfe& mfe);
ConvergenceReport habit_deviation_rate(const RateStudyConfig& study, const MultMfe& mfe);

}  // namespace habitmfg
