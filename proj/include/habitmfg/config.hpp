#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "habitmfg/mult_mfe.hpp"
#include "habitmfg/population.hpp"
#include "habitmfg/types.hpp"

namespace habitmfg {

// Resolved experiment description. Parsed from a flat "key = value" file;
// unset keys take the defaults below.
struct ExperimentConfig {
  Mode mode = Mode::linear;
  TypeVector type;
  HabitSpec habit;
  std::size_t n_steps = 2000;
  double x_eval = 0.0;  // 0 means "use x0"
  std::uint64_t seed = 42;
  std::string out_dir = "out";

  std::vector<double> p_list, delta_list, alpha_list;

  std::vector<std::size_t> n_list;
  std::size_t sim_m = 200;
  std::size_t sim_agent = 0;
  bool sim_crn = true;
  PerturbScheme sim_scheme = PerturbScheme::homogeneous;
  double sim_kappa = 0.0;

  MultSolverOptions solver;

  double eval_wealth() const { return x_eval > 0.0 ? x_eval : habit.x0; }
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Stable textual form of the resolved config (output location excluded, so
// rerunning into a different directory reproduces files byte for byte).
std::string canonical_text(const ExperimentConfig& cfg);
std::uint64_t config_hash(const ExperimentConfig& cfg);

const char* mode_name(Mode mode);
const char* scheme_name(PerturbScheme scheme);

}  // namespace habitmfg
