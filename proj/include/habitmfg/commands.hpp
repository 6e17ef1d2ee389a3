#pragma once

#include <string>
#include <vector>

#include "habitmfg/config.hpp"

namespace habitmfg {

// Each command writes its outputs under out_dir and returns the paths written.
std::vector<std::string> cmd_solve(const ExperimentConfig& cfg, const std::string& out_dir);
std::vector<std::string> cmd_figures(const ExperimentConfig& cfg, const std::string& out_dir);
std::vector<std::string> cmd_converge(const ExperimentConfig& cfg, const std::string& out_dir,
                                      int threads);
std::vector<std::string> cmd_nashgap(const ExperimentConfig& cfg, const std::string& out_dir,
                                     int threads);

}  // namespace habitmfg
