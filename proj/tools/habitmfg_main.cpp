#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "habitmfg/commands.hpp"
#include "habitmfg/errors.hpp"

namespace {

struct CliOptions {
  std::string config_path;
  std::string out_dir;  // overrides config when set
  long long seed = -1;  // overrides config when >= 0
  int threads = 0;      // 0 means env or 1
};

int resolve_threads(int cli_threads) {
  if (cli_threads > 0) return cli_threads;
  if (const char* env = std::getenv("HABITMFG_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

void add_common(CLI::App* cmd, CliOptions& opt) {
  cmd->add_option("-c,--config", opt.config_path, "experiment config file")->required();
  cmd->add_option("-o,--out", opt.out_dir, "output directory (overrides out_dir)");
  cmd->add_option("-s,--seed", opt.seed, "seed override");
  cmd->add_option("-t,--threads", opt.threads, "worker threads (default HABITMFG_THREADS or 1)");
}

int run(const std::string& name, const CliOptions& opt) {
  habitmfg::ExperimentConfig cfg = habitmfg::load_config(opt.config_path);
  if (opt.seed >= 0) cfg.seed = static_cast<std::uint64_t>(opt.seed);
  const std::string out_dir = opt.out_dir.empty() ? cfg.out_dir : opt.out_dir;
  const int threads = resolve_threads(opt.threads);

  std::vector<std::string> written;
  if (name == "solve")
    written = habitmfg::cmd_solve(cfg, out_dir);
  else if (name == "figures")
    written = habitmfg::cmd_figures(cfg, out_dir);
  else if (name == "converge")
    written = habitmfg::cmd_converge(cfg, out_dir, threads);
  else
    written = habitmfg::cmd_nashgap(cfg, out_dir, threads);
  for (const auto& path : written) std::printf("wrote %s\n", path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mean field habit formation equilibria and simulation"};
  app.require_subcommand(1);

  CliOptions opt;
  const char* names[] = {"solve", "figures", "converge", "nashgap"};
  const char* blurbs[] = {"solve one equilibrium and write its curves",
                          "sweep a parameter list and write comparison curves",
                          "measure the finite-population habit deviation rate",
                          "estimate approximate-equilibrium gaps against population size"};
  for (int i = 0; i < 4; ++i) add_common(app.add_subcommand(names[i], blurbs[i]), opt);

  CLI11_PARSE(app, argc, argv);

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    return run(name, opt);
  } catch (const habitmfg::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const habitmfg::DomainError& e) {
    std::fprintf(stderr, "domain error: %s\n", e.what());
    return 2;
  } catch (const habitmfg::SolverError& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return 3;
  } catch (const habitmfg::InfeasibleError& e) {
    std::fprintf(stderr, "infeasible: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
