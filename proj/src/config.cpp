#include "habitmfg/config.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "habitmfg/errors.hpp"

namespace habitmfg {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& key, const std::string& value) {
  const char* begin = value.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw ConfigError("invalid value for " + key + ": '" + value + "'");
  return v;
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
  if (value.empty() || value[0] == '-')
    throw ConfigError("invalid value for " + key + ": '" + value + "'");
  const char* begin = value.c_str();
  char* end = nullptr;
  unsigned long long v = std::strtoull(begin, &end, 10);
  if (end == begin || *end != '\0')
    throw ConfigError("invalid value for " + key + ": '" + value + "'");
  return static_cast<std::uint64_t>(v);
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("invalid value for " + key + ": '" + value + "'");
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::string item;
  std::stringstream ss(value);
  while (std::getline(ss, item, ',')) items.push_back(trim(item));
  return items;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  for (const auto& item : split_list(value)) out.push_back(parse_double(key, item));
  if (out.empty()) throw ConfigError("empty list for " + key);
  return out;
}

std::vector<std::size_t> parse_size_list(const std::string& key, const std::string& value) {
  std::vector<std::size_t> out;
  for (const auto& item : split_list(value)) {
    std::uint64_t v = parse_uint(key, item);
    if (v == 0) throw ConfigError(key + " entries must be positive");
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) throw ConfigError("empty list for " + key);
  return out;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "mode",        "T",          "mu",           "sigma",
      "p",           "x0",         "z0",           "delta",
      "alpha",       "epsilon",    "n_steps",      "x_eval",
      "seed",        "out_dir",    "sweep.p_list", "sweep.delta_list",
      "sweep.alpha_list",          "sim.n_list",   "sim.M",
      "sim.agent",   "sim.crn",    "sim.scheme",   "sim.kappa",
      "solver.tol",  "solver.max_iter",            "solver.damping",
      "solver.mode"};
  return keys;
}

std::string join_doubles(const std::vector<double>& values) {
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", values[i]);
    if (i) out += ',';
    out += buf;
  }
  return out;
}

std::string join_sizes(const std::vector<std::size_t>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

}  // namespace

const char* mode_name(Mode mode) {
  return mode == Mode::linear ? "linear" : "multiplicative";
}

const char* scheme_name(PerturbScheme scheme) {
  switch (scheme) {
    case PerturbScheme::homogeneous: return "homogeneous";
    case PerturbScheme::shrinking: return "shrinking";
    case PerturbScheme::shrinking_seeded: return "shrinking_seeded";
  }
  return "homogeneous";
}

ExperimentConfig parse_config_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + " is not 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + " has an empty key");
    if (!known_keys().count(key)) throw ConfigError("unknown key: " + key);
    if (kv.count(key)) throw ConfigError("duplicate key: " + key);
    kv[key] = value;
  }

  for (const char* req : {"mode", "T", "mu", "sigma", "p", "x0", "z0", "delta"})
    if (!kv.count(req)) throw ConfigError(std::string("missing required key: ") + req);

  ExperimentConfig cfg;
  const std::string& mode = kv["mode"];
  if (mode == "linear")
    cfg.mode = Mode::linear;
  else if (mode == "multiplicative")
    cfg.mode = Mode::multiplicative;
  else
    throw ConfigError("mode must be 'linear' or 'multiplicative', got '" + mode + "'");

  cfg.type.mu = parse_double("mu", kv["mu"]);
  cfg.type.sigma = parse_double("sigma", kv["sigma"]);
  cfg.type.p = parse_double("p", kv["p"]);
  cfg.habit.T = parse_double("T", kv["T"]);
  cfg.habit.x0 = parse_double("x0", kv["x0"]);
  cfg.habit.z0 = parse_double("z0", kv["z0"]);
  cfg.habit.delta = parse_double("delta", kv["delta"]);
  if (kv.count("alpha")) cfg.habit.alpha = parse_double("alpha", kv["alpha"]);
  if (kv.count("epsilon")) cfg.habit.epsilon = parse_double("epsilon", kv["epsilon"]);
  if (kv.count("n_steps")) {
    cfg.n_steps = static_cast<std::size_t>(parse_uint("n_steps", kv["n_steps"]));
    if (cfg.n_steps < 2) throw ConfigError("n_steps must be at least 2");
  }
  if (kv.count("x_eval")) {
    cfg.x_eval = parse_double("x_eval", kv["x_eval"]);
    if (cfg.x_eval <= 0.0) throw ConfigError("x_eval must be positive");
  }
  if (kv.count("seed")) cfg.seed = parse_uint("seed", kv["seed"]);
  if (kv.count("out_dir")) {
    if (kv["out_dir"].empty()) throw ConfigError("out_dir must not be empty");
    cfg.out_dir = kv["out_dir"];
  }

  if (kv.count("sweep.p_list")) cfg.p_list = parse_double_list("sweep.p_list", kv["sweep.p_list"]);
  if (kv.count("sweep.delta_list"))
    cfg.delta_list = parse_double_list("sweep.delta_list", kv["sweep.delta_list"]);
  if (kv.count("sweep.alpha_list"))
    cfg.alpha_list = parse_double_list("sweep.alpha_list", kv["sweep.alpha_list"]);

  if (kv.count("sim.n_list")) cfg.n_list = parse_size_list("sim.n_list", kv["sim.n_list"]);
  if (kv.count("sim.M")) {
    cfg.sim_m = static_cast<std::size_t>(parse_uint("sim.M", kv["sim.M"]));
    if (cfg.sim_m == 0) throw ConfigError("sim.M must be positive");
  }
  if (kv.count("sim.agent"))
    cfg.sim_agent = static_cast<std::size_t>(parse_uint("sim.agent", kv["sim.agent"]));
  if (kv.count("sim.crn")) cfg.sim_crn = parse_bool("sim.crn", kv["sim.crn"]);
  if (kv.count("sim.scheme")) {
    const std::string& s = kv["sim.scheme"];
    if (s == "homogeneous")
      cfg.sim_scheme = PerturbScheme::homogeneous;
    else if (s == "shrinking")
      cfg.sim_scheme = PerturbScheme::shrinking;
    else if (s == "shrinking_seeded")
      cfg.sim_scheme = PerturbScheme::shrinking_seeded;
    else
      throw ConfigError("invalid value for sim.scheme: '" + s + "'");
  }
  if (kv.count("sim.kappa")) {
    cfg.sim_kappa = parse_double("sim.kappa", kv["sim.kappa"]);
    if (cfg.sim_kappa < 0.0) throw ConfigError("sim.kappa must be non-negative");
  }

  if (kv.count("solver.tol")) cfg.solver.tol = parse_double("solver.tol", kv["solver.tol"]);
  if (kv.count("solver.max_iter"))
    cfg.solver.max_iter = static_cast<int>(parse_uint("solver.max_iter", kv["solver.max_iter"]));
  if (kv.count("solver.damping"))
    cfg.solver.damping = parse_double("solver.damping", kv["solver.damping"]);
  if (kv.count("solver.mode")) {
    const std::string& s = kv["solver.mode"];
    if (s == "damped")
      cfg.solver.mode = MultSolverMode::damped;
    else if (s == "stitched")
      cfg.solver.mode = MultSolverMode::stitched;
    else
      throw ConfigError("invalid value for solver.mode: '" + s + "'");
  }

  validate(cfg.type);
  validate(cfg.habit, cfg.mode);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string canonical_text(const ExperimentConfig& cfg) {
  char buf[64];
  std::string out;
  auto put = [&](const char* key, const std::string& value) {
    out += key;
    out += '=';
    out += value;
    out += '\n';
  };
  auto put_d = [&](const char* key, double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    put(key, buf);
  };
  put("mode", mode_name(cfg.mode));
  put_d("T", cfg.habit.T);
  put_d("mu", cfg.type.mu);
  put_d("sigma", cfg.type.sigma);
  put_d("p", cfg.type.p);
  put_d("x0", cfg.habit.x0);
  put_d("z0", cfg.habit.z0);
  put_d("delta", cfg.habit.delta);
  put_d("alpha", cfg.habit.alpha);
  put_d("epsilon", cfg.habit.epsilon);
  put("n_steps", std::to_string(cfg.n_steps));
  put_d("x_eval", cfg.eval_wealth());
  put("seed", std::to_string(cfg.seed));
  put("sweep.p_list", join_doubles(cfg.p_list));
  put("sweep.delta_list", join_doubles(cfg.delta_list));
  put("sweep.alpha_list", join_doubles(cfg.alpha_list));
  put("sim.n_list", join_sizes(cfg.n_list));
  put("sim.M", std::to_string(cfg.sim_m));
  put("sim.agent", std::to_string(cfg.sim_agent));
  put("sim.crn", cfg.sim_crn ? "true" : "false");
  put("sim.scheme", scheme_name(cfg.sim_scheme));
  put_d("sim.kappa", cfg.sim_kappa);
  put_d("solver.tol", cfg.solver.tol);
  put("solver.max_iter", std::to_string(cfg.solver.max_iter));
  put_d("solver.damping", cfg.solver.damping);
  put("solver.mode", cfg.solver.mode == MultSolverMode::damped ? "damped" : "stitched");
  return out;
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  // FNV-1a, 64 bit
  std::string text = canonical_text(cfg);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace habitmfg
