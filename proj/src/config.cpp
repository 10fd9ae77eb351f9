#include "genprior/config.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>

#include <boost/property_tree/ini_parser.hpp>

namespace genprior {

namespace pt = boost::property_tree;

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  for (char c : text) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!item.empty()) out.push_back(item);
      item.clear();
    } else {
      item.push_back(c);
    }
  }
  if (!item.empty()) out.push_back(item);
  return out;
}

double to_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (trim(text.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("config key '" + key + "': expected a number, got '" + text + "'");
}

std::uint64_t to_u64(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    if (!text.empty() && text.front() != '-') {
      const unsigned long long v = std::stoull(text, &used);
      if (trim(text.substr(used)).empty()) return v;
    }
  } catch (const std::exception&) {
  }
  throw ConfigError("config key '" + key + "': expected a nonnegative integer, got '" + text + "'");
}

}  // namespace

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  return parse(in);
}

Config Config::parse(std::istream& in) {
  Config cfg;
  try {
    pt::read_ini(in, cfg.tree_);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config: " + e.message() + " at line " + std::to_string(e.line()));
  }
  return cfg;
}

void Config::set(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw UsageError("expected section.key=value, got '" + assignment + "'");
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void Config::set(const std::string& key, const std::string& value) {
  if (key.find('.') == std::string::npos) throw UsageError("config key '" + key + "' must be section.key");
  tree_.put(key, value);
}

bool Config::has(const std::string& key) const { return tree_.get_optional<std::string>(key).has_value(); }

std::string Config::get(const std::string& key, const std::string& fallback) const {
  const auto v = tree_.get_optional<std::string>(key);
  return v ? trim(*v) : fallback;
}

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? to_double(key, get(key, "")) : fallback;
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
  return has(key) ? to_u64(key, get(key, "")) : fallback;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string v = get(key, "");
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config key '" + key + "': expected a boolean, got '" + v + "'");
}

std::vector<std::string> Config::get_list(const std::string& key, const std::vector<std::string>& fallback) const {
  return has(key) ? split_list(get(key, "")) : fallback;
}

void Config::reject_unknown(const std::vector<std::string>& known) const {
  const std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& [section, children] : tree_) {
    if (children.empty()) throw ConfigError("config key '" + section + "' is outside any section");
    for (const auto& [key, value] : children) {
      const std::string full = section + "." + key;
      if (!allowed.count(full)) throw ConfigError("unknown config key '" + full + "'");
    }
  }
}

const std::vector<std::string>& known_config_keys() {
  static const std::vector<std::string> keys = {
      "operator.height", "operator.width", "operator.transform", "operator.probes", "operator.bernoulli_p",
      "operator.probe_seed",
      "generator.k", "generator.path",
      "dataset.path", "dataset.allow_synthetic", "dataset.synthetic_count", "dataset.synthetic_seed",
      "dataset.complexify", "dataset.phi_max",
      "solver.memory", "solver.grad_tol", "solver.max_iters", "solver.wolfe_c1", "solver.wolfe_c2",
      "solver.max_line_search_steps", "solver.restarts",
      "sweep.sigma_grid", "sweep.seeds", "sweep.scenarios", "sweep.methods", "sweep.lambda_policy",
      "sweep.lambda_conventional", "sweep.lambda_generative", "sweep.lambda_combined", "sweep.latent_weight",
      "sweep.object_weight", "sweep.master_seed", "sweep.threads",
      "run.output_dir",
      "reconstruct.method", "reconstruct.scenario", "reconstruct.sigma", "reconstruct.seed",
      "vanderlugt.tau_rel",
      "bounds.trials", "bounds.seed", "bounds.n", "bounds.k", "bounds.m", "bounds.lambda", "bounds.noise",
      "bounds.off_range", "bounds.ratio_pairs", "bounds.ratio_probes", "bounds.ratio_side",
      "samples.count",
  };
  return keys;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const std::uint64_t first = to_u64("seeds", trim(text.substr(0, dots)));
    const std::uint64_t last = to_u64("seeds", trim(text.substr(dots + 2)));
    if (last < first) throw ConfigError("seed range '" + text + "' is empty");
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t s = first; s <= last; ++s) seeds.push_back(s);
    return seeds;
  }
  std::vector<std::uint64_t> seeds;
  for (const auto& item : split_list(text)) seeds.push_back(to_u64("seeds", item));
  return seeds;
}

SweepConfig sweep_config_from(const Config& cfg) {
  cfg.reject_unknown(known_config_keys());
  SweepConfig s;

  s.op.height = cfg.get_u64("operator.height", s.op.height);
  s.op.width = cfg.get_u64("operator.width", s.op.width);
  const std::string transform = cfg.get("operator.transform", "2d");
  if (transform != "2d" && transform != "1d") throw ConfigError("operator.transform must be 2d or 1d");
  s.op.two_dimensional = transform == "2d";
  s.op.ell = cfg.get_u64("operator.probes", s.op.ell);
  s.op.bernoulli_p = cfg.get_double("operator.bernoulli_p", s.op.bernoulli_p);
  s.op.probe_seed = cfg.get_u64("operator.probe_seed", s.op.probe_seed);

  s.k = cfg.get_u64("generator.k", s.k);
  if (cfg.has("generator.path") && !cfg.get("generator.path", "").empty()) {
    s.generator_path = cfg.get("generator.path", "");
  }

  if (cfg.has("dataset.path") && !cfg.get("dataset.path", "").empty()) s.dataset_path = cfg.get("dataset.path", "");
  s.allow_synthetic = cfg.get_bool("dataset.allow_synthetic", s.allow_synthetic);
  s.synthetic_count = cfg.get_u64("dataset.synthetic_count", s.synthetic_count);
  s.synthetic_seed = cfg.get_u64("dataset.synthetic_seed", s.synthetic_seed);
  const std::string mode = cfg.get("dataset.complexify", "phase_object");
  if (mode == "phase_object") {
    s.complexifier = Complexifier::phase_object(cfg.get_double("dataset.phi_max", s.complexifier.phi_max));
  } else if (mode == "amplitude_only") {
    s.complexifier = Complexifier::amplitude_only();
  } else {
    throw ConfigError("dataset.complexify must be phase_object or amplitude_only");
  }

  s.solver.memory = cfg.get_u64("solver.memory", s.solver.memory);
  s.solver.grad_tol = cfg.get_double("solver.grad_tol", s.solver.grad_tol);
  s.solver.max_iters = cfg.get_u64("solver.max_iters", s.solver.max_iters);
  s.solver.wolfe_c1 = cfg.get_double("solver.wolfe_c1", s.solver.wolfe_c1);
  s.solver.wolfe_c2 = cfg.get_double("solver.wolfe_c2", s.solver.wolfe_c2);
  s.solver.max_line_search_steps = cfg.get_u64("solver.max_line_search_steps", s.solver.max_line_search_steps);
  s.restarts = cfg.get_u64("solver.restarts", s.restarts);

  if (cfg.has("sweep.sigma_grid")) {
    for (const auto& v : cfg.get_list("sweep.sigma_grid", {})) s.sigma_grid.push_back(to_double("sweep.sigma_grid", v));
  } else {
    s.sigma_grid = default_sigma_grid();
  }
  s.seeds = cfg.has("sweep.seeds") ? parse_seed_list(cfg.get("sweep.seeds", "")) : parse_seed_list("1..10");
  if (cfg.has("sweep.scenarios")) {
    s.scenarios.clear();
    for (const auto& v : cfg.get_list("sweep.scenarios", {})) s.scenarios.push_back(parse_scenario(v));
  }
  if (cfg.has("sweep.methods")) {
    s.methods.clear();
    for (const auto& v : cfg.get_list("sweep.methods", {})) s.methods.push_back(parse_problem_mode(v));
  }
  const std::string policy = cfg.get("sweep.lambda_policy", "paper_default");
  if (policy == "explicit") {
    s.lambda_policy.kind = LambdaPolicy::Kind::explicit_values;
    for (ProblemMode m : {ProblemMode::conventional, ProblemMode::generative, ProblemMode::combined}) {
      const std::string key = "sweep.lambda_" + std::string(to_string(m));
      if (cfg.has(key)) s.lambda_policy.values[m] = cfg.get_double(key, 0.0);
    }
  } else if (policy != "paper_default") {
    throw ConfigError("sweep.lambda_policy must be paper_default or explicit");
  }
  s.latent_weight = cfg.get_double("sweep.latent_weight", 1.0);
  s.object_weight = cfg.get_double("sweep.object_weight", 1.0);
  s.master_seed = cfg.get_u64("sweep.master_seed", s.master_seed);
  s.threads = cfg.get_u64("sweep.threads", s.threads);
  return s;
}

LemmaDims lemma_dims_from(const Config& cfg) {
  LemmaDims d;
  d.n = cfg.get_u64("bounds.n", d.n);
  d.k = cfg.get_u64("bounds.k", d.k);
  d.m = cfg.get_u64("bounds.m", d.m);
  d.noise = cfg.get_double("bounds.noise", d.noise);
  d.off_range = cfg.get_double("bounds.off_range", d.off_range);
  return d;
}

void describe(const SweepConfig& s, std::ostream& out) {
  out << std::setprecision(17);
  out << "operator.height = " << s.op.height << '\n'
      << "operator.width = " << s.op.width << '\n'
      << "operator.transform = " << (s.op.two_dimensional ? "2d" : "1d") << '\n'
      << "operator.probes = " << s.op.ell << '\n'
      << "operator.bernoulli_p = " << s.op.bernoulli_p << '\n'
      << "operator.probe_seed = " << s.op.probe_seed << '\n'
      << "generator.k = " << s.k << '\n'
      << "generator.path = " << (s.generator_path ? s.generator_path->string() : "") << '\n'
      << "dataset.path = " << (s.dataset_path ? s.dataset_path->string() : "") << '\n'
      << "dataset.allow_synthetic = " << (s.allow_synthetic ? "true" : "false") << '\n'
      << "dataset.synthetic_count = " << s.synthetic_count << '\n'
      << "dataset.synthetic_seed = " << s.synthetic_seed << '\n'
      << "dataset.complexify = "
      << (s.complexifier.mode == Complexifier::Mode::phase_object ? "phase_object" : "amplitude_only") << '\n'
      << "dataset.phi_max = " << s.complexifier.phi_max << '\n'
      << "solver.memory = " << s.solver.memory << '\n'
      << "solver.grad_tol = " << s.solver.grad_tol << '\n'
      << "solver.max_iters = " << s.solver.max_iters << '\n'
      << "solver.wolfe_c1 = " << s.solver.wolfe_c1 << '\n'
      << "solver.wolfe_c2 = " << s.solver.wolfe_c2 << '\n'
      << "solver.max_line_search_steps = " << s.solver.max_line_search_steps << '\n'
      << "solver.restarts = " << s.restarts << '\n';
  out << "sweep.sigma_grid =";
  for (double v : s.sigma_grid) out << ' ' << v;
  out << "\nsweep.seeds =";
  for (auto v : s.seeds) out << ' ' << v;
  out << "\nsweep.scenarios =";
  for (auto v : s.scenarios) out << ' ' << to_string(v);
  out << "\nsweep.methods =";
  for (auto v : s.methods) out << ' ' << to_string(v);
  out << "\nsweep.lambda_policy = "
      << (s.lambda_policy.kind == LambdaPolicy::Kind::paper_default ? "paper_default" : "explicit") << '\n';
  for (const auto& [mode, value] : s.lambda_policy.values) {
    out << "sweep.lambda_" << to_string(mode) << " = " << value << '\n';
  }
  out << "sweep.latent_weight = " << s.latent_weight.real() << '\n'
      << "sweep.object_weight = " << s.object_weight.real() << '\n'
      << "sweep.master_seed = " << s.master_seed << '\n'
      << "sweep.threads = " << s.threads << '\n';
}

}  // namespace genprior
