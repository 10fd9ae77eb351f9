#include "genprior/experiment.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "genprior/rng.hpp"

namespace genprior {

std::string_view to_string(Scenario s) {
  return s == Scenario::in_distribution ? "in_distribution" : "out_of_distribution";
}

Scenario parse_scenario(std::string_view name) {
  if (name == "in_distribution" || name == "id") return Scenario::in_distribution;
  if (name == "out_of_distribution" || name == "ood") return Scenario::out_of_distribution;
  throw ConfigError("unknown scenario '" + std::string(name) + "'");
}

double LambdaPolicy::lambda(ProblemMode mode, double sigma) const {
  if (kind == Kind::explicit_values) {
    const auto it = values.find(mode);
    if (it == values.end()) {
      throw ConfigError("explicit lambda policy has no value for method " + std::string(to_string(mode)));
    }
    return it->second;
  }
  const double s2 = sigma * sigma;
  return mode == ProblemMode::combined ? 10.0 * s2 : s2;
}

std::string LambdaPolicy::describe(ProblemMode mode) const {
  if (kind == Kind::explicit_values) return "explicit";
  return mode == ProblemMode::combined ? "10*sigma^2" : "sigma^2";
}

void SweepConfig::validate() const {
  if (sigma_grid.empty()) throw ConfigError("sweep: sigma grid is empty");
  for (double s : sigma_grid) {
    if (!(s > 0.0) || !std::isfinite(s)) throw ConfigError("sweep: sigma values must be positive");
  }
  if (seeds.empty()) throw ConfigError("sweep: seed list is empty");
  if (scenarios.empty()) throw ConfigError("sweep: no scenarios selected");
  if (methods.empty()) throw ConfigError("sweep: no methods selected");
  if (op.height * op.width < 2) throw ConfigError("sweep: object must have at least 2 pixels");
  if (k < 1 || k >= op.height * op.width) throw ConfigError("sweep: need 1 <= k < n");
  if (restarts < 1) throw ConfigError("sweep: restarts must be at least 1");
  if (threads < 1) throw ConfigError("sweep: threads must be at least 1");
  if (lambda_policy.kind == LambdaPolicy::Kind::explicit_values) {
    for (auto m : methods) lambda_policy.lambda(m, 1.0);
  }
  solver.validate();
}

std::vector<double> default_sigma_grid() {
  std::vector<double> grid;
  for (int i = 0; i < 9; ++i) grid.push_back(std::pow(10.0, -3.0 + 0.5 * i));
  return grid;
}

std::shared_ptr<const MaskedFourierOperator> make_operator(const OperatorParams& params) {
  const std::size_t n = params.height * params.width;
  DftPlan plan = params.two_dimensional ? DftPlan::two_dimensional(params.height, params.width)
                                        : DftPlan::one_dimensional(n);
  return std::make_shared<const MaskedFourierOperator>(
      sample_probes(params.ell, n, params.bernoulli_p, params.probe_seed), std::move(plan));
}

ExperimentContext prepare_context(const SweepConfig& cfg) {
  ExperimentContext ctx;
  ctx.complexifier = cfg.complexifier;
  if (cfg.dataset_path && std::filesystem::exists(*cfg.dataset_path)) {
    ctx.corpus = load_digits(*cfg.dataset_path);
  } else if (cfg.allow_synthetic) {
    ctx.corpus = synth_digits(cfg.synthetic_count, cfg.synthetic_seed);
  } else if (cfg.dataset_path) {
    throw DataError("dataset '" + cfg.dataset_path->string() + "' not found and synthetic fallback is disabled");
  } else {
    throw ConfigError("no dataset configured and synthetic fallback is disabled");
  }
  const std::size_t n = cfg.op.height * cfg.op.width;
  if (n != kDigitPixels) {
    throw ConfigError("object size " + std::to_string(n) + " does not match the 8x8 dataset");
  }

  if (cfg.generator_path) {
    std::ifstream in(*cfg.generator_path);
    if (!in) throw DataError("cannot open generator '" + cfg.generator_path->string() + "'");
    ctx.generator = std::make_shared<const AffineGenerator>(read_generator(in));
    if (ctx.generator->n() != n) throw ConfigError("generator dimension does not match the operator");
  } else {
    ctx.generator = std::make_shared<const AffineGenerator>(
        fit_pca(ctx.corpus.matrix(), complexified_mean(ctx.corpus, ctx.complexifier), cfg.k));
  }
  ctx.op = make_operator(cfg.op);
  return ctx;
}

ComplexField pick_truth(const ExperimentContext& ctx, Scenario scenario, std::uint64_t master_seed,
                        std::uint64_t seed) {
  if (scenario == Scenario::in_distribution) {
    return generate(*ctx.generator, sample_latent(*ctx.generator, derive_seed(master_seed, "truth-id", {seed})));
  }
  Rng rng(derive_seed(master_seed, "truth-ood", {seed}));
  return ctx.complexifier.apply(ctx.corpus.images[rng.index(ctx.corpus.size())]);
}

ReconReport solve_with_restarts(const UnifiedProblem& problem, const SolverConfig& solver, std::size_t restarts,
                                std::uint64_t restart_seed, const std::optional<ComplexField>& truth) {
  const CVector x0 = default_init(problem);
  ReconReport best = lbfgs_minimize(problem, x0, solver, truth);
  double total_ms = best.wall_ms;
  for (std::size_t r = 1; r < restarts; ++r) {
    // Perturb the default start with a complex Gaussian of matching scale.
    Rng rng(derive_seed(restart_seed, "restart", {r}));
    const double scale = std::max(x0.norm(), 1.0) / std::sqrt(static_cast<double>(x0.size()));
    CVector start = x0;
    for (Eigen::Index j = 0; j < start.size(); ++j) {
      const double re = rng.normal();
      start[j] += scale * std::sqrt(0.5) * cd(re, rng.normal());
    }
    ReconReport candidate = lbfgs_minimize(problem, start, solver, truth);
    total_ms += candidate.wall_ms;
    if (candidate.final_objective() < best.final_objective()) best = std::move(candidate);
  }
  best.wall_ms = total_ms;
  return best;
}

namespace {

struct TupleKey {
  std::size_t sigma_index;
  std::size_t scenario_index;
  std::size_t seed_index;
};

}  // namespace

std::vector<SweepRow> run_sweep(const SweepConfig& cfg, const ExperimentContext& ctx) {
  cfg.validate();
  // One data instance per (sigma, scenario, seed), shared by all methods so
  // they are compared on identical measurements.
  std::vector<TupleKey> keys;
  for (std::size_t s = 0; s < cfg.sigma_grid.size(); ++s) {
    for (std::size_t c = 0; c < cfg.scenarios.size(); ++c) {
      for (std::size_t i = 0; i < cfg.seeds.size(); ++i) keys.push_back({s, c, i});
    }
  }
  const std::size_t methods = cfg.methods.size();
  std::vector<SweepRow> rows(keys.size() * methods);

  auto work = [&](std::size_t key_index) {
    const TupleKey& key = keys[key_index];
    const double sigma = cfg.sigma_grid[key.sigma_index];
    const Scenario scenario = cfg.scenarios[key.scenario_index];
    const std::uint64_t seed = cfg.seeds[key.seed_index];
    const ComplexField truth = pick_truth(ctx, scenario, cfg.master_seed, seed);
    const MeasurementVector clean = forward_intensity(*ctx.op, truth);
    const auto scenario_tag = static_cast<std::uint64_t>(scenario);
    const MeasurementVector y =
        add_noise(clean, sigma, derive_seed(cfg.master_seed, "noise", {key.sigma_index, scenario_tag, seed}));
    const double snr = snr_db(clean, sigma);
    for (std::size_t m = 0; m < methods; ++m) {
      const ProblemMode mode = cfg.methods[m];
      const double lambda = cfg.lambda_policy.lambda(mode, sigma);
      const UnifiedProblem problem = build_problem(mode, ctx.op, ctx.generator, y, lambda,
                                                   WeightSpec::uniform(cfg.latent_weight, cfg.object_weight));
      const std::uint64_t restart_seed = derive_seed(
          cfg.master_seed, "trial", {key.sigma_index, static_cast<std::uint64_t>(mode), scenario_tag, seed});
      const ReconReport report = solve_with_restarts(problem, cfg.solver, cfg.restarts, restart_seed, truth);
      SweepRow& row = rows[key_index * methods + m];
      row.sigma = sigma;
      row.snr_db = snr;
      row.method = mode;
      row.scenario = scenario;
      row.seed = seed;
      row.lambda = lambda;
      row.lambda_rule = cfg.lambda_policy.describe(mode);
      row.rre = *report.rre;
      row.iterations = report.iterations;
      row.final_objective = report.final_objective();
      row.termination = report.termination;
      row.wall_ms = report.wall_ms;
    }
  };

  if (cfg.threads <= 1) {
    for (std::size_t i = 0; i < keys.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(cfg.threads);
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < cfg.threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t i = next++; i < keys.size(); i = next++) work(i);
        } catch (...) {
          errors[t] = std::current_exception();
          next = keys.size();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  return rows;
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  return run_sweep(cfg, prepare_context(cfg));
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "sigma,snr_db,method,scenario,seed,lambda,lambda_rule,rre,iterations,final_objective,termination\n";
  out << std::setprecision(17);
  for (const auto& r : rows) {
    out << r.sigma << ',' << r.snr_db << ',' << to_string(r.method) << ',' << to_string(r.scenario) << ','
        << r.seed << ',' << r.lambda << ',' << r.lambda_rule << ',' << r.rre << ',' << r.iterations << ','
        << r.final_objective << ',' << to_string(r.termination) << '\n';
  }
}

void write_timing_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "sigma,method,scenario,seed,wall_ms\n";
  out << std::setprecision(17);
  for (const auto& r : rows) {
    out << r.sigma << ',' << to_string(r.method) << ',' << to_string(r.scenario) << ',' << r.seed << ','
        << std::setprecision(6) << r.wall_ms << std::setprecision(17) << '\n';
  }
}

}  // namespace genprior
