#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "genprior/dataset.hpp"
#include "genprior/generative.hpp"
#include "genprior/measurement.hpp"
#include "genprior/solver.hpp"

namespace genprior {

enum class Scenario { in_distribution, out_of_distribution };

std::string_view to_string(Scenario s);
Scenario parse_scenario(std::string_view name);

struct OperatorParams {
  std::size_t height = 8;
  std::size_t width = 8;
  bool two_dimensional = true;
  std::size_t ell = 100;
  double bernoulli_p = 0.5;
  std::uint64_t probe_seed = 1;
};

struct LambdaPolicy {
  enum class Kind { paper_default, explicit_values };
  Kind kind = Kind::paper_default;
  std::map<ProblemMode, double> values;  // explicit_values only

  /// paper_default: sigma^2 for conventional and generative, 10 sigma^2
  /// for combined.
  double lambda(ProblemMode mode, double sigma) const;
  std::string describe(ProblemMode mode) const;
};

struct SweepConfig {
  std::vector<double> sigma_grid;
  std::vector<std::uint64_t> seeds;
  std::vector<Scenario> scenarios{Scenario::in_distribution, Scenario::out_of_distribution};
  std::vector<ProblemMode> methods{ProblemMode::conventional, ProblemMode::generative, ProblemMode::combined};
  LambdaPolicy lambda_policy;
  cd latent_weight = 1.0;
  cd object_weight = 1.0;
  std::uint64_t master_seed = 20250101;

  OperatorParams op;
  std::size_t k = 30;
  std::optional<std::filesystem::path> generator_path;
  std::optional<std::filesystem::path> dataset_path;
  bool allow_synthetic = true;
  std::size_t synthetic_count = 1000;
  std::uint64_t synthetic_seed = 7;
  Complexifier complexifier;

  SolverConfig solver;
  std::size_t restarts = 1;
  std::size_t threads = 1;

  /// Throws ConfigError on empty grids or invalid values.
  void validate() const;
};

/// Default sigma grid: 9 log-spaced values from 1e-3 to 10 (four decades).
std::vector<double> default_sigma_grid();

/// Everything a run shares: corpus, generator, operator. Immutable.
struct ExperimentContext {
  DigitCorpus corpus;
  Complexifier complexifier;
  std::shared_ptr<const AffineGenerator> generator;
  std::shared_ptr<const MaskedFourierOperator> op;
};

/// Loads the dataset (or the synthetic fallback), loads or fits the
/// generator, and samples the probes.
ExperimentContext prepare_context(const SweepConfig& cfg);

std::shared_ptr<const MaskedFourierOperator> make_operator(const OperatorParams& params);

/// Ground truth for one (scenario, seed): a generator sample in
/// distribution, a complexified corpus image out of distribution.
ComplexField pick_truth(const ExperimentContext& ctx, Scenario scenario, std::uint64_t master_seed,
                        std::uint64_t seed);

struct SweepRow {
  double sigma = 0.0;
  double snr_db = 0.0;
  ProblemMode method = ProblemMode::conventional;
  Scenario scenario = Scenario::in_distribution;
  std::uint64_t seed = 0;
  double lambda = 0.0;
  std::string lambda_rule;
  double rre = 0.0;
  std::size_t iterations = 0;
  double final_objective = 0.0;
  Termination termination = Termination::max_iters;
  double wall_ms = 0.0;
};

/// Solves one problem from default_init, plus `restarts - 1` seeded random
/// restarts; keeps the lowest final objective.
ReconReport solve_with_restarts(const UnifiedProblem& problem, const SolverConfig& solver, std::size_t restarts,
                                std::uint64_t restart_seed, const std::optional<ComplexField>& truth);

/// Runs every (sigma, scenario, seed, method) tuple. Rows come back ordered
/// by sigma index, then scenario, seed and method regardless of `threads`.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg, const ExperimentContext& ctx);
std::vector<SweepRow> run_sweep(const SweepConfig& cfg);

/// Deterministic columns only; wall-clock time goes to write_timing_csv.
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);
void write_timing_csv(const std::vector<SweepRow>& rows, std::ostream& out);

inline constexpr int kSweepSchemaVersion = 1;

}  // namespace genprior
