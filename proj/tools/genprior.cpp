// genprior: batch front end for simulation, reconstruction, sweeps,
// defect detection and bound checks.

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "genprior/bounds.hpp"
#include "genprior/config.hpp"
#include "genprior/experiment.hpp"
#include "genprior/io.hpp"
#include "genprior/rng.hpp"
#include "genprior/vanderlugt.hpp"

#ifndef GENPRIOR_VERSION
#define GENPRIOR_VERSION "unknown"
#endif

namespace fs = std::filesystem;
using namespace genprior;

namespace {

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
};

struct Run {
  std::string name;
  Config config;
  SweepConfig sweep;
  fs::path dir;
  std::vector<std::string> manifest_extra;
};

std::string command_line;

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

void add_common(CLI::App* sub, Common& common) {
  sub->add_option("--config", common.config_path, "INI configuration file");
  sub->add_option("--set", common.overrides, "Override a key, section.key=value (repeatable)");
  sub->add_option("--out", common.out_dir, "Run directory");
}

Run open_run(const std::string& name, const Common& common) {
  Run run;
  run.name = name;
  if (!common.config_path.empty()) run.config = Config::load(common.config_path);
  for (const auto& assignment : common.overrides) run.config.set(assignment);
  run.sweep = sweep_config_from(run.config);
  run.dir = !common.out_dir.empty() ? fs::path(common.out_dir)
                                    : fs::path(run.config.get("run.output_dir", "runs")) / name;
  return run;
}

void write_config_tree(const Config& cfg, std::ostream& out) {
  for (const auto& [section, children] : cfg.tree()) {
    for (const auto& [key, value] : children) out << section << '.' << key << " = " << value.data() << '\n';
  }
}

void write_manifest(const Run& run) {
  std::ofstream out(run.dir / "manifest.txt");
  out << "program = genprior\n"
      << "version = " << GENPRIOR_VERSION << '\n'
      << "rng_version = " << kRngVersion << '\n'
      << "sweep_schema_version = " << kSweepSchemaVersion << '\n'
      << "subcommand = " << run.name << '\n'
      << "command_line = " << command_line << '\n'
      << "timestamp_utc = " << utc_timestamp() << '\n';
  for (const auto& line : run.manifest_extra) out << line << '\n';
  out << "\n[config]\n";
  write_config_tree(run.config, out);
  out << "\n[resolved]\n";
  describe(run.sweep, out);
}

std::ofstream open_output(const Run& run, const std::string& file) {
  std::ofstream out(run.dir / file);
  if (!out) throw DataError("cannot write '" + (run.dir / file).string() + "'");
  out << std::setprecision(17);
  return out;
}

void prepare_dir(Run& run) { fs::create_directories(run.dir); }

std::string setting(const Run& run, const std::string& key, const std::string& fallback) {
  return run.config.get(key, fallback);
}

// --- train-generator ------------------------------------------------------

int cmd_train_generator(Run& run) {
  SweepConfig cfg = run.sweep;
  cfg.generator_path.reset();
  prepare_dir(run);
  const ExperimentContext ctx = prepare_context(cfg);
  const AffineGenerator& gen = *ctx.generator;
  {
    std::ofstream out(run.dir / "generator.txt");
    write_generator(gen, out);
  }
  const Eigen::MatrixXd centered = ctx.corpus.matrix().rowwise() - ctx.corpus.matrix().colwise().mean();
  const double total_var = centered.squaredNorm() / static_cast<double>(ctx.corpus.size() - 1);
  const double kept_var = gen.singular_values().squaredNorm();

  auto report = open_output(run, "report.txt");
  report << "dataset = " << ctx.corpus.source << '\n'
         << "images = " << ctx.corpus.size() << '\n'
         << "n = " << gen.n() << '\n'
         << "k = " << gen.k() << '\n'
         << "explained_variance = " << kept_var / total_var << '\n'
         << "singular_values =";
  for (Eigen::Index j = 0; j < gen.singular_values().size(); ++j) report << ' ' << gen.singular_values()[j];
  report << '\n';
  run.manifest_extra.push_back("dataset = " + ctx.corpus.source);
  write_manifest(run);
  std::cout << "wrote " << (run.dir / "generator.txt").string() << " (k = " << gen.k() << ")\n";
  return 0;
}

// --- simulate -------------------------------------------------------------

struct TruthChoice {
  Scenario scenario;
  std::uint64_t seed;
  double sigma;
};

TruthChoice truth_choice(const Run& run) {
  return {parse_scenario(setting(run, "reconstruct.scenario", "in_distribution")),
          run.config.get_u64("reconstruct.seed", 1), run.config.get_double("reconstruct.sigma", 0.0)};
}

std::uint64_t single_noise_seed(const SweepConfig& cfg, const TruthChoice& t) {
  return derive_seed(cfg.master_seed, "single-noise", {static_cast<std::uint64_t>(t.scenario), t.seed});
}

int cmd_simulate(Run& run, bool plain, double defect) {
  const TruthChoice t = truth_choice(run);
  if (defect < 0.0) throw ConfigError("--defect must be nonnegative");
  prepare_dir(run);
  const ExperimentContext ctx = prepare_context(run.sweep);
  const ComplexField truth = pick_truth(ctx, t.scenario, run.sweep.master_seed, t.seed);

  auto report = open_output(run, "report.txt");
  if (plain) {
    // Plain Fourier pattern of truth + spike, with truth itself as the fit.
    CVector object = truth.values();
    std::size_t pixel = 0;
    if (defect > 0.0) {
      Rng rng(derive_seed(run.sweep.master_seed, "defect-pixel", {t.seed}));
      pixel = rng.index(truth.size());
      object[static_cast<Eigen::Index>(pixel)] += defect * truth.values().cwiseAbs().maxCoeff();
    }
    const DftPlan& plan = ctx.op->plan();
    MeasurementVector clean{plan.forward(object).cwiseAbs2(), 0.0};
    const MeasurementVector y =
        add_noise(clean, t.sigma, single_noise_seed(run.sweep, t));
    save_field(truth, run.dir / "fit.txt");
    save_field(ComplexField(object, truth.layout()), run.dir / "truth.txt");
    save_measurements(y, run.dir / "measurements.txt");
    report << "model = plain_fourier\n";
    if (defect > 0.0) report << "defect_pixel = " << pixel << "\ndefect_amplitude = " << defect << '\n';
  } else {
    const MeasurementVector clean = forward_intensity(*ctx.op, truth);
    const MeasurementVector y = add_noise(clean, t.sigma, single_noise_seed(run.sweep, t));
    save_field(truth, run.dir / "truth.txt");
    save_measurements(y, run.dir / "measurements.txt");
    report << "model = masked_fourier\nsnr_db = " << snr_db(clean, t.sigma) << '\n';
  }
  emit_pgm(truth, FieldPart::real, run.dir / "truth_real.pgm");
  emit_pgm(truth, FieldPart::imag, run.dir / "truth_imag.pgm");
  report << "scenario = " << to_string(t.scenario) << "\nseed = " << t.seed << "\nsigma = " << t.sigma << '\n';
  run.manifest_extra.push_back("truth_seed = " + std::to_string(t.seed));
  run.manifest_extra.push_back("noise_seed = " + std::to_string(single_noise_seed(run.sweep, t)));
  write_manifest(run);
  std::cout << "wrote " << run.dir.string() << '\n';
  return 0;
}

// --- reconstruct ----------------------------------------------------------

int cmd_reconstruct(Run& run, const std::string& measurements_path, const std::string& truth_path) {
  const ProblemMode mode = parse_problem_mode(setting(run, "reconstruct.method", "combined"));
  const TruthChoice t = truth_choice(run);
  prepare_dir(run);
  const ExperimentContext ctx = prepare_context(run.sweep);

  std::optional<ComplexField> truth;
  MeasurementVector y;
  double snr = 0.0;
  if (!measurements_path.empty()) {
    y = load_measurements(measurements_path);
    if (y.size() != ctx.op->m()) {
      throw DimensionError("measurement file has " + std::to_string(y.size()) + " values, operator expects " +
                           std::to_string(ctx.op->m()));
    }
    if (!truth_path.empty()) truth = load_field(truth_path);
  } else {
    truth = pick_truth(ctx, t.scenario, run.sweep.master_seed, t.seed);
    const MeasurementVector clean = forward_intensity(*ctx.op, *truth);
    y = add_noise(clean, t.sigma, single_noise_seed(run.sweep, t));
    snr = snr_db(clean, t.sigma);
  }
  const double lambda = run.sweep.lambda_policy.lambda(mode, y.sigma);
  const UnifiedProblem problem = build_problem(mode, ctx.op, ctx.generator, y, lambda,
                                               WeightSpec::uniform(run.sweep.latent_weight, run.sweep.object_weight));
  const ReconReport result =
      solve_with_restarts(problem, run.sweep.solver, run.sweep.restarts,
                          derive_seed(run.sweep.master_seed, "single-trial", {static_cast<std::uint64_t>(mode)}), truth);

  save_field(result.solution_object, run.dir / "solution.txt");
  if (result.solution_object.layout()) {
    emit_pgm(result.solution_object, FieldPart::real, run.dir / "solution_real.pgm");
    emit_pgm(result.solution_object, FieldPart::imag, run.dir / "solution_imag.pgm");
  }
  auto report = open_output(run, "report.txt");
  report << "method = " << to_string(mode) << "\nlambda = " << lambda
         << "\nlambda_rule = " << run.sweep.lambda_policy.describe(mode) << "\nsigma = " << y.sigma << '\n';
  if (measurements_path.empty()) {
    report << "scenario = " << to_string(t.scenario) << "\nseed = " << t.seed << "\nsnr_db = " << snr << '\n';
  }
  write_report(result, report);
  write_manifest(run);
  std::cout << "method " << to_string(mode) << ": " << result.iterations << " iterations, "
            << to_string(result.termination);
  if (result.rre) std::cout << ", rre = " << *result.rre;
  std::cout << '\n';
  return 0;
}

// --- sweep ----------------------------------------------------------------

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

int cmd_sweep(Run& run) {
  run.sweep.validate();
  prepare_dir(run);
  const ExperimentContext ctx = prepare_context(run.sweep);
  const std::vector<SweepRow> rows = run_sweep(run.sweep, ctx);
  {
    auto out = open_output(run, "sweep.csv");
    write_sweep_csv(rows, out);
  }
  {
    auto out = open_output(run, "timing.csv");
    write_timing_csv(rows, out);
  }
  std::map<std::tuple<double, int, int>, std::pair<std::vector<double>, std::vector<double>>> groups;
  for (const auto& r : rows) {
    auto& g = groups[{r.sigma, static_cast<int>(r.scenario), static_cast<int>(r.method)}];
    g.first.push_back(r.rre);
    g.second.push_back(r.snr_db);
  }
  auto report = open_output(run, "report.txt");
  report << std::setprecision(6) << "dataset = " << ctx.corpus.source << "\nrows = " << rows.size()
         << "\n\n# medians over seeds\nsigma,scenario,method,median_snr_db,median_rre\n";
  for (const auto& [key, values] : groups) {
    const auto [sigma, scenario, method] = key;
    report << sigma << ',' << to_string(static_cast<Scenario>(scenario)) << ','
           << to_string(static_cast<ProblemMode>(method)) << ',' << median(values.second) << ','
           << median(values.first) << '\n';
  }
  run.manifest_extra.push_back("dataset = " + ctx.corpus.source);
  run.manifest_extra.push_back("master_seed = " + std::to_string(run.sweep.master_seed));
  write_manifest(run);
  std::cout << "wrote " << rows.size() << " rows to " << (run.dir / "sweep.csv").string() << '\n';
  return 0;
}

// --- vanderlugt -----------------------------------------------------------

DftPlan plan_for(const ComplexField& f) {
  if (f.layout()) return DftPlan::two_dimensional(f.layout()->height, f.layout()->width);
  return DftPlan::one_dimensional(f.size());
}

int cmd_vanderlugt(Run& run, const std::string& measurements_path, const std::string& fit_path, bool demo) {
  const double tau_rel = run.config.get_double("vanderlugt.tau_rel", 1e-3);
  std::optional<ComplexField> fit;
  MeasurementVector y;
  std::vector<bool> dot;
  if (demo) {
    DottedGlyphScene scene = dotted_a_scene();
    const DftPlan plan = plan_for(scene.truth);
    y.values = plan.forward(scene.truth.values()).cwiseAbs2();
    fit = scene.fit;
    dot = std::move(scene.dot);
  } else {
    if (measurements_path.empty() || fit_path.empty()) {
      throw UsageError("vanderlugt needs --measurements and --fit, or --demo");
    }
    y = load_measurements(measurements_path);
    fit = load_field(fit_path);
  }
  prepare_dir(run);
  const DftPlan plan = plan_for(*fit);
  const DefectEstimate est = detect_defect(y, *fit, plan, tau_rel);
  if (est.eta_hat.layout()) emit_pgm(est.eta_hat, FieldPart::magnitude, run.dir / "eta_hat.pgm");
  save_field(est.eta_hat, run.dir / "eta_hat.txt");

  const std::size_t peak = est.argmax();
  auto report = open_output(run, "report.txt");
  report << "eta_hat_norm = " << est.eta_hat.norm() << "\nargmax = " << peak;
  if (est.eta_hat.layout()) {
    report << "\nargmax_row = " << peak / est.eta_hat.layout()->width
           << "\nargmax_col = " << peak % est.eta_hat.layout()->width;
  }
  report << "\nresidual_energy = " << est.residual_energy << "\nregularizer_tau = " << est.regularizer_tau
         << "\ntau_rel = " << tau_rel << '\n';
  if (demo) {
    double on = 0.0;
    double off = 0.0;
    std::size_t on_count = 0;
    for (std::size_t j = 0; j < dot.size(); ++j) {
      const double e = std::norm(est.eta_hat[j]);
      if (dot[j]) {
        on += e;
        ++on_count;
      } else {
        off += e;
      }
    }
    const double per_on = on / static_cast<double>(on_count);
    const double per_off = off / static_cast<double>(dot.size() - on_count);
    report << "demo = dotted_a\nargmax_on_dot = " << (dot[peak] ? "true" : "false")
           << "\nmean_energy_on_dot = " << per_on << "\nmean_energy_off_dot = " << per_off << '\n';
    emit_pgm(*fit, FieldPart::magnitude, run.dir / "fit.pgm");
  }
  write_manifest(run);
  std::cout << "eta_hat argmax " << peak << ", norm " << est.eta_hat.norm() << '\n';
  return 0;
}

// --- check-bounds ---------------------------------------------------------

int cmd_check_bounds(Run& run) {
  const std::size_t trials = run.config.get_u64("bounds.trials", 100);
  const std::uint64_t seed = run.config.get_u64("bounds.seed", 1);
  const double lambda = run.config.get_double("bounds.lambda", 0.5);
  const LemmaDims dims = lemma_dims_from(run.config);
  prepare_dir(run);

  const std::vector<BoundReport> reports = {check_lemma1(trials, seed, dims), check_lemma2(trials, seed, dims),
                                            check_lemma3(trials, seed, dims, lambda)};
  auto report = open_output(run, "report.txt");
  report << "trials = " << trials << "\nseed = " << seed << "\nn = " << dims.n << "\nk = " << dims.k
         << "\nm = " << dims.m << "\nlambda = " << lambda << "\nrel_tol = " << kBoundRelTol << "\n\n";
  std::size_t violations = 0;
  std::ofstream dumps;
  for (const auto& r : reports) {
    {
      auto csv = open_output(run, r.lemma + ".csv");
      write_bound_csv(r, csv);
    }
    report << r.lemma << ": violations = " << r.violations << ", skipped = " << r.skipped
           << ", max_slack_ratio = " << r.max_slack_ratio << '\n';
    std::cout << r.lemma << ": " << r.violations << " violations in " << r.trials << " trials\n";
    for (const auto& t : r.records) {
      if (!t.violated) continue;
      if (!dumps.is_open()) dumps.open(run.dir / "violations.txt");
      dumps << "# " << r.lemma << " seed " << t.seed << '\n' << t.dump << '\n';
    }
    violations += r.violations;
  }

  const std::size_t pairs = run.config.get_u64("bounds.ratio_pairs", 0);
  if (pairs > 0) {
    const std::size_t side = run.config.get_u64("bounds.ratio_side", 4);
    const std::size_t probes = run.config.get_u64("bounds.ratio_probes", 8);
    const MaskedFourierOperator op(sample_probes(probes, side * side, 0.5, seed),
                                   DftPlan::two_dimensional(side, side));
    const RatioEstimate est = ratio_sample_nonlinear(op, pairs, seed);
    report << "\nintensity_ratio_pairs = " << est.used << "\nintensity_ratio_skipped = " << est.skipped
           << "\nintensity_ratio_lower = " << est.lower << "\nintensity_ratio_upper = " << est.upper << '\n';
  }
  report << "\ntotal_violations = " << violations << '\n';
  write_manifest(run);
  if (violations > 0) {
    std::cerr << "bound violations found; instances in " << (run.dir / "violations.txt").string() << '\n';
    return 1;
  }
  return 0;
}

// --- emit-samples ---------------------------------------------------------

int cmd_emit_samples(Run& run) {
  const std::size_t count = run.config.get_u64("samples.count", 4);
  prepare_dir(run);
  const ExperimentContext ctx = prepare_context(run.sweep);
  auto report = open_output(run, "report.txt");
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t seed = derive_seed(run.sweep.master_seed, "emit-samples", {i});
    const ComplexField g = generate(*ctx.generator, sample_latent(*ctx.generator, seed));
    const std::string stem = "generator_" + std::to_string(i);
    emit_pgm(g, FieldPart::real, run.dir / (stem + "_real.pgm"));
    emit_pgm(g, FieldPart::imag, run.dir / (stem + "_imag.pgm"));
    const ComplexField d = pick_truth(ctx, Scenario::out_of_distribution, run.sweep.master_seed, i + 1);
    emit_pgm(d, FieldPart::real, run.dir / ("dataset_" + std::to_string(i) + "_real.pgm"));
    emit_pgm(d, FieldPart::imag, run.dir / ("dataset_" + std::to_string(i) + "_imag.pgm"));
  }
  const std::size_t probes = std::min(count, ctx.op->probes().count());
  for (std::size_t i = 0; i < probes; ++i) {
    emit_probe_pgm(ctx.op->probes().probe(i), run.sweep.op.height, run.sweep.op.width,
                   run.dir / ("probe_" + std::to_string(i) + ".pgm"));
  }
  report << "dataset = " << ctx.corpus.source << "\ngenerator_samples = " << count << "\ndataset_samples = " << count
         << "\nprobes = " << probes << "\nprobe_fraction_ones = " << ctx.op->probes().fraction_ones() << '\n';
  write_manifest(run);
  std::cout << "wrote samples to " << run.dir.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 0; i < argc; ++i) command_line += (i ? " " : "") + std::string(argv[i]);

  CLI::App app{"Phase retrieval with generative priors", "genprior"};
  app.set_version_flag("--version", std::string(GENPRIOR_VERSION));
  app.require_subcommand(1);

  Common common;
  std::string method, scenario, measurements, truth, fit;
  double sigma = 0.0, defect = 0.0;
  std::uint64_t seed = 0;
  bool plain = false, demo = false;

  auto* train = app.add_subcommand("train-generator", "Fit the PCA generator and write generator.txt");
  auto* simulate = app.add_subcommand("simulate", "Draw a ground truth and simulate measurements");
  auto* reconstruct = app.add_subcommand("reconstruct", "Solve one reconstruction problem");
  auto* sweep = app.add_subcommand("sweep", "Run the error-versus-noise sweep");
  auto* vanderlugt = app.add_subcommand("vanderlugt", "Estimate an object defect from a diffraction pattern");
  auto* bounds = app.add_subcommand("check-bounds", "Check the reconstruction error bounds on random instances");
  auto* samples = app.add_subcommand("emit-samples", "Write generator samples, dataset images and probes as PGM");
  for (auto* sub : {train, simulate, reconstruct, sweep, vanderlugt, bounds, samples}) add_common(sub, common);

  for (auto* sub : {simulate, reconstruct}) {
    sub->add_option("--scenario", scenario, "in_distribution or out_of_distribution");
    sub->add_option("--sigma", sigma, "Noise standard deviation")->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", seed, "Ground-truth seed");
  }
  simulate->add_flag("--plain", plain, "Plain Fourier pattern (for vanderlugt) instead of masked measurements");
  simulate->add_option("--defect", defect, "With --plain: add a spike of this fraction of max|f|");
  reconstruct->add_option("--method", method, "conventional, generative or combined");
  reconstruct->add_option("--measurements", measurements, "Measurement file instead of a simulated truth");
  reconstruct->add_option("--truth", truth, "Truth field for the RRE when --measurements is given");
  vanderlugt->add_option("--measurements", measurements, "Plain Fourier intensity file");
  vanderlugt->add_option("--fit", fit, "Fitted object file");
  vanderlugt->add_flag("--demo", demo, "Use the built-in dotted letter scene");

  if (argc < 2) {
    std::cerr << app.help();
    return 2;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    Run run = open_run(sub->get_name(), common);
    auto flag_to_config = [&](const char* flag, const std::string& key, const std::string& value) {
      const CLI::Option* opt = sub->get_option_no_throw(flag);
      if (opt != nullptr && opt->count() > 0) run.config.set(key, value);
    };
    flag_to_config("--method", "reconstruct.method", method);
    flag_to_config("--scenario", "reconstruct.scenario", scenario);
    {
      std::ostringstream s;
      s << std::setprecision(17) << sigma;
      flag_to_config("--sigma", "reconstruct.sigma", s.str());
    }
    flag_to_config("--seed", "reconstruct.seed", std::to_string(seed));

    if (sub == train) return cmd_train_generator(run);
    if (sub == simulate) return cmd_simulate(run, plain, defect);
    if (sub == reconstruct) return cmd_reconstruct(run, measurements, truth);
    if (sub == sweep) return cmd_sweep(run);
    if (sub == vanderlugt) return cmd_vanderlugt(run, measurements, fit, demo);
    if (sub == bounds) return cmd_check_bounds(run);
    if (sub == samples) return cmd_emit_samples(run);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
