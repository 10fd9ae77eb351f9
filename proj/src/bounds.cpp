#include "genprior/bounds.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "genprior/rng.hpp"

namespace genprior {

LinearSurrogate::LinearSurrogate(Eigen::MatrixXcd matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() < matrix_.cols() || matrix_.cols() < 1) {
    throw DimensionError("LinearSurrogate: need m >= n >= 1");
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(matrix_);
  singular_max_ = svd.singularValues()(0);
  singular_min_ = svd.singularValues()(svd.singularValues().size() - 1);
}

double bilipschitz_constant(const LinearSurrogate& s) {
  if (s.singular_min() < 1e-12) {
    throw DomainError("bilipschitz_constant: map is not injective (sigma_min = " +
                      std::to_string(s.singular_min()) + ")");
  }
  return std::max(s.singular_max(), 1.0 / s.singular_min());
}

double bilipschitz_constant(const Eigen::MatrixXcd& m) { return bilipschitz_constant(LinearSurrogate(m)); }

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;

CVector complex_gaussian(Rng& rng, Eigen::Index n, double scale) {
  CVector v(n);
  const double s = scale * std::sqrt(0.5);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = rng.normal();
    v[i] = s * cd(re, rng.normal());
  }
  return v;
}

MatrixXcd complex_gaussian(Rng& rng, Eigen::Index rows, Eigen::Index cols, double scale) {
  MatrixXcd a(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) a.col(c) = complex_gaussian(rng, rows, scale);
  return a;
}

MatrixXd orthonormal_columns(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  MatrixXd g(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) g(r, c) = rng.normal();
  }
  Eigen::HouseholderQR<MatrixXd> qr(g);
  return qr.householderQ() * MatrixXd::Identity(rows, cols);
}

// A random instance shared by all three lemma checks.
struct Instance {
  MatrixXcd a;
  MatrixXd g;
  CVector b;
  CVector f0;
  CVector eps;
  CVector y;
};

Instance make_instance(std::uint64_t trial_seed, const LemmaDims& dims, bool with_generator) {
  Rng rng(trial_seed);
  const auto n = static_cast<Eigen::Index>(dims.n);
  const auto m = static_cast<Eigen::Index>(dims.m);
  const auto k = static_cast<Eigen::Index>(dims.k);
  Instance inst;
  inst.a = complex_gaussian(rng, m, n, 1.0 / std::sqrt(static_cast<double>(m)));
  if (with_generator) {
    inst.g = orthonormal_columns(rng, n, k);
    inst.b = complex_gaussian(rng, n, 1.0);
    const CVector z = complex_gaussian(rng, k, 1.0);
    inst.f0 = inst.g.cast<cd>() * z + inst.b + complex_gaussian(rng, n, dims.off_range);
  } else {
    inst.f0 = complex_gaussian(rng, n, 1.0);
  }
  inst.eps = complex_gaussian(rng, m, dims.noise);
  inst.y = inst.a * inst.f0 + inst.eps;
  return inst;
}

std::string dump_instance(const Instance& inst, const BoundTrial& t) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "seed = " << t.seed << "\nlhs = " << t.lhs << "\nrhs = " << t.rhs << "\nalpha = " << t.alpha
     << "\nbeta = " << t.beta << "\ngamma = " << t.gamma << "\nA =\n"
     << inst.a << "\nf0 =\n"
     << inst.f0.transpose() << "\neps =\n"
     << inst.eps.transpose() << '\n';
  if (inst.g.size() > 0) os << "G =\n" << inst.g << "\nb =\n" << inst.b.transpose() << '\n';
  return os.str();
}

void finish_trial(BoundReport& report, BoundTrial t, const Instance& inst) {
  const double tol = kBoundRelTol * std::max(t.rhs, inst.f0.norm());
  t.violated = t.lhs > t.rhs + tol;
  if (t.violated) {
    ++report.violations;
    t.dump = dump_instance(inst, t);
  }
  if (t.rhs > 0.0) report.max_slack_ratio = std::max(report.max_slack_ratio, t.lhs / t.rhs);
  report.records.push_back(std::move(t));
}

CVector least_squares(const MatrixXcd& a, const CVector& rhs) {
  return a.colPivHouseholderQr().solve(rhs);
}

void require_dims(const LemmaDims& dims, bool with_generator) {
  if (dims.n < 1 || dims.m < dims.n) throw ConfigError("lemma check: need m >= n >= 1");
  if (with_generator && (dims.k < 1 || dims.k >= dims.n)) throw ConfigError("lemma check: need 1 <= k < n");
  if (!(dims.noise >= 0.0) || !(dims.off_range >= 0.0)) {
    throw ConfigError("lemma check: noise and off_range must be nonnegative");
  }
}

}  // namespace

BoundReport check_lemma1(std::size_t trials, std::uint64_t seed, const LemmaDims& dims) {
  require_dims(dims, false);
  BoundReport report;
  report.lemma = "lemma1";
  report.trials = trials;
  for (std::size_t i = 0; i < trials; ++i) {
    BoundTrial t;
    t.seed = derive_seed(seed, "lemma1", {i});
    const Instance inst = make_instance(t.seed, dims, false);
    const CVector f_tilde = least_squares(inst.a, inst.y);
    t.alpha = bilipschitz_constant(inst.a);
    t.noise = inst.eps.norm();
    t.lhs = (f_tilde - inst.f0).norm();
    t.rhs = 2.0 * t.alpha * t.noise;
    finish_trial(report, std::move(t), inst);
  }
  return report;
}

BoundReport check_lemma2(std::size_t trials, std::uint64_t seed, const LemmaDims& dims) {
  require_dims(dims, true);
  BoundReport report;
  report.lemma = "lemma2";
  report.trials = trials;
  for (std::size_t i = 0; i < trials; ++i) {
    BoundTrial t;
    t.seed = derive_seed(seed, "lemma2", {i});
    const Instance inst = make_instance(t.seed, dims, true);
    const MatrixXcd gc = inst.g.cast<cd>();
    const MatrixXcd ag = inst.a * gc;
    const CVector z_tilde = least_squares(ag, inst.y - inst.a * inst.b);
    const CVector z0 = inst.g.transpose().cast<cd>() * (inst.f0 - inst.b);
    t.alpha = bilipschitz_constant(inst.a);
    t.beta = bilipschitz_constant(gc);
    t.gamma = bilipschitz_constant(ag);
    t.bias = (gc * z0 + inst.b - inst.f0).norm();
    t.noise = inst.eps.norm();
    t.lhs = (gc * z_tilde + inst.b - inst.f0).norm();
    t.rhs = (1.0 + 2.0 * t.alpha * t.beta * t.gamma) * t.bias + 2.0 * t.beta * t.gamma * t.noise;
    finish_trial(report, std::move(t), inst);
  }
  return report;
}

BoundReport check_lemma3(std::size_t trials, std::uint64_t seed, const LemmaDims& dims, double lambda) {
  require_dims(dims, true);
  if (!(lambda >= 0.0)) throw ConfigError("check_lemma3: lambda must be nonnegative");
  BoundReport report;
  report.lemma = "lemma3";
  report.trials = trials;
  const auto n = static_cast<Eigen::Index>(dims.n);
  const auto k = static_cast<Eigen::Index>(dims.k);
  const double lsq = lambda * lambda;
  for (std::size_t i = 0; i < trials; ++i) {
    BoundTrial t;
    t.seed = derive_seed(seed, "lemma3", {i});
    const Instance inst = make_instance(t.seed, dims, true);
    const MatrixXcd gc = inst.g.cast<cd>();
    const MatrixXcd ah = inst.a.adjoint();

    CVector f_tilde;
    if (lambda == 0.0) {
      // z drops out of the objective; f solves the plain least-squares problem.
      f_tilde = least_squares(inst.a, inst.y);
    } else {
      // Normal equations in the stacked unknown (z, f).
      MatrixXcd normal = MatrixXcd::Zero(k + n, k + n);
      normal.topLeftCorner(k, k) = lsq * gc.adjoint() * gc;
      normal.topRightCorner(k, n) = -lsq * gc.adjoint();
      normal.bottomLeftCorner(n, k) = -lsq * gc;
      normal.bottomRightCorner(n, n) = ah * inst.a + lsq * MatrixXcd::Identity(n, n);
      CVector rhs(k + n);
      rhs.head(k) = -lsq * gc.adjoint() * inst.b;
      rhs.tail(n) = ah * inst.y + lsq * inst.b;
      Eigen::FullPivLU<MatrixXcd> lu(normal);
      if (!lu.isInvertible()) {
        t.skipped = true;
        ++report.skipped;
        report.records.push_back(std::move(t));
        continue;
      }
      f_tilde = lu.solve(rhs).tail(n);
    }
    const CVector z0 = inst.g.transpose().cast<cd>() * (inst.f0 - inst.b);
    t.alpha = bilipschitz_constant(inst.a);
    t.beta = bilipschitz_constant(gc);
    t.bias = (gc * z0 + inst.b - inst.f0).norm();
    t.noise = inst.eps.norm();
    t.lhs = (f_tilde - inst.f0).norm();
    t.rhs = lambda * t.alpha * t.bias + 2.0 * t.alpha * t.noise;
    finish_trial(report, std::move(t), inst);
  }
  return report;
}

std::optional<double> intensity_ratio(const MaskedFourierOperator& op, const CVector& f, const CVector& f_prime) {
  require_same_size(static_cast<std::size_t>(f.size()), static_cast<std::size_t>(f_prime.size()), "intensity_ratio");
  const double f_norm = f.norm();
  if (f_norm == 0.0) {
    if (f_prime.norm() < 1e-12) return std::nullopt;
    return intensity(op, f_prime).norm() / f_prime.norm();
  }
  const double dist = rre(f_prime, f) * f_norm;
  if (dist < 1e-12) return std::nullopt;
  return (intensity(op, f) - intensity(op, f_prime)).norm() / dist;
}

RatioEstimate ratio_sample_nonlinear(const MaskedFourierOperator& op, std::size_t pairs, std::uint64_t seed) {
  if (pairs < 1) throw ConfigError("ratio_sample_nonlinear: pairs must be at least 1");
  Rng rng(derive_seed(seed, "ratio-nonlinear"));
  const auto n = static_cast<Eigen::Index>(op.n());
  RatioEstimate est;
  est.lower = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pairs; ++i) {
    const CVector f = complex_gaussian(rng, n, 1.0);
    const CVector g = complex_gaussian(rng, n, 1.0);
    const auto ratio = intensity_ratio(op, f, g);
    if (!ratio) {
      ++est.skipped;
      continue;
    }
    est.lower = std::min(est.lower, *ratio);
    est.upper = std::max(est.upper, *ratio);
    ++est.used;
  }
  if (est.used == 0) est.lower = 0.0;
  return est;
}

void write_bound_csv(const BoundReport& report, std::ostream& out) {
  out << "lemma,trial,seed,lhs,rhs,slack,bias,noise,alpha,beta,gamma,violated,skipped\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < report.records.size(); ++i) {
    const auto& t = report.records[i];
    out << report.lemma << ',' << i << ',' << t.seed << ',' << t.lhs << ',' << t.rhs << ','
        << (t.rhs > 0.0 ? t.lhs / t.rhs : 0.0) << ',' << t.bias << ',' << t.noise << ',' << t.alpha << ','
        << t.beta << ',' << t.gamma << ',' << t.violated << ',' << t.skipped << '\n';
  }
}

}  // namespace genprior
