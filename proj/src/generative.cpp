#include "genprior/generative.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "genprior/rng.hpp"

namespace genprior {

namespace {

constexpr const char* kGeneratorMagic = "genprior-generator";
constexpr int kGeneratorVersion = 1;

}  // namespace

AffineGenerator::AffineGenerator(Eigen::MatrixXd components, CVector offset, RVector singular_values,
                                 std::optional<Layout> layout)
    : components_(std::move(components)),
      offset_(std::move(offset)),
      singular_values_(std::move(singular_values)),
      layout_(layout) {
  if (components_.cols() < 1) throw ConfigError("AffineGenerator: k must be at least 1");
  if (components_.cols() >= components_.rows()) {
    throw ConfigError("AffineGenerator: latent dimension k must be smaller than n");
  }
  require_same_size(static_cast<std::size_t>(offset_.size()), n(), "AffineGenerator offset");
  require_same_size(static_cast<std::size_t>(singular_values_.size()), k(),
                    "AffineGenerator singular values");
  if (layout_ && layout_->height * layout_->width != n()) {
    throw DimensionError("AffineGenerator: layout does not match n");
  }
  const double gram_err =
      (components_.transpose() * components_ - Eigen::MatrixXd::Identity(components_.cols(), components_.cols()))
          .cwiseAbs()
          .maxCoeff();
  if (gram_err > 1e-10) {
    throw ConfigError("AffineGenerator: components are not orthonormal (max |G^T G - I| = " +
                      std::to_string(gram_err) + ")");
  }
}

AffineGenerator fit_pca(const Eigen::MatrixXd& images, const ComplexField& mean_offset, std::size_t k) {
  const auto samples = static_cast<std::size_t>(images.rows());
  const auto n = static_cast<std::size_t>(images.cols());
  require_same_size(mean_offset.size(), n, "fit_pca mean offset");
  if (k < 1 || k >= n) {
    throw ConfigError("fit_pca: need 1 <= k < n, got k=" + std::to_string(k) + ", n=" + std::to_string(n));
  }
  if (k >= samples) {
    throw ConfigError("fit_pca: need more samples than k, got " + std::to_string(samples) + " samples");
  }

  const Eigen::RowVectorXd mean = images.colwise().mean();
  const Eigen::MatrixXd centered = images.rowwise() - mean;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const RVector& sv = svd.singularValues();

  const double cutoff = (sv.size() > 0 ? sv[0] : 0.0) * 1e-12 * static_cast<double>(std::max(samples, n));
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > cutoff && sv[i] > 0.0) ++rank;
  }
  if (rank < k) {
    throw ConfigError("fit_pca: centered data has numerical rank " + std::to_string(rank) +
                      ", below k=" + std::to_string(k));
  }

  const auto kk = static_cast<Eigen::Index>(k);
  Eigen::MatrixXd g = svd.matrixV().leftCols(kk);
  for (Eigen::Index c = 0; c < kk; ++c) {
    Eigen::Index idx = 0;
    g.col(c).cwiseAbs().maxCoeff(&idx);
    if (g(idx, c) < 0.0) g.col(c) *= -1.0;
  }
  RVector scale = sv.head(kk) / std::sqrt(static_cast<double>(samples - 1));
  return AffineGenerator(std::move(g), mean_offset.values(), std::move(scale), mean_offset.layout());
}

ComplexField generate(const AffineGenerator& gen, const LatentVector& z) {
  require_same_size(z.size(), gen.k(), "generate");
  return ComplexField(gen.generate(z.values()), gen.layout());
}

LatentVector encode(const AffineGenerator& gen, const ComplexField& f) {
  require_same_size(f.size(), gen.n(), "encode");
  return LatentVector(gen.linear_adjoint(f.values() - gen.offset()));
}

LatentVector sample_latent(const AffineGenerator& gen, std::uint64_t seed) {
  Rng rng(derive_seed(seed, "latent"));
  CVector z(static_cast<Eigen::Index>(gen.k()));
  const double half = std::sqrt(0.5);
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    const double re = rng.normal();
    const double im = rng.normal();
    z[j] = gen.singular_values()[j] * half * cd(re, im);
  }
  return LatentVector(std::move(z));
}

void write_generator(const AffineGenerator& gen, std::ostream& out) {
  out << kGeneratorMagic << ' ' << kGeneratorVersion << '\n';
  out << gen.n() << ' ' << gen.k() << '\n';
  if (gen.layout()) {
    out << "layout " << gen.layout()->height << ' ' << gen.layout()->width << '\n';
  } else {
    out << "layout none\n";
  }
  out << std::setprecision(17);
  const auto& g = gen.components();
  for (Eigen::Index r = 0; r < g.rows(); ++r) {
    for (Eigen::Index c = 0; c < g.cols(); ++c) out << (c ? " " : "") << g(r, c);
    out << '\n';
  }
  for (Eigen::Index j = 0; j < gen.offset().size(); ++j) {
    out << gen.offset()[j].real() << ' ' << gen.offset()[j].imag() << '\n';
  }
  for (Eigen::Index j = 0; j < gen.singular_values().size(); ++j) {
    out << (j ? " " : "") << gen.singular_values()[j];
  }
  out << '\n';
}

AffineGenerator read_generator(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != kGeneratorMagic) {
    throw DataError("read_generator: not a generator container");
  }
  if (version != kGeneratorVersion) {
    throw DataError("read_generator: unsupported container version " + std::to_string(version));
  }
  std::size_t n = 0;
  std::size_t k = 0;
  std::string tag;
  if (!(in >> n >> k >> tag) || tag != "layout") throw DataError("read_generator: malformed header");
  std::optional<Layout> layout;
  std::string first;
  in >> first;
  if (first != "none") {
    Layout l;
    l.height = std::stoul(first);
    if (!(in >> l.width)) throw DataError("read_generator: malformed layout");
    layout = l;
  }
  Eigen::MatrixXd g(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
  for (Eigen::Index r = 0; r < g.rows(); ++r) {
    for (Eigen::Index c = 0; c < g.cols(); ++c) {
      if (!(in >> g(r, c))) throw DataError("read_generator: truncated components");
    }
  }
  CVector b(static_cast<Eigen::Index>(n));
  for (Eigen::Index j = 0; j < b.size(); ++j) {
    double re = 0.0;
    double im = 0.0;
    if (!(in >> re >> im)) throw DataError("read_generator: truncated offset");
    b[j] = cd(re, im);
  }
  RVector s(static_cast<Eigen::Index>(k));
  for (Eigen::Index j = 0; j < s.size(); ++j) {
    if (!(in >> s[j])) throw DataError("read_generator: truncated singular values");
  }
  return AffineGenerator(std::move(g), std::move(b), std::move(s), layout);
}

}  // namespace genprior
