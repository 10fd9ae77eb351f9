#include "genprior/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "genprior/rng.hpp"

namespace genprior {

Eigen::MatrixXd DigitCorpus::matrix() const {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(images.size()), static_cast<Eigen::Index>(kDigitPixels));
  for (std::size_t i = 0; i < images.size(); ++i) x.row(static_cast<Eigen::Index>(i)) = images[i].transpose();
  return x;
}

namespace {

int parse_int(std::string_view token, std::size_t line) {
  while (!token.empty() && (token.front() == ' ' || token.front() == '\t')) token.remove_prefix(1);
  while (!token.empty() && (token.back() == ' ' || token.back() == '\t' || token.back() == '\r')) {
    token.remove_suffix(1);
  }
  int value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
    throw ParseError("expected an integer, got '" + std::string(token) + "'", line);
  }
  return value;
}

}  // namespace

DigitCorpus parse_digits(std::istream& in, const std::string& source) {
  DigitCorpus corpus;
  corpus.source = source;
  std::string row;
  std::size_t line = 0;
  while (std::getline(in, row)) {
    ++line;
    if (row.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<int> values;
    std::string_view rest(row);
    while (true) {
      const auto comma = rest.find(',');
      values.push_back(parse_int(rest.substr(0, comma), line));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (values.size() != kDigitPixels + 1) {
      throw ParseError("expected " + std::to_string(kDigitPixels + 1) + " columns, got " +
                           std::to_string(values.size()),
                       line);
    }
    RVector image(static_cast<Eigen::Index>(kDigitPixels));
    for (std::size_t j = 0; j < kDigitPixels; ++j) {
      if (values[j] < 0 || values[j] > kDigitMaxPixel) {
        throw ParseError("pixel " + std::to_string(j) + " out of range [0, 16]", line);
      }
      image[static_cast<Eigen::Index>(j)] = values[j] / static_cast<double>(kDigitMaxPixel);
    }
    corpus.images.push_back(std::move(image));
    corpus.labels.emplace_back(values.back());
  }
  if (corpus.images.empty()) throw DataError("digits file '" + source + "' contains no rows");
  return corpus;
}

DigitCorpus load_digits(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open digits file '" + path.string() + "'");
  return parse_digits(in, "file:" + path.string());
}

void write_digits(const DigitCorpus& corpus, std::ostream& out) {
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (Eigen::Index j = 0; j < corpus.images[i].size(); ++j) {
      out << static_cast<int>(std::lround(corpus.images[i][j] * kDigitMaxPixel)) << ',';
    }
    out << corpus.labels[i].value_or(0) << '\n';
  }
}

DigitCorpus synth_digits(std::size_t count, std::uint64_t seed) {
  DigitCorpus corpus;
  corpus.source = "synthetic:" + std::to_string(seed);
  Rng rng(derive_seed(seed, "synth-digits"));
  for (std::size_t s = 0; s < count; ++s) {
    RVector image = RVector::Zero(static_cast<Eigen::Index>(kDigitPixels));
    const std::size_t blobs = 2 + rng.index(3);
    for (std::size_t b = 0; b < blobs; ++b) {
      const double cy = 1.0 + 5.0 * rng.uniform();
      const double cx = 1.0 + 5.0 * rng.uniform();
      const double width = 0.7 + 1.3 * rng.uniform();
      const double amp = 0.3 + 0.7 * rng.uniform();
      for (std::size_t r = 0; r < kDigitSide; ++r) {
        for (std::size_t c = 0; c < kDigitSide; ++c) {
          const double dy = static_cast<double>(r) - cy;
          const double dx = static_cast<double>(c) - cx;
          image[static_cast<Eigen::Index>(r * kDigitSide + c)] +=
              amp * std::exp(-(dx * dx + dy * dy) / (2.0 * width * width));
        }
      }
    }
    image /= image.maxCoeff();
    corpus.images.push_back(std::move(image));
    corpus.labels.emplace_back(std::nullopt);
  }
  return corpus;
}

ComplexField Complexifier::apply(const RVector& image) const {
  CVector f(image.size());
  for (Eigen::Index j = 0; j < image.size(); ++j) {
    f[j] = mode == Mode::amplitude_only ? cd(image[j], 0.0) : image[j] * std::polar(1.0, phi_max * image[j]);
  }
  std::optional<Layout> layout;
  if (static_cast<std::size_t>(image.size()) == kDigitPixels) layout = Layout{kDigitSide, kDigitSide};
  return ComplexField(std::move(f), layout);
}

std::vector<ComplexField> complexify(const DigitCorpus& corpus, const Complexifier& c) {
  std::vector<ComplexField> out;
  out.reserve(corpus.size());
  for (const auto& image : corpus.images) out.push_back(c.apply(image));
  return out;
}

ComplexField complexified_mean(const DigitCorpus& corpus, const Complexifier& c) {
  if (corpus.size() == 0) throw DataError("complexified_mean: empty corpus");
  CVector sum = CVector::Zero(static_cast<Eigen::Index>(kDigitPixels));
  for (const auto& image : corpus.images) sum += c.apply(image).values();
  return ComplexField(sum / static_cast<double>(corpus.size()), Layout{kDigitSide, kDigitSide});
}

}  // namespace genprior
