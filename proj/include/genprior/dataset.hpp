#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "genprior/field.hpp"

namespace genprior {

inline constexpr std::size_t kDigitSide = 8;
inline constexpr std::size_t kDigitPixels = kDigitSide * kDigitSide;
inline constexpr int kDigitMaxPixel = 16;

/// 8x8 grayscale images with values in [0, 1].
struct DigitCorpus {
  std::vector<RVector> images;
  std::vector<std::optional<int>> labels;
  std::string source;  // "file:<path>" or "synthetic:<seed>"

  std::size_t size() const noexcept { return images.size(); }
  /// N x 64 data matrix, one image per row.
  Eigen::MatrixXd matrix() const;
};

/// Reads the "8x8 optical digits" CSV: 64 integer pixels in [0, 16]
/// followed by an integer label per row. Blank lines are ignored.
DigitCorpus load_digits(const std::filesystem::path& path);
DigitCorpus parse_digits(std::istream& in, const std::string& source);

/// Writes the same CSV format. Pixels are re-quantized to [0, 16], so the
/// round trip is exact for corpora that came from `load_digits`.
void write_digits(const DigitCorpus& corpus, std::ostream& out);

/// Seeded corpus of smooth blobs: each image is a sum of 2-4 random
/// Gaussians on the 8x8 grid, scaled so its peak is 1.
DigitCorpus synth_digits(std::size_t count, std::uint64_t seed);

struct Complexifier {
  enum class Mode { amplitude_only, phase_object };
  Mode mode = Mode::phase_object;
  double phi_max = 1.5707963267948966;  // pi / 2

  static Complexifier amplitude_only() { return {Mode::amplitude_only, 0.0}; }
  static Complexifier phase_object(double phi_max) { return {Mode::phase_object, phi_max}; }

  ComplexField apply(const RVector& image) const;
};

/// amplitude_only: f = x. phase_object: f_j = x_j exp(i phi_max x_j).
std::vector<ComplexField> complexify(const DigitCorpus& corpus, const Complexifier& c);

/// Mean of the complexified corpus, laid out 8x8.
ComplexField complexified_mean(const DigitCorpus& corpus, const Complexifier& c);

}  // namespace genprior
