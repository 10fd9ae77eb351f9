#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "genprior/field.hpp"
#include "genprior/measurement.hpp"

namespace genprior {

enum class FieldPart { real, imag, magnitude };

FieldPart parse_field_part(std::string_view name);
std::string_view to_string(FieldPart part);

struct PgmScale {
  double min = 0.0;
  double max = 0.0;
};

/// Binary 8-bit PGM (P5) of one part of a laid-out field, affinely mapped
/// from [min, max] to [0, 255]. A constant image renders as mid-gray (128).
/// Throws UsageError if the field has no 2D layout.
PgmScale write_pgm(const ComplexField& field, FieldPart part, std::ostream& out);

/// Writes `path` and a sidecar `path + ".txt"` holding part, min and max.
PgmScale emit_pgm(const ComplexField& field, FieldPart part, const std::filesystem::path& path);

/// Binary PGM of a 0/1 probe laid out height x width (0 -> black, 1 -> white).
void emit_probe_pgm(const std::vector<std::uint8_t>& probe, std::size_t height, std::size_t width,
                    const std::filesystem::path& path);

struct PgmImage {
  std::size_t width = 0;
  std::size_t height = 0;
  int maxval = 0;
  std::vector<std::uint8_t> pixels;
};

PgmImage read_pgm(std::istream& in);

/// Versioned text formats: a header line, the dimensions, then one value
/// (or one "re im" pair) per line at 17 significant digits.
void write_field(const ComplexField& field, std::ostream& out);
ComplexField read_field(std::istream& in);
void write_measurements(const MeasurementVector& y, std::ostream& out);
MeasurementVector read_measurements(std::istream& in);

void save_field(const ComplexField& field, const std::filesystem::path& path);
ComplexField load_field(const std::filesystem::path& path);
void save_measurements(const MeasurementVector& y, const std::filesystem::path& path);
MeasurementVector load_measurements(const std::filesystem::path& path);

}  // namespace genprior
