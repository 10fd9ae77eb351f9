#include "genprior/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace genprior {

namespace {

constexpr const char* kFieldMagic = "genprior-field";
constexpr const char* kMeasurementMagic = "genprior-measurement";
constexpr int kFormatVersion = 1;

double part_value(cd v, FieldPart part) {
  switch (part) {
    case FieldPart::real:
      return v.real();
    case FieldPart::imag:
      return v.imag();
    case FieldPart::magnitude:
      return std::abs(v);
  }
  return 0.0;
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return in;
}

void expect_header(std::istream& in, const char* magic) {
  std::string tag;
  int version = 0;
  if (!(in >> tag >> version) || tag != magic) throw DataError(std::string("expected a ") + magic + " file");
  if (version != kFormatVersion) throw DataError("unsupported " + tag + " version " + std::to_string(version));
}

}  // namespace

FieldPart parse_field_part(std::string_view name) {
  if (name == "real") return FieldPart::real;
  if (name == "imag") return FieldPart::imag;
  if (name == "magnitude") return FieldPart::magnitude;
  throw ConfigError("unknown field part '" + std::string(name) + "'");
}

std::string_view to_string(FieldPart part) {
  switch (part) {
    case FieldPart::real:
      return "real";
    case FieldPart::imag:
      return "imag";
    case FieldPart::magnitude:
      return "magnitude";
  }
  return "unknown";
}

PgmScale write_pgm(const ComplexField& field, FieldPart part, std::ostream& out) {
  if (!field.layout()) throw UsageError("write_pgm: field has no 2D layout");
  const auto [height, width] = *field.layout();
  PgmScale scale{part_value(field[0], part), part_value(field[0], part)};
  for (std::size_t i = 0; i < field.size(); ++i) {
    scale.min = std::min(scale.min, part_value(field[i], part));
    scale.max = std::max(scale.max, part_value(field[i], part));
  }
  out << "P5\n" << width << ' ' << height << "\n255\n";
  const double range = scale.max - scale.min;
  for (std::size_t i = 0; i < field.size(); ++i) {
    std::uint8_t byte = 128;
    if (range > 0.0) byte = static_cast<std::uint8_t>(std::lround(255.0 * (part_value(field[i], part) - scale.min) / range));
    out.put(static_cast<char>(byte));
  }
  return scale;
}

PgmScale emit_pgm(const ComplexField& field, FieldPart part, const std::filesystem::path& path) {
  auto out = open_out(path, std::ios::out | std::ios::binary);
  const PgmScale scale = write_pgm(field, part, out);
  auto side = open_out(path.string() + ".txt");
  side << std::setprecision(17) << "part = " << to_string(part) << "\nmin = " << scale.min
       << "\nmax = " << scale.max << '\n';
  return scale;
}

void emit_probe_pgm(const std::vector<std::uint8_t>& probe, std::size_t height, std::size_t width,
                    const std::filesystem::path& path) {
  require_same_size(probe.size(), height * width, "emit_probe_pgm");
  auto out = open_out(path, std::ios::out | std::ios::binary);
  out << "P5\n" << width << ' ' << height << "\n255\n";
  for (auto v : probe) out.put(static_cast<char>(v ? 255 : 0));
}

PgmImage read_pgm(std::istream& in) {
  PgmImage img;
  std::string magic;
  if (!(in >> magic) || magic != "P5") throw DataError("read_pgm: not a binary PGM");
  if (!(in >> img.width >> img.height >> img.maxval)) throw DataError("read_pgm: malformed header");
  in.get();  // single whitespace before the raster
  img.pixels.resize(img.width * img.height);
  in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
  if (static_cast<std::size_t>(in.gcount()) != img.pixels.size()) throw DataError("read_pgm: truncated raster");
  return img;
}

void write_field(const ComplexField& field, std::ostream& out) {
  out << kFieldMagic << ' ' << kFormatVersion << '\n' << field.size();
  if (field.layout()) out << ' ' << field.layout()->height << ' ' << field.layout()->width;
  out << '\n' << std::setprecision(17);
  for (std::size_t i = 0; i < field.size(); ++i) out << field[i].real() << ' ' << field[i].imag() << '\n';
}

ComplexField read_field(std::istream& in) {
  expect_header(in, kFieldMagic);
  std::size_t n = 0;
  if (!(in >> n)) throw DataError("field: missing length");
  std::string rest;
  std::getline(in, rest);
  std::optional<Layout> layout;
  std::istringstream dims(rest);
  Layout l;
  if (dims >> l.height >> l.width) layout = l;
  CVector v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    double re = 0.0;
    double im = 0.0;
    if (!(in >> re >> im)) throw DataError("field: truncated at entry " + std::to_string(i));
    v[i] = cd(re, im);
  }
  return ComplexField(std::move(v), layout);
}

void write_measurements(const MeasurementVector& y, std::ostream& out) {
  out << kMeasurementMagic << ' ' << kFormatVersion << '\n' << std::setprecision(17);
  out << y.size() << ' ' << y.sigma << '\n';
  for (Eigen::Index i = 0; i < y.values.size(); ++i) out << y.values[i] << '\n';
}

MeasurementVector read_measurements(std::istream& in) {
  expect_header(in, kMeasurementMagic);
  std::size_t m = 0;
  MeasurementVector y;
  if (!(in >> m >> y.sigma)) throw DataError("measurements: malformed header");
  y.values.resize(static_cast<Eigen::Index>(m));
  for (Eigen::Index i = 0; i < y.values.size(); ++i) {
    if (!(in >> y.values[i])) throw DataError("measurements: truncated at entry " + std::to_string(i));
    if (!std::isfinite(y.values[i])) throw DataError("measurements: non-finite entry " + std::to_string(i));
  }
  return y;
}

void save_field(const ComplexField& field, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_field(field, out);
}

ComplexField load_field(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_field(in);
}

void save_measurements(const MeasurementVector& y, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_measurements(y, out);
}

MeasurementVector load_measurements(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_measurements(in);
}

}  // namespace genprior
