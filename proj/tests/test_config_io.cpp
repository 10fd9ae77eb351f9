#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "genprior/config.hpp"
#include "genprior/io.hpp"
#include "support.hpp"

using namespace genprior;

namespace {

Config parse(const std::string& text) {
  std::istringstream in(text);
  return Config::parse(in);
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "genprior_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("config parsing and overrides") {
  Config cfg = parse("[sweep]\nseeds = 1..4\nsigma_grid = 0.1, 1\nmethods = generative\n[operator]\nprobes = 7\n");
  cfg.set("operator.bernoulli_p=0.25");
  const SweepConfig s = sweep_config_from(cfg);
  CHECK(s.seeds == std::vector<std::uint64_t>{1, 2, 3, 4});
  CHECK(s.sigma_grid == std::vector<double>{0.1, 1.0});
  CHECK(s.methods == std::vector<ProblemMode>{ProblemMode::generative});
  CHECK(s.op.ell == 7);
  CHECK(s.op.bernoulli_p == 0.25);
  CHECK(s.sigma_grid.size() == 2);
  CHECK(sweep_config_from(Config{}).sigma_grid == default_sigma_grid());

  std::ostringstream out;
  describe(s, out);
  CHECK(out.str().find("operator.probes = 7") != std::string::npos);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(sweep_config_from(parse("[sweep]\ncolour = red\n")), ConfigError);
  CHECK_THROWS_AS(sweep_config_from(parse("[operator]\nprobes = many\n")), ConfigError);
  CHECK_THROWS_AS(sweep_config_from(parse("[operator]\nprobes = -3\n")), ConfigError);
  CHECK_THROWS_AS(sweep_config_from(parse("[operator]\ntransform = 3d\n")), ConfigError);
  CHECK_THROWS_AS(sweep_config_from(parse("[dataset]\nallow_synthetic = maybe\n")), ConfigError);
  CHECK_THROWS_AS(parse("[broken\n"), ConfigError);
  CHECK_THROWS_AS(Config::load("/nonexistent.cfg"), ConfigError);
  Config c;
  CHECK_THROWS_AS(c.set("novalue"), UsageError);
  CHECK_THROWS_AS(c.set("nosection=1"), UsageError);
  CHECK_THROWS_AS(parse_seed_list("5..2"), ConfigError);

  const SweepConfig empty = sweep_config_from(parse("[sweep]\nmethods =\nscenarios =\n"));
  CHECK(empty.methods.empty());
  CHECK_THROWS_AS(empty.validate(), ConfigError);
}

TEST_CASE("explicit lambda policy") {
  const SweepConfig s = sweep_config_from(parse("[sweep]\nlambda_policy = explicit\nlambda_combined = 0.5\n"));
  CHECK(s.lambda_policy.lambda(ProblemMode::combined, 9.0) == 0.5);
  CHECK_THROWS_AS(s.validate(), ConfigError);
}

TEST_CASE("the committed config") {
  const SweepConfig s = sweep_config_from(Config::load(GENPRIOR_SOURCE_DIR "/configs/paper.cfg"));
  CHECK(s.op.height * s.op.width == 64);
  CHECK(s.k == 30);
  CHECK(s.op.ell == 100);
  CHECK(s.sigma_grid.size() == 9);
  CHECK(s.seeds.size() == 10);
  CHECK(s.sigma_grid.back() / s.sigma_grid.front() == doctest::Approx(1e4));
  const LemmaDims d = lemma_dims_from(Config::load(GENPRIOR_SOURCE_DIR "/configs/paper.cfg"));
  CHECK(d.m == 24);
}

TEST_CASE("pgm output") {
  const ComplexField flat(CVector::Constant(64, cd(0.3, 0.0)), Layout{8, 8});
  std::stringstream buf;
  const PgmScale scale = write_pgm(flat, FieldPart::real, buf);
  CHECK(scale.min == scale.max);
  const PgmImage img = read_pgm(buf);
  CHECK(img.width == 8);
  CHECK(img.height == 8);
  CHECK(img.maxval == 255);
  CHECK(std::all_of(img.pixels.begin(), img.pixels.end(), [](auto p) { return p == 128; }));

  CVector ramp(6);
  for (Eigen::Index j = 0; j < 6; ++j) ramp[j] = cd(0.0, static_cast<double>(j));
  std::stringstream buf2;
  write_pgm(ComplexField(ramp, Layout{2, 3}), FieldPart::imag, buf2);
  const PgmImage img2 = read_pgm(buf2);
  CHECK(img2.width == 3);
  CHECK(img2.pixels.front() == 0);
  CHECK(img2.pixels.back() == 255);

  std::stringstream sink;
  CHECK_THROWS_AS(write_pgm(ComplexField(ramp), FieldPart::real, sink), UsageError);
  CHECK(parse_field_part("magnitude") == FieldPart::magnitude);
  CHECK_THROWS_AS(parse_field_part("phase"), ConfigError);

  const auto path = scratch("flat.pgm");
  emit_pgm(flat, FieldPart::real, path);
  std::ifstream side(path.string() + ".txt");
  std::string text((std::istreambuf_iterator<char>(side)), {});
  CHECK(text.find("min = 0.29999999999999999") != std::string::npos);
  CHECK(text.find("max = 0.29999999999999999") != std::string::npos);
}

TEST_CASE("field and measurement files round trip") {
  const ComplexField f(testing::random_cvector(12, 70), Layout{3, 4});
  const auto fp = scratch("field.txt");
  save_field(f, fp);
  const ComplexField g = load_field(fp);
  CHECK(g.values() == f.values());
  CHECK(g.layout() == f.layout());
  save_field(ComplexField(f.values()), fp);
  CHECK_FALSE(load_field(fp).layout().has_value());

  const MeasurementVector y{RVector::LinSpaced(10, -1.0, 3.0) / 3.0, 0.125};
  const auto mp = scratch("y.txt");
  save_measurements(y, mp);
  const MeasurementVector z = load_measurements(mp);
  CHECK(z.values == y.values);
  CHECK(z.sigma == y.sigma);

  std::istringstream wrong("genprior-field 2\n1\n0 0\n");
  CHECK_THROWS_AS(read_field(wrong), DataError);
  std::istringstream truncated("genprior-measurement 1\n3 0\n1\n2\n");
  CHECK_THROWS_AS(read_measurements(truncated), DataError);
  CHECK_THROWS_AS(load_field("/nonexistent/field.txt"), DataError);
}
