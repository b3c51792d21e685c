#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "curveflow/io.hpp"

using namespace curveflow;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "curveflow_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

int line_count(const fs::path& path) {
  std::ifstream in(path);
  int lines = 0;
  std::string line;
  while (std::getline(in, line)) ++lines;
  return lines;
}

}  // namespace

TEST_CASE("format_full round-trips doubles exactly") {
  for (const double value : {1.0 / 3.0, -2.718281828459045e-17, 0.0, 1234.5678901234567,
                             0.04 / 256.0}) {
    CHECK(std::stod(format_full(value)) == value);
  }
}

TEST_CASE("config files parse presets, overrides, comments and quotes") {
  const fs::path dir = fresh_dir("config");
  const fs::path file = dir / "run.cfg";
  write_file(file,
             "# comment line\n"
             "experiment = example2   # preset fills the defaults\n"
             "J = 64\n"
             "output_dir = \"quoted/path\"\n"
             "snapshot_times = 0, 0.5, 1.0\n"
             "emit_svg = true\n");
  const RunConfig config = parse_run_config(file);
  CHECK(config.experiment == "example2");
  CHECK(config.seed == "tube");          // from the preset
  CHECK(config.J == 64);                 // overridden
  CHECK(config.dt == doctest::Approx(1e-3));
  CHECK(config.duration == doctest::Approx(50.0));
  CHECK(config.output_dir == fs::path("quoted/path"));
  REQUIRE(config.snapshot_times.size() == 3);
  CHECK(config.snapshot_times[1] == doctest::Approx(0.5));
  CHECK(config.emit_svg);

  write_file(file, "bogus_key = 1\n");
  CHECK_THROWS_AS(parse_run_config(file), ConfigError);
  write_file(file, "J = not_a_number\n");
  CHECK_THROWS_AS(parse_run_config(file), ConfigError);
  write_file(file, "no equals sign\n");
  CHECK_THROWS_AS(parse_run_config(file), ConfigError);
  CHECK_THROWS_AS(parse_run_config(dir / "missing.cfg"), ConfigError);
}

TEST_CASE("--set overrides apply on top of the parsed config") {
  RunConfig config;
  apply_override(config, "experiment=example1");
  CHECK(config.seed == "expanding_circle");
  apply_override(config, "dt=0.01");
  CHECK(config.dt == doctest::Approx(0.01));
  apply_override(config, "scheme=nonlinear");
  CHECK(config.variant == Variant::nonlinear);
  CHECK_THROWS_AS(apply_override(config, "missing equals"), ConfigError);
  CHECK_THROWS_AS(apply_override(config, "scheme=quintic"), ConfigError);
}

TEST_CASE("config validation enforces the documented invariants") {
  RunConfig config;
  config.seed = "circle";
  config.J = 16;
  config.dt = 1e-2;
  config.duration = 0.1;
  CHECK_NOTHROW(config.validate());

  RunConfig bad = config;
  bad.lambda = -0.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = config;
  bad.J = 2;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = config;
  bad.dt = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = config;
  bad.duration = 1e-3;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = config;
  bad.seed = "vertices";
  CHECK_THROWS_AS(bad.validate(), ConfigError);  // missing vertices_file
}

TEST_CASE("vertex CSV files round-trip") {
  const fs::path dir = fresh_dir("vertices");
  const fs::path file = dir / "polygon.csv";
  write_file(file, "# polygon\n0,0\n2, 0.5\n1.5,2\n-0.5, 1\n");
  const ClosedCurve curve = read_vertex_csv(file);
  REQUIRE(curve.size() == 4);
  CHECK(curve[1].x() == doctest::Approx(2.0));
  CHECK(curve[1].y() == doctest::Approx(0.5));

  write_file(file, "0,0\n1,1\n");
  CHECK_THROWS_AS(read_vertex_csv(file), ConfigError);
}

TEST_CASE("cmd_run writes the full artifact set for a small run") {
  const fs::path dir = fresh_dir("run_small");
  RunConfig config;
  config.seed = "circle";
  config.J = 8;
  config.dt = 0.01;
  config.duration = 0.05;
  config.lambda = 0.0;
  config.snapshot_times = {0.0, 0.05};
  config.output_dir = dir / "out";
  config.emit_svg = true;

  CHECK(cmd_run(config) == 0);
  CHECK(fs::exists(dir / "out" / "timeseries.csv"));
  // header + T/dt + 1 rows
  CHECK(line_count(dir / "out" / "timeseries.csv") == 1 + 6);
  CHECK(slurp(dir / "out" / "timeseries.csv")
            .starts_with("m,t,E,Ebar,length,mesh_ratio,dissipation,stability_residual,"
                         "picard_iters,lambda_mult,dL\n"));

  CHECK(fs::exists(dir / "out" / "snapshots" / "curve_0.csv"));
  CHECK(fs::exists(dir / "out" / "snapshots" / "curve_0.05.csv"));
  // snapshots preserve the vertex count exactly: header + J rows
  CHECK(line_count(dir / "out" / "snapshots" / "curve_0.csv") == 1 + 8);
  CHECK(fs::exists(dir / "out" / "energy.svg"));
  CHECK(fs::exists(dir / "out" / "curves.svg"));

  const auto summary = nlohmann::json::parse(slurp(dir / "out" / "summary.json"));
  CHECK(summary["steps"] == 5);
  CHECK(summary["scheme"] == "linear");
  CHECK(summary.contains("max_stability_residual"));
  CHECK(summary["assumptions"]["initial"]["a1_ok"].get<bool>());
}

TEST_CASE("reruns byte-reproduce the artifacts") {
  const fs::path dir = fresh_dir("run_repro");
  RunConfig config;
  config.seed = "lemniscate";
  config.variant = Variant::length_preserving;
  config.J = 16;
  config.dt = 0.005;
  config.duration = 0.02;
  config.snapshot_times = {0.02};
  config.output_dir = dir / "out";

  REQUIRE(cmd_run(config) == 0);
  const std::string first_series = slurp(dir / "out" / "timeseries.csv");
  const std::string first_snapshot = slurp(dir / "out" / "snapshots" / "curve_0.02.csv");
  REQUIRE(cmd_run(config) == 0);
  CHECK(slurp(dir / "out" / "timeseries.csv") == first_series);
  CHECK(slurp(dir / "out" / "snapshots" / "curve_0.02.csv") == first_snapshot);
}

TEST_CASE("invalid configurations exit nonzero without partial output") {
  const fs::path dir = fresh_dir("run_invalid");
  RunConfig config;
  config.seed = "circle";
  config.J = 8;
  config.dt = 0.01;
  config.duration = 0.05;
  config.lambda = -1.0;  // invalid
  config.output_dir = dir / "out";

  CHECK(cmd_run(config) != 0);
  CHECK_FALSE(fs::exists(dir / "out" / "timeseries.csv"));
  const auto summary = nlohmann::json::parse(slurp(dir / "out" / "summary.json"));
  CHECK(summary.contains("error"));
  CHECK(summary["error"]["type"] == "config");
}

TEST_CASE("the output root environment variable relocates relative directories") {
  const fs::path root = fresh_dir("env_root");
  setenv("CURVEFLOW_OUTPUT_ROOT", root.string().c_str(), 1);
  CHECK(resolve_output_dir("runs/a") == root / "runs/a");
  CHECK(resolve_output_dir("/abs/path") == fs::path("/abs/path"));
  unsetenv("CURVEFLOW_OUTPUT_ROOT");
  CHECK(resolve_output_dir("runs/a") == fs::path("runs/a"));
}

TEST_CASE("cmd_converge writes the ladder table and verdict") {
  const fs::path dir = fresh_dir("converge");
  ConvergeOptions options;
  options.scheme = Variant::linear;
  options.levels = 2;
  options.output_dir = dir / "out";
  CHECK(cmd_converge(options) == 0);

  const fs::path csv = dir / "out" / "convergence.csv";
  REQUIRE(fs::exists(csv));
  const std::string content = slurp(csv);
  CHECK(content.starts_with("J,h,dt,errX,eocX,err_curvature,eoc_curvature,err_bgn,eoc_bgn\n"));
  CHECK(content.find("# verdict: pass") != std::string::npos);

  // reread the first error column and compare with a fresh in-memory study
  std::stringstream stream(content);
  std::string line;
  std::getline(stream, line);  // header
  std::getline(stream, line);
  const size_t first = line.find(',', line.find(',', line.find(',') + 1) + 1);
  const double err_from_file = std::stod(line.substr(first + 1));
  const auto rows = convergence_study(Variant::linear, benchmark_ladder(1));
  CHECK(err_from_file == rows[0].err_position);  // 17 digits round-trip exactly

  options.levels = 1;
  CHECK(cmd_converge(options) == 0);
  CHECK(slurp(csv).find("# verdict: insufficient levels") != std::string::npos);
}
