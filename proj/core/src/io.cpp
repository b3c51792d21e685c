#include "curveflow/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace curveflow {

namespace {

std::string trim(const std::string& s) {
  size_t begin = 0;
  size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

double parse_double(const std::string& value, const std::string& key) {
  try {
    size_t pos = 0;
    const double parsed = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return parsed;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse number from '" + value + "'");
  }
}

int parse_int(const std::string& value, const std::string& key) {
  try {
    size_t pos = 0;
    const int parsed = std::stoi(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return parsed;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse integer from '" + value + "'");
  }
}

bool parse_bool(const std::string& value, const std::string& key) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ConfigError("config key '" + key + "': cannot parse boolean from '" + value + "'");
}

std::vector<double> parse_double_list(const std::string& value, const std::string& key) {
  std::vector<double> out;
  std::stringstream stream(value);
  std::string item;
  while (std::getline(stream, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_double(item, key));
  }
  return out;
}

void set_key(RunConfig& config, const std::string& key, const std::string& value) {
  if (key == "experiment") {
    config.experiment = value;
  } else if (key == "seed") {
    config.seed = value;
  } else if (key == "vertices_file") {
    config.vertices_file = value;
  } else if (key == "scheme") {
    config.variant = variant_from_string(value);
  } else if (key == "J") {
    config.J = parse_int(value, key);
  } else if (key == "dt") {
    config.dt = parse_double(value, key);
  } else if (key == "T") {
    config.duration = parse_double(value, key);
  } else if (key == "lambda") {
    config.lambda = parse_double(value, key);
  } else if (key == "picard_tol") {
    config.picard_tol = parse_double(value, key);
  } else if (key == "picard_max") {
    config.picard_max = parse_int(value, key);
  } else if (key == "snapshot_times") {
    config.snapshot_times = parse_double_list(value, key);
  } else if (key == "output_dir") {
    config.output_dir = value;
  } else if (key == "emit_svg") {
    config.emit_svg = parse_bool(value, key);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

void load_preset_into(RunConfig& config, const std::string& name) {
  const ExperimentSpec spec = preset(name);
  config.experiment = spec.name;
  config.seed = spec.seed;
  config.variant = spec.variant;
  config.J = spec.J;
  config.dt = spec.dt;
  config.duration = spec.duration;
  config.lambda = spec.lambda;
  config.snapshot_times = spec.snapshot_times;
}

}  // namespace

void RunConfig::validate() const {
  if (seed == "vertices") {
    if (vertices_file.empty()) {
      throw ConfigError("seed 'vertices' needs the vertices_file key");
    }
    if (J != 0 && J < 3) throw ConfigError("J must be at least 3 (or 0 for the native count)");
  } else {
    if (J < 3) throw ConfigError("J must be at least 3");
  }
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (duration < dt) throw ConfigError("T must be at least one time step");
  if (lambda < 0.0) throw ConfigError("lambda must be nonnegative");
  if (!(picard_tol > 0.0)) throw ConfigError("picard_tol must be positive");
  if (picard_max < 1) throw ConfigError("picard_max must be at least 1");
}

RunConfig parse_run_config(const std::filesystem::path& file) {
  std::ifstream stream(file);
  if (!stream) throw ConfigError("cannot open config file '" + file.string() + "'");

  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  int line_number = 0;
  while (std::getline(stream, line)) {
    ++line_number;
    const size_t comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_number) +
                        ": expected 'key = value', got '" + line + "'");
    }
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    pairs.emplace_back(trim(line.substr(0, eq)), value);
  }

  RunConfig config;
  // The preset provides the defaults, so resolve it before the other keys.
  for (const auto& [key, value] : pairs) {
    if (key == "experiment") load_preset_into(config, value);
  }
  for (const auto& [key, value] : pairs) {
    if (key != "experiment") set_key(config, key, value);
  }
  return config;
}

void apply_override(RunConfig& config, const std::string& key_equals_value) {
  const size_t eq = key_equals_value.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("override '" + key_equals_value + "' is not of the form key=value");
  }
  const std::string key = trim(key_equals_value.substr(0, eq));
  const std::string value = trim(key_equals_value.substr(eq + 1));
  if (key == "experiment") {
    load_preset_into(config, value);
  } else {
    set_key(config, key, value);
  }
}

std::string format_full(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

namespace {

std::string format_short(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%g", value);
  return buffer;
}

}  // namespace

ClosedCurve read_vertex_csv(const std::filesystem::path& file) {
  std::ifstream stream(file);
  if (!stream) throw ConfigError("cannot open vertex file '" + file.string() + "'");
  ClosedCurve curve;
  std::string line;
  int line_number = 0;
  while (std::getline(stream, line)) {
    ++line_number;
    const size_t comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    const size_t sep = line.find(',');
    if (sep == std::string::npos) {
      throw ConfigError("vertex file line " + std::to_string(line_number) +
                        ": expected 'x,y', got '" + line + "'");
    }
    curve.vertices.emplace_back(parse_double(trim(line.substr(0, sep)), "x"),
                                parse_double(trim(line.substr(sep + 1)), "y"));
  }
  if (curve.size() < 3) {
    throw ConfigError("vertex file '" + file.string() + "' holds fewer than 3 vertices");
  }
  return curve;
}

void write_timeseries_csv(const std::filesystem::path& file, const RunRecord& record) {
  std::ofstream out(file);
  if (!out) throw Error("cannot write '" + file.string() + "'");
  out << "m,t,E,Ebar,length,mesh_ratio,dissipation,stability_residual,picard_iters,"
         "lambda_mult,dL\n";
  for (const TimeSeriesRow& row : record.rows) {
    out << row.m << ',' << format_full(row.t) << ',' << format_full(row.energy_linear) << ','
        << format_full(row.energy_bar) << ',' << format_full(row.length) << ','
        << format_full(row.mesh_ratio) << ',' << format_full(row.dissipation) << ','
        << format_full(row.stability_residual) << ',' << row.picard_iters << ','
        << format_full(row.multiplier) << ',' << format_full(row.rel_length_change) << '\n';
  }
}

void write_snapshot_csv(const std::filesystem::path& file, const ClosedCurve& curve) {
  std::ofstream out(file);
  if (!out) throw Error("cannot write '" + file.string() + "'");
  out << "x,y\n";
  for (const Vec2& v : curve.vertices) {
    out << format_full(v.x()) << ',' << format_full(v.y()) << '\n';
  }
}

void write_convergence_csv(const std::filesystem::path& file,
                           const std::vector<ConvergenceRow>& rows, const std::string& verdict) {
  std::ofstream out(file);
  if (!out) throw Error("cannot write '" + file.string() + "'");
  out << "J,h,dt,errX,eocX,err_curvature,eoc_curvature,err_bgn,eoc_bgn\n";
  auto eoc = [](double value) { return std::isnan(value) ? std::string() : format_full(value); };
  for (const ConvergenceRow& row : rows) {
    out << row.J << ',' << format_full(row.h) << ',' << format_full(row.dt) << ','
        << format_full(row.err_position) << ',' << eoc(row.eoc_position) << ','
        << format_full(row.err_curvature) << ',' << eoc(row.eoc_curvature) << ','
        << format_full(row.err_bgn) << ',' << eoc(row.eoc_bgn) << '\n';
  }
  out << "# verdict: " << verdict << '\n';
}

namespace {

struct SvgFrame {
  double min_x, max_x, min_y, max_y;
  double width, height, margin;

  double px(double x) const {
    return margin + (x - min_x) / (max_x - min_x) * (width - 2 * margin);
  }
  double py(double y) const {
    return height - margin - (y - min_y) / (max_y - min_y) * (height - 2 * margin);
  }
};

const char* kPalette[8] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                           "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

void svg_polyline(std::ofstream& out, const SvgFrame& f,
                  const std::vector<std::pair<double, double>>& points, const char* color,
                  bool closed) {
  out << (closed ? "  <polygon points=\"" : "  <polyline points=\"");
  for (const auto& [x, y] : points) {
    out << format_short(f.px(x)) << ',' << format_short(f.py(y)) << ' ';
  }
  out << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\"/>\n";
}

}  // namespace

void write_energy_svg(const std::filesystem::path& file, const RunRecord& record) {
  std::ofstream out(file);
  if (!out) throw Error("cannot write '" + file.string() + "'");
  double min_e = record.rows.front().energy_linear;
  double max_e = min_e;
  for (const TimeSeriesRow& row : record.rows) {
    min_e = std::min({min_e, row.energy_linear, row.energy_bar});
    max_e = std::max({max_e, row.energy_linear, row.energy_bar});
  }
  if (max_e == min_e) max_e = min_e + 1.0;
  SvgFrame f{0.0, record.rows.back().t, min_e, max_e, 640.0, 420.0, 48.0};
  if (f.max_x == f.min_x) f.max_x = f.min_x + 1.0;

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"420\" "
         "viewBox=\"0 0 640 420\">\n";
  out << "  <rect x=\"48\" y=\"48\" width=\"544\" height=\"324\" fill=\"none\" "
         "stroke=\"#888\"/>\n";
  std::vector<std::pair<double, double>> linear, bar;
  linear.reserve(record.rows.size());
  bar.reserve(record.rows.size());
  for (const TimeSeriesRow& row : record.rows) {
    linear.emplace_back(row.t, row.energy_linear);
    bar.emplace_back(row.t, row.energy_bar);
  }
  svg_polyline(out, f, linear, kPalette[0], false);
  svg_polyline(out, f, bar, kPalette[1], false);
  out << "  <text x=\"56\" y=\"40\" font-size=\"13\">energy (two-level "
         "<tspan fill=\"#1f77b4\">E</tspan>, single-level <tspan fill=\"#d62728\">Ebar</tspan>) "
         "vs t</text>\n";
  out << "  <text x=\"56\" y=\"400\" font-size=\"12\">t in [0, " << format_short(f.max_x)
      << "], E in [" << format_short(f.min_y) << ", " << format_short(f.max_y) << "]</text>\n";
  out << "</svg>\n";
}

void write_curves_svg(const std::filesystem::path& file, const RunRecord& record) {
  std::ofstream out(file);
  if (!out) throw Error("cannot write '" + file.string() + "'");
  double min_x = 0.0, max_x = 1.0, min_y = 0.0, max_y = 1.0;
  bool first = true;
  for (const auto& [t, curve] : record.snapshots) {
    for (const Vec2& v : curve.vertices) {
      if (first) {
        min_x = max_x = v.x();
        min_y = max_y = v.y();
        first = false;
      }
      min_x = std::min(min_x, v.x());
      max_x = std::max(max_x, v.x());
      min_y = std::min(min_y, v.y());
      max_y = std::max(max_y, v.y());
    }
  }
  // Equal-aspect: pad the smaller span to match the larger one.
  const double span = std::max(max_x - min_x, max_y - min_y);
  const double pad_x = (span - (max_x - min_x)) / 2 + 0.05 * span;
  const double pad_y = (span - (max_y - min_y)) / 2 + 0.05 * span;
  SvgFrame f{min_x - pad_x, max_x + pad_x, min_y - pad_y, max_y + pad_y, 640.0, 640.0, 32.0};

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" "
         "viewBox=\"0 0 640 640\">\n";
  int index = 0;
  for (const auto& [t, curve] : record.snapshots) {
    std::vector<std::pair<double, double>> points;
    points.reserve(curve.vertices.size());
    for (const Vec2& v : curve.vertices) points.emplace_back(v.x(), v.y());
    const char* color = kPalette[index % 8];
    svg_polyline(out, f, points, color, true);
    out << "  <text x=\"36\" y=\"" << 22 + 16 * index << "\" font-size=\"12\" fill=\"" << color
        << "\">t = " << format_short(t) << "</text>\n";
    ++index;
  }
  out << "</svg>\n";
}

std::filesystem::path resolve_output_dir(const std::filesystem::path& dir) {
  const char* root = std::getenv("CURVEFLOW_OUTPUT_ROOT");
  if (root != nullptr && *root != '\0' && dir.is_relative()) {
    return std::filesystem::path(root) / dir;
  }
  return dir;
}

namespace {

nlohmann::ordered_json assumption_json(const AssumptionReport& report) {
  return {{"a1_ok", report.a1_ok},
          {"a2_ok", report.a2_ok},
          {"min_vertex_normal", report.min_vertex_normal},
          {"span_sigma", report.span_sigma}};
}

void write_error_summary(const std::filesystem::path& dir, const std::string& type,
                         const std::string& message) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  std::ofstream out(dir / "summary.json");
  if (!out) return;  // nothing more we can do; the exit status still signals failure
  nlohmann::ordered_json doc;
  doc["error"] = {{"type", type}, {"message", message}};
  out << doc.dump(2) << '\n';
}

}  // namespace

int cmd_run(RunConfig config) {
  const std::filesystem::path out_dir = resolve_output_dir(config.output_dir);
  try {
    config.validate();
  } catch (const Error& err) {
    write_error_summary(out_dir, "config", err.what());
    return 1;
  }

  try {
    InitialData initial;
    if (config.seed == "vertices") {
      const ClosedCurve polygon = read_vertex_csv(config.vertices_file);
      const int J = config.J == 0 ? polygon.size() : config.J;
      initial = bgn_project(interpolate(from_vertices(polygon.vertices), J));
    } else {
      initial = bgn_project(interpolate(make_parameterization(config.seed), config.J));
    }

    SimulationInput input;
    input.initial = std::move(initial);
    input.config.variant = config.variant;
    input.config.lambda = config.lambda;
    input.config.dt = config.dt;
    input.config.picard_tol = config.picard_tol;
    input.config.picard_max = config.picard_max;
    input.duration = config.duration;
    input.snapshot_times = config.snapshot_times;
    input.seed_name = config.seed;
    const ExactExpandingCircle exact;
    if (config.seed == "expanding_circle") input.exact = &exact;

    const RunRecord record = simulate(input);

    std::filesystem::create_directories(out_dir / "snapshots");
    write_timeseries_csv(out_dir / "timeseries.csv", record);
    for (const auto& [t, curve] : record.snapshots) {
      write_snapshot_csv(out_dir / "snapshots" / ("curve_" + format_short(t) + ".csv"), curve);
    }
    if (config.emit_svg) {
      write_energy_svg(out_dir / "energy.svg", record);
      write_curves_svg(out_dir / "curves.svg", record);
    }

    const TimeSeriesRow& last = record.rows.back();
    nlohmann::ordered_json doc;
    doc["experiment"] = config.experiment;
    doc["seed"] = config.seed;
    doc["scheme"] = to_string(config.variant);
    doc["J"] = config.J == 0 ? record.final_state.current.size() : config.J;
    doc["dt"] = config.dt;
    doc["T"] = config.duration;
    doc["lambda"] = config.lambda;
    doc["steps"] = static_cast<int>(record.rows.size()) - 1;
    doc["final"] = {{"t", last.t},
                    {"E", last.energy_linear},
                    {"Ebar", last.energy_bar},
                    {"length", last.length},
                    {"mesh_ratio", last.mesh_ratio},
                    {"rel_length_change", last.rel_length_change}};
    doc["initial_energy"] = record.initial_energy;
    doc["max_stability_residual"] = record.max_stability_residual;
    doc["max_mesh_ratio"] = record.max_mesh_ratio;
    doc["max_picard_iters"] = record.max_picard_iters;
    doc["max_abs_rel_length_change"] = record.max_abs_rel_length_change;
    doc["assumptions"] = {{"initial", assumption_json(record.initial_assumptions)},
                          {"final", assumption_json(record.final_assumptions)}};
    if (input.exact != nullptr) {
      const ErrorNorms norms = error_norms(record, exact);
      doc["circle_errors"] = {{"position", norms.position},
                              {"curvature", norms.curvature},
                              {"bgn_curvature", norms.bgn_curvature}};
    }
    std::ofstream summary(out_dir / "summary.json");
    if (!summary) throw Error("cannot write summary.json");
    summary << doc.dump(2) << '\n';
    return 0;
  } catch (const Error& err) {
    write_error_summary(out_dir, "run", err.what());
    return 1;
  }
}

int cmd_converge(const ConvergeOptions& options) {
  if (options.levels < 1) throw ConfigError("converge: levels must be at least 1");
  if (options.scheme != Variant::linear && options.scheme != Variant::nonlinear) {
    throw ConfigError("converge: scheme must be 'linear' or 'nonlinear'");
  }

  const auto ladder = benchmark_ladder(options.levels);
  const std::vector<ConvergenceRow> rows = convergence_study(options.scheme, ladder);

  std::string verdict = "pass";
  if (options.levels < 2) {
    verdict = "insufficient levels";
  } else {
    const ReferenceErrors& reference = reference_errors(options.scheme);
    const size_t comparable = std::min(rows.size(), reference.position.size());
    for (size_t i = 0; i < comparable; ++i) {
      const auto within = [](double value, double target) {
        return std::abs(value - target) <= 0.03 * target;
      };
      if (!within(rows[i].err_position, reference.position[i]) ||
          !within(rows[i].err_curvature, reference.curvature[i]) ||
          !within(rows[i].err_bgn, reference.bgn_curvature[i])) {
        verdict = "fail";
      }
    }
    for (size_t i = 1; i < rows.size(); ++i) {
      const auto in_window = [](double eoc) { return eoc >= 1.9 && eoc <= 2.1; };
      if (!in_window(rows[i].eoc_position) || !in_window(rows[i].eoc_curvature) ||
          !in_window(rows[i].eoc_bgn)) {
        verdict = "fail";
      }
    }
  }

  const std::filesystem::path out_dir = resolve_output_dir(options.output_dir);
  std::filesystem::create_directories(out_dir);
  write_convergence_csv(out_dir / "convergence.csv", rows, verdict);
  return verdict == "fail" ? 2 : 0;
}

}  // namespace curveflow
