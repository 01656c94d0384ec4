#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "milnebands/parallel.hpp"

namespace milnebands::cli {

using nlohmann::json;

namespace {

const std::set<std::string> kConfigKeys = {"v1",      "v2",          "n_cells",
                                           "mass",    "rel_tol",     "abs_tol",
                                           "tail_phase_tol", "scan_points", "format",
                                           "output"};

double number_field(const json& doc, const char* key) {
  const json& v = doc.at(key);
  if (!v.is_number()) throw ConfigError(std::string("config key '") + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(std::string("config key '") + key + "' must be finite");
  return d;
}

int integer_field(const json& doc, const char* key) {
  const double d = number_field(doc, key);
  if (d != std::floor(d) || std::abs(d) > 1e9) {
    throw ConfigError(std::string("config key '") + key + "' must be an integer");
  }
  return static_cast<int>(d);
}

std::string num(double x, bool paper) {
  char buf[64];
  if (paper) {
    std::snprintf(buf, sizeof buf, "%.4f", x);
  } else {
    std::snprintf(buf, sizeof buf, "%.10g", x);
  }
  return buf;
}

double jnum(double x, bool paper) { return paper ? std::round(x * 1e4) / 1e4 : x; }

json band_json(const Band& b, int index, bool paper) {
  auto edge = [&](const BandEdge& e) { return json{{"energy", jnum(e.energy, paper)}, {"branch", e.branch}}; };
  return json{{"band_index", index},
              {"well_depth", b.lower.well_depth},
              {"lower", edge(b.lower)},
              {"upper", edge(b.upper)}};
}

json bands_json(const std::vector<Band>& bands, bool paper) {
  json arr = json::array();
  for (std::size_t i = 0; i < bands.size(); ++i) arr.push_back(band_json(bands[i], static_cast<int>(i), paper));
  return arr;
}

int band_index_of(double energy, const std::vector<Band>& bands) {
  const Classification c = classify(energy, bands);
  return c.kind == Classification::Kind::in_band ? c.band_index : -1;
}

std::vector<LevelRow> level_rows(const std::vector<Level>& levels, const std::vector<Band>& bands,
                                 bool all_levels) {
  std::vector<LevelRow> rows;
  for (const Level& l : levels) {
    const int band = band_index_of(l.energy, bands);
    if (band < 0 && !all_levels) continue;
    rows.push_back({l.index_j, l.energy, band, l.alpha, l.beta});
  }
  return rows;
}

LevelSearch level_search(const RunConfig& config, unsigned threads) {
  LevelSearch s;
  s.scan_points = config.scan_points;
  s.threads = threads;
  return s;
}

}  // namespace

void RunConfig::validate() const {
  try {
    (void)potential();
    solver.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
  if (scan_points < 50) throw ConfigError("scan_points must be >= 50");
}

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!kConfigKeys.contains(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  for (const char* key : {"v1", "v2", "n_cells"}) {
    if (!doc.contains(key)) throw ConfigError(std::string("missing config key '") + key + "'");
  }
  RunConfig c;
  c.v1 = number_field(doc, "v1");
  c.v2 = number_field(doc, "v2");
  c.n_cells = integer_field(doc, "n_cells");
  if (doc.contains("mass")) c.mass = number_field(doc, "mass");
  if (doc.contains("rel_tol")) c.solver.rel_tol = number_field(doc, "rel_tol");
  if (doc.contains("abs_tol")) c.solver.abs_tol = number_field(doc, "abs_tol");
  if (doc.contains("tail_phase_tol")) c.solver.tail_phase_tol = number_field(doc, "tail_phase_tol");
  if (doc.contains("scan_points")) c.scan_points = integer_field(doc, "scan_points");
  if (doc.contains("format")) {
    const json& f = doc.at("format");
    if (!f.is_string()) throw ConfigError("config key 'format' must be a string");
    const auto s = f.get<std::string>();
    if (s == "csv") {
      c.format = OutputFormat::csv;
    } else if (s == "json") {
      c.format = OutputFormat::json;
    } else {
      throw ConfigError("format must be 'csv' or 'json', got '" + s + "'");
    }
  }
  if (doc.contains("output")) {
    if (!doc.at("output").is_string()) throw ConfigError("config key 'output' must be a string");
    c.output = doc.at("output").get<std::string>();
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

json to_json(const RunConfig& c) {
  return json{{"v1", c.v1},
              {"v2", c.v2},
              {"n_cells", c.n_cells},
              {"mass", c.mass},
              {"rel_tol", c.solver.rel_tol},
              {"abs_tol", c.solver.abs_tol},
              {"tail_phase_tol", c.solver.tail_phase_tol},
              {"scan_points", c.scan_points},
              {"format", c.format == OutputFormat::csv ? "csv" : "json"},
              {"output", c.output}};
}

std::vector<Band> configuration_bands(const RunConfig& config, unsigned threads) {
  EdgeSearch search;
  search.threads = threads;
  std::vector<Band> bands = ground_bands(config.v1, config.mass, config.solver, search);
  if (config.v2 != config.v1) {
    for (const Band& b : ground_bands(config.v2, config.mass, config.solver, search)) bands.push_back(b);
  }
  std::sort(bands.begin(), bands.end(),
            [](const Band& a, const Band& b) { return a.lower.energy < b.lower.energy; });
  return bands;
}

LevelReport cmd_levels(const RunConfig& config, const ReportOptions& options) {
  config.validate();
  LevelReport r;
  r.config = config;
  r.bands = configuration_bands(config, options.threads);
  const auto levels = find_levels(config.potential(), config.solver, level_search(config, options.threads));
  r.levels = level_rows(levels, r.bands, options.all_levels);
  return r;
}

BandReport cmd_bands(const RunConfig& config, const ReportOptions& options) {
  config.validate();
  return {config, configuration_bands(config, options.threads)};
}

SweepReport cmd_sweep(const RunConfig& config, const std::vector<int>& n_values,
                      const ReportOptions& options) {
  config.validate();
  for (int n : n_values) {
    if (n < 2 || n % 2 != 0) throw ConfigError("sweep cell counts must be even and >= 2, got " + std::to_string(n));
  }
  SweepReport r;
  r.config = config;
  r.n_values = n_values;
  if (n_values.empty()) return r;
  r.bands = configuration_bands(config, options.threads);

  // items run concurrently; the level scan inside each stays single-threaded
  const auto per_n = parallel_map(
      n_values.size(),
      [&](std::size_t i) {
        RunConfig c = config;
        c.n_cells = n_values[i];
        return find_levels(c.potential(), c.solver, level_search(c, 1));
      },
      options.threads);

  for (std::size_t i = 0; i < n_values.size(); ++i) {
    for (const LevelRow& row : level_rows(per_n[i], r.bands, options.all_levels)) {
      r.levels.push_back({n_values[i], row.j, row.energy, row.band_index});
    }
  }
  return r;
}

WaveReport cmd_wavefunction(const RunConfig& config, const WaveOptions& wave) {
  config.validate();
  if (wave.samples < 2) throw ConfigError("wavefunction needs at least 2 samples");
  const Potential pot = config.potential();
  const auto levels = find_levels(pot, config.solver, config.scan_points);
  if (wave.level < 0 || static_cast<std::size_t>(wave.level) >= levels.size()) {
    throw ConfigError("level " + std::to_string(wave.level) + " does not exist; " +
                      std::to_string(levels.size()) + " levels found");
  }
  double lo = wave.x_min;
  double hi = wave.x_max;
  if (lo == hi) {
    lo = -6.0;
    hi = pot.support_end() + 6.0;
  }
  if (!(lo < hi)) throw ConfigError("wavefunction range needs x_min < x_max");
  std::vector<double> grid(static_cast<std::size_t>(wave.samples));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid.size() - 1);
  }
  WaveReport r;
  r.config = config;
  r.level = levels[static_cast<std::size_t>(wave.level)];
  r.points = wavefunction(r.level, pot, config.solver, grid);
  return r;
}

VerifyReport cmd_verify(const RunConfig& config, const VerifyOptions& options) {
  config.validate();
  const Potential pot = config.potential();
  VerifyReport r;
  r.config = config;
  r.tolerance = options.tolerance;
  r.grid = FdGrid::padded(pot, options.oracle_points, options.oracle_pad);
  r.grid.validate(pot);

  LevelSearch search = level_search(config, options.threads);
  const auto levels = find_levels(pot, config.solver, search);
  const auto fd = fd_spectrum(pot, r.grid, static_cast<int>(levels.size()) + 16);
  r.amplitude_phase_count = static_cast<int>(levels.size());
  r.finite_difference_count = static_cast<int>(fd.size());

  if (options.oracle_points < 1000) {
    r.warnings.push_back("oracle grid has " + std::to_string(options.oracle_points) +
                         " points, below the 1000-point acceptance grade");
  }
  if (options.oracle_pad < 12.0) {
    r.warnings.push_back("oracle padding " + num(options.oracle_pad, false) + " is below 12");
  }
  try {
    check_box(pot, r.grid);
  } catch (const BoxError& e) {
    r.warnings.push_back(std::string("box check: ") + e.what());
  }

  const std::size_t common = std::min(levels.size(), fd.size());
  const auto estimates = parallel_map(
      common, [&](std::size_t k) { return richardson(pot, r.grid, static_cast<int>(k)); },
      options.threads);
  for (std::size_t k = 0; k < common; ++k) {
    VerifyRow row;
    row.j = levels[k].index_j;
    row.amplitude_phase = levels[k].energy;
    row.finite_difference = fd[k];
    row.abs_diff = std::abs(levels[k].energy - fd[k]);
    row.richardson_order = estimates[k].order;
    r.max_abs_diff = std::max(r.max_abs_diff, row.abs_diff);
    if (!(row.richardson_order >= 1.8 && row.richardson_order <= 2.2)) {
      r.warnings.push_back("level " + std::to_string(row.j) + ": Richardson order " +
                           num(row.richardson_order, false) + " outside [1.8, 2.2]");
    }
    const double discretisation = std::abs(fd[k] - estimates[k].extrapolated);
    if (discretisation > 0.1 * options.tolerance) {
      r.warnings.push_back("level " + std::to_string(row.j) + ": estimated discretisation error " +
                           num(discretisation, false) + " exceeds 10% of the tolerance");
    }
    r.rows.push_back(row);
  }
  if (levels.size() != fd.size()) {
    r.warnings.push_back("level count mismatch: amplitude-phase " + std::to_string(levels.size()) +
                         ", finite-difference " + std::to_string(fd.size()));
  }
  r.pass = levels.size() == fd.size() && r.max_abs_diff < options.tolerance;
  return r;
}

std::string format_levels(const LevelReport& r, OutputFormat f, bool paper) {
  if (f == OutputFormat::json) {
    json levels = json::array();
    for (const LevelRow& l : r.levels) {
      levels.push_back({{"j", l.j},
                        {"energy", jnum(l.energy, paper)},
                        {"band_index", l.band_index},
                        {"alpha", jnum(l.alpha, paper)},
                        {"beta", jnum(l.beta, paper)}});
    }
    return json{{"command", "levels"},
                {"config", to_json(r.config)},
                {"bands", bands_json(r.bands, paper)},
                {"levels", levels}}
               .dump(2) + "\n";
  }

  struct Row {
    double energy;
    std::string text;
  };
  std::vector<Row> rows;
  for (std::size_t i = 0; i < r.bands.size(); ++i) {
    for (const BandEdge* e : {&r.bands[i].lower, &r.bands[i].upper}) {
      rows.push_back({e->energy, "edge,," + num(e->energy, paper) + "," + std::to_string(i) + ",,," +
                                     std::to_string(e->branch) + "," + num(e->well_depth, false)});
    }
  }
  for (const LevelRow& l : r.levels) {
    rows.push_back({l.energy, "level," + std::to_string(l.j) + "," + num(l.energy, paper) + "," +
                                  std::to_string(l.band_index) + "," + num(l.alpha, paper) + "," +
                                  num(l.beta, paper) + ",,"});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.energy < b.energy; });
  std::string out = "kind,j,energy,band_index,alpha,beta,branch,well_depth\n";
  for (const Row& row : rows) out += row.text + "\n";
  return out;
}

std::string format_bands(const BandReport& r, OutputFormat f, bool paper) {
  if (f == OutputFormat::json) {
    return json{{"command", "bands"}, {"config", to_json(r.config)}, {"bands", bands_json(r.bands, paper)}}
               .dump(2) + "\n";
  }
  std::string out = "band_index,well_depth,lower,upper,lower_branch,upper_branch\n";
  for (std::size_t i = 0; i < r.bands.size(); ++i) {
    const Band& b = r.bands[i];
    out += std::to_string(i) + "," + num(b.lower.well_depth, false) + "," + num(b.lower.energy, paper) +
           "," + num(b.upper.energy, paper) + "," + std::to_string(b.lower.branch) + "," +
           std::to_string(b.upper.branch) + "\n";
  }
  return out;
}

std::string format_sweep(const SweepReport& r, OutputFormat f, bool paper) {
  if (f == OutputFormat::json) {
    json levels = json::array();
    for (const SweepRow& l : r.levels) {
      levels.push_back({{"n_cells", l.n_cells},
                        {"j", l.j},
                        {"energy", jnum(l.energy, paper)},
                        {"band_index", l.band_index}});
    }
    return json{{"command", "sweep"},
                {"config", to_json(r.config)},
                {"n_values", r.n_values},
                {"bands", bands_json(r.bands, paper)},
                {"levels", levels}}
               .dump(2) + "\n";
  }
  std::string out = "n_cells,j,energy,band_index\n";
  for (const SweepRow& l : r.levels) {
    out += std::to_string(l.n_cells) + "," + std::to_string(l.j) + "," + num(l.energy, paper) + "," +
           std::to_string(l.band_index) + "\n";
  }
  return out;
}

std::string format_sweep_edges(const SweepReport& r, bool paper) {
  std::string out = "band_index,well_depth,side,energy,branch\n";
  for (std::size_t i = 0; i < r.bands.size(); ++i) {
    const Band& b = r.bands[i];
    out += std::to_string(i) + "," + num(b.lower.well_depth, false) + ",lower," +
           num(b.lower.energy, paper) + "," + std::to_string(b.lower.branch) + "\n";
    out += std::to_string(i) + "," + num(b.upper.well_depth, false) + ",upper," +
           num(b.upper.energy, paper) + "," + std::to_string(b.upper.branch) + "\n";
  }
  return out;
}

std::string format_wavefunction(const WaveReport& r, OutputFormat f) {
  if (f == OutputFormat::json) {
    json pts = json::array();
    for (const WavePoint& p : r.points) pts.push_back({p.x, p.f});
    return json{{"command", "wavefunction"},
                {"config", to_json(r.config)},
                {"level", {{"j", r.level.index_j}, {"energy", r.level.energy}, {"alpha", r.level.alpha}, {"beta", r.level.beta}}},
                {"points", pts}}
               .dump(2) + "\n";
  }
  std::string out = "x,f\n";
  for (const WavePoint& p : r.points) out += num(p.x, false) + "," + num(p.f, false) + "\n";
  return out;
}

std::string format_verify(const VerifyReport& r, OutputFormat f) {
  if (f == OutputFormat::json) {
    json rows = json::array();
    for (const VerifyRow& v : r.rows) {
      rows.push_back({{"j", v.j},
                      {"amplitude_phase", v.amplitude_phase},
                      {"finite_difference", v.finite_difference},
                      {"abs_diff", v.abs_diff},
                      {"richardson_order", v.richardson_order}});
    }
    return json{{"command", "verify"},
                {"config", to_json(r.config)},
                {"grid", {{"x_left", r.grid.x_left}, {"x_right", r.grid.x_right}, {"n_points", r.grid.n_points}, {"spacing", r.grid.spacing()}}},
                {"tolerance", r.tolerance},
                {"amplitude_phase_count", r.amplitude_phase_count},
                {"finite_difference_count", r.finite_difference_count},
                {"rows", rows},
                {"max_abs_diff", r.max_abs_diff},
                {"warnings", r.warnings},
                {"pass", r.pass}}
               .dump(2) + "\n";
  }
  std::string out = "j,amplitude_phase,finite_difference,abs_diff,richardson_order\n";
  for (const VerifyRow& v : r.rows) {
    out += std::to_string(v.j) + "," + num(v.amplitude_phase, false) + "," + num(v.finite_difference, false) +
           "," + num(v.abs_diff, false) + "," + num(v.richardson_order, false) + "\n";
  }
  out += "# grid x_left=" + num(r.grid.x_left, false) + " x_right=" + num(r.grid.x_right, false) +
         " n_points=" + std::to_string(r.grid.n_points) + " h=" + num(r.grid.spacing(), false) + "\n";
  out += "# counts amplitude_phase=" + std::to_string(r.amplitude_phase_count) +
         " finite_difference=" + std::to_string(r.finite_difference_count) + "\n";
  for (const std::string& w : r.warnings) out += "# warning: " + w + "\n";
  out += "# max_abs_diff=" + num(r.max_abs_diff, false) + " tolerance=" + num(r.tolerance, false) +
         " result=" + (r.pass ? "PASS" : "FAIL") + "\n";
  return out;
}

namespace {

std::vector<int> parse_n_values(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      const int n = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(n);
    } catch (const std::exception&) {
      throw ConfigError("bad cell count '" + item + "' in --n-values");
    }
  }
  return out;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write output file " + path);
  out << text;
}

std::string sibling_path(const std::string& path, const std::string& suffix) {
  std::filesystem::path p(path);
  return (p.parent_path() / (p.stem().string() + suffix)).string();
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Bound states and Floquet bands of joined sin^2 lattices"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_path;
  bool paper = false;
  bool all_levels = false;
  unsigned threads = 0;
  std::string n_values_text;
  bool n_values_given = false;
  WaveOptions wave;
  VerifyOptions verify;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--output", output_path, "Output file (overrides the config's output)");
    sub->add_flag("--paper", paper, "Round energies to 4 decimals");
    sub->add_option("--threads", threads, "Worker threads (0 = all cores)");
  };

  auto* levels = app.add_subcommand("levels", "Bound-state levels with ground-band edges");
  common(levels);
  levels->add_flag("--all-levels", all_levels, "Include levels outside the ground bands");
  auto* bands = app.add_subcommand("bands", "Ground Floquet/Bloch band edges of both depths");
  common(bands);
  auto* sweep = app.add_subcommand("sweep", "Levels for several cell counts");
  common(sweep);
  sweep->add_flag("--all-levels", all_levels, "Include levels outside the ground bands");
  sweep->add_option("--n-values", n_values_text, "Comma-separated even cell counts (default: config n_cells)")
      ->each([&](const std::string&) { n_values_given = true; });
  auto* wavef = app.add_subcommand("wavefunction", "Sample F(x) for one level");
  common(wavef);
  wavef->add_option("--level", wave.level, "Level index j");
  wavef->add_option("--x-min", wave.x_min, "Left end of the sample range");
  wavef->add_option("--x-max", wave.x_max, "Right end of the sample range");
  wavef->add_option("--samples", wave.samples, "Number of sample points");
  auto* ver = app.add_subcommand("verify", "Compare levels against the finite-difference oracle");
  common(ver);
  ver->add_option("--oracle-points", verify.oracle_points, "Interior finite-difference points");
  ver->add_option("--oracle-pad", verify.oracle_pad, "Box padding beyond the support");
  ver->add_option("--tolerance", verify.tolerance, "Maximum allowed |dE|");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kOk : kConfigFailure;
  }

  try {
    RunConfig config = load_config(config_path);
    const std::string out_path = output_path.empty() ? config.output : output_path;
    ReportOptions options{paper, all_levels, threads};

    if (levels->parsed()) {
      emit(format_levels(cmd_levels(config, options), config.format, paper), out_path);
    } else if (bands->parsed()) {
      emit(format_bands(cmd_bands(config, options), config.format, paper), out_path);
    } else if (sweep->parsed()) {
      const std::vector<int> n_values =
          n_values_given ? parse_n_values(n_values_text) : std::vector<int>{config.n_cells};
      const SweepReport r = cmd_sweep(config, n_values, options);
      if (config.format == OutputFormat::json) {
        emit(format_sweep(r, OutputFormat::json, paper), out_path);
      } else if (out_path.empty()) {
        emit(format_sweep(r, OutputFormat::csv, paper) + "\n" + format_sweep_edges(r, paper), "");
      } else {
        emit(format_sweep(r, OutputFormat::csv, paper), out_path);
        emit(format_sweep_edges(r, paper), sibling_path(out_path, ".bands.csv"));
      }
    } else if (wavef->parsed()) {
      emit(format_wavefunction(cmd_wavefunction(config, wave), config.format), out_path);
    } else if (ver->parsed()) {
      verify.threads = threads;
      const VerifyReport r = cmd_verify(config, verify);
      emit(format_verify(r, config.format), out_path);
      return r.pass ? kOk : kVerifyMismatch;
    }
  } catch (const ValidationError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigFailure;
  } catch (const ResolutionError& e) {
    std::cerr << "resolution error: " << e.what() << "\n";
    return kResolutionFailure;
  } catch (const Error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumericalFailure;
  }
  return kOk;
}

}  // namespace milnebands::cli
