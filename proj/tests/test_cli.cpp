#include <doctest.h>

#include <filesystem>
#include <map>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "support/oracles.hpp"

using namespace milnebands;
using namespace milnebands::cli;
using nlohmann::json;

namespace {

std::filesystem::path scratch_dir() {
  static const std::filesystem::path dir = [] {
    auto d = std::filesystem::temp_directory_path() / "milnebands_cli_tests";
    std::filesystem::remove_all(d);
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write_config(const std::string& name, const json& doc) {
  const auto path = scratch_dir() / name;
  std::ofstream(path) << doc.dump();
  return path.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "milnebands");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

RunConfig config(double v1, double v2, int n) {
  return parse_config(json{{"v1", v1}, {"v2", v2}, {"n_cells", n}});
}

}  // namespace

TEST_CASE("config parsing and validation") {
  const RunConfig c = parse_config(json{{"v1", -1.35},
                                        {"v2", -1.25},
                                        {"n_cells", 4},
                                        {"mass", 2.0},
                                        {"rel_tol", 1e-9},
                                        {"abs_tol", 1e-9},
                                        {"tail_phase_tol", 1e-11},
                                        {"scan_points", 300},
                                        {"format", "json"},
                                        {"output", "out.json"}});
  CHECK(c.v1 == -1.35);
  CHECK(c.n_cells == 4);
  CHECK(c.solver.rel_tol == 1e-9);
  CHECK(c.solver.tail_phase_tol == 1e-11);
  CHECK(c.scan_points == 300);
  CHECK(c.format == OutputFormat::json);
  CHECK(c.output == "out.json");
  CHECK(parse_config(to_json(c)).v2 == c.v2);

  CHECK(config(-1.0, -1.0, 2).mass == kDefaultMass);
  CHECK_THROWS_AS(parse_config(json{{"v1", -1}, {"v2", -1}, {"n_cells", 2}, {"colour", 1}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"v1", -1}, {"n_cells", 2}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"v1", -1}, {"v2", -1}, {"n_cells", 3}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"v1", -1}, {"v2", -1}, {"n_cells", 2.5}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"v1", "deep"}, {"v2", -1}, {"n_cells", 2}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"v1", -1}, {"v2", -1}, {"n_cells", 2}, {"format", "xml"}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"v1", -1}, {"v2", -1}, {"n_cells", 2}, {"mass", 0}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"v1", -1}, {"v2", -1}, {"n_cells", 2}, {"scan_points", 10}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json::array()), ConfigError);
}

TEST_CASE("levels: N=6 symmetric matches the reference levels to four decimals") {
  const LevelReport r = cmd_levels(config(-1.25, -1.25, 6));
  const std::vector<double> want = {-0.7925, -0.7845, -0.7723, -0.7577, -0.7436, -0.7331};
  REQUIRE(r.levels.size() == want.size());
  for (std::size_t j = 0; j < want.size(); ++j) {
    CHECK(r.levels[j].j == static_cast<int>(j));
    CHECK(std::abs(r.levels[j].energy - want[j]) < 1e-4);
    CHECK(r.levels[j].band_index == 0);
  }
  CHECK(r.bands.size() == 1);
}

TEST_CASE("levels: N=2 asymmetric rows fall in bands 0 and 1") {
  const LevelReport r = cmd_levels(config(-1.35, -1.25, 2));
  REQUIRE(r.levels.size() == 2);
  CHECK(std::abs(r.levels[0].energy - -0.8445) < 1e-4);
  CHECK(std::abs(r.levels[1].energy - -0.7610) < 1e-4);
  CHECK(r.levels[0].band_index == 0);
  CHECK(r.levels[1].band_index == 1);
  REQUIRE(r.bands.size() == 2);

  ReportOptions all;
  all.all_levels = true;
  const LevelReport every = cmd_levels(config(-1.35, -1.25, 2), all);
  CHECK(every.levels.size() > 2);
  CHECK(every.levels.back().band_index == -1);

  const std::string csv = format_levels(r, OutputFormat::csv, true);
  CHECK(csv.rfind("kind,j,energy,band_index,alpha,beta,branch,well_depth\n", 0) == 0);
  CHECK(csv.find("level,0,-0.8445,0,") != std::string::npos);
  CHECK(csv.find("edge,,-0.8701,0,,,1,-1.35") != std::string::npos);
}

TEST_CASE("levels: zero potential gives zero rows and exit 0") {
  const LevelReport r = cmd_levels(config(0.0, 0.0, 2));
  CHECK(r.levels.empty());
  CHECK(r.bands.empty());
  const auto cfg = write_config("zero.json", {{"v1", 0}, {"v2", 0}, {"n_cells", 2}});
  const auto out = (scratch_dir() / "zero.csv").string();
  CHECK(run_cli({"levels", "--config", cfg, "--output", out}) == kOk);
  CHECK(slurp(out) == "kind,j,energy,band_index,alpha,beta,branch,well_depth\n");
}

TEST_CASE("bands report") {
  const BandReport r = cmd_bands(config(-1.35, -1.25, 2));
  REQUIRE(r.bands.size() == 2);
  CHECK(std::abs(r.bands[0].lower.energy - oracles::kEdgeDeepLower) < 5e-4);
  CHECK(std::abs(r.bands[1].upper.energy - oracles::kEdgeShallowUpper) < 5e-4);
  const std::string csv = format_bands(r, OutputFormat::csv, true);
  CHECK(csv.find("0,-1.35,-0.8701,-0.8106,1,-1\n") != std::string::npos);
}

TEST_CASE("sweep: level counts and band containment") {
  const SweepReport sym = cmd_sweep(config(-1.25, -1.25, 2), {2, 4, 6});
  std::map<int, int> counts;
  for (const SweepRow& row : sym.levels) ++counts[row.n_cells];
  CHECK(counts[2] == 2);
  CHECK(counts[4] == 4);
  CHECK(counts[6] == 6);

  const SweepReport asym = cmd_sweep(config(-1.35, -1.25, 2), {2, 4, 6});
  CHECK(asym.levels.size() == 12);
  for (const SweepRow& row : asym.levels) {
    const bool deep = row.energy >= oracles::kEdgeDeepLower - 5e-4 && row.energy <= oracles::kEdgeDeepUpper + 5e-4;
    const bool shallow = row.energy >= oracles::kEdgeShallowLower - 5e-4 && row.energy <= oracles::kEdgeShallowUpper + 5e-4;
    CHECK((deep || shallow));
    CHECK(row.band_index >= 0);
  }

  const std::string csv = format_sweep(asym, OutputFormat::csv);
  CHECK(csv.rfind("n_cells,j,energy,band_index\n", 0) == 0);
  const std::string edges = format_sweep_edges(asym, true);
  CHECK(edges.find("1,-1.25,upper,-0.7293,-1\n") != std::string::npos);

  const SweepReport empty = cmd_sweep(config(-1.25, -1.25, 2), {});
  CHECK(empty.levels.empty());
  CHECK_THROWS_AS(cmd_sweep(config(-1.25, -1.25, 2), {2, 3}), ConfigError);
}

TEST_CASE("sweep through the command line") {
  const auto cfg = write_config("sweep.json", {{"v1", -1.25}, {"v2", -1.25}, {"n_cells", 2}});
  const auto out = (scratch_dir() / "sweep.csv").string();
  CHECK(run_cli({"sweep", "--config", cfg, "--n-values", "2,4", "--output", out, "--paper"}) == kOk);
  const std::string levels = slurp(out);
  CHECK(levels.find("4,3,-0.7366,0\n") != std::string::npos);
  CHECK(slurp((scratch_dir() / "sweep.bands.csv").string()).rfind("band_index,well_depth,side,energy,branch\n", 0) == 0);
  CHECK(run_cli({"sweep", "--config", cfg, "--n-values", "", "--output", out}) == kOk);
  CHECK(slurp(out) == "n_cells,j,energy,band_index\n");
}

TEST_CASE("wavefunction command") {
  WaveOptions w;
  w.level = 1;
  w.samples = 11;
  const WaveReport r = cmd_wavefunction(config(-1.25, -1.25, 2), w);
  CHECK(r.level.index_j == 1);
  REQUIRE(r.points.size() == 11);
  CHECK(r.points.front().x == -6.0);
  w.level = 99;
  CHECK_THROWS_AS(cmd_wavefunction(config(-1.25, -1.25, 2), w), ConfigError);
}

TEST_CASE("verify: amplitude-phase against the oracle") {
  const VerifyReport r = cmd_verify(config(-1.25, -1.25, 4));
  CHECK(r.pass);
  CHECK(r.max_abs_diff < 2e-3);
  CHECK(r.amplitude_phase_count == r.finite_difference_count);
  CHECK(r.grid.n_points == 8000);
  CHECK(r.warnings.empty());

  const VerifyReport zero = cmd_verify(config(0.0, 0.0, 2));
  CHECK(zero.pass);
  CHECK(zero.rows.empty());

  VerifyOptions coarse;
  coarse.oracle_points = 200;
  const VerifyReport rough = cmd_verify(config(-1.25, -1.25, 4), coarse);
  CHECK(!rough.warnings.empty());
  CHECK(format_verify(rough, OutputFormat::csv).find("# warning:") != std::string::npos);
}

TEST_CASE("exit-code contract") {
  const auto good = write_config("good.json", {{"v1", -1.25}, {"v2", -1.25}, {"n_cells", 2}});
  const auto odd = write_config("odd.json", {{"v1", -1.25}, {"v2", -1.25}, {"n_cells", 3}});
  const auto unknown = write_config("unknown.json", {{"v1", -1.25}, {"v2", -1.25}, {"n_cells", 2}, {"x", 1}});
  const auto coarse = write_config("coarse.json", {{"v1", -1.25}, {"v2", -1.25}, {"n_cells", 6}, {"scan_points", 50}});
  const auto out = (scratch_dir() / "exit.txt").string();

  CHECK(run_cli({"levels", "--config", odd, "--output", out}) == kConfigFailure);
  CHECK(run_cli({"levels", "--config", unknown, "--output", out}) == kConfigFailure);
  CHECK(run_cli({"levels", "--config", (scratch_dir() / "missing.json").string()}) == kConfigFailure);
  CHECK(run_cli({"levels"}) == kConfigFailure);
  CHECK(run_cli({"levels", "--config", coarse, "--output", out}) == kResolutionFailure);
  CHECK(run_cli({"verify", "--config", good, "--output", out, "--tolerance", "1e-12"}) == kVerifyMismatch);
  CHECK(run_cli({"verify", "--config", good, "--output", out}) == kOk);
  CHECK(run_cli({"bands", "--config", good, "--output", out}) == kOk);
  CHECK(run_cli({"wavefunction", "--config", good, "--output", out, "--samples", "5"}) == kOk);
}

TEST_CASE("numerical failure maps to exit 2") {
  // local tolerances far below double precision force a step underflow
  const auto cfg = write_config("tight.json", {{"v1", -1.25}, {"v2", -1.25}, {"n_cells", 2}, {"rel_tol", 1e-30}, {"abs_tol", 1e-30}});
  CHECK(run_cli({"levels", "--config", cfg, "--output", (scratch_dir() / "tight.csv").string()}) == kNumericalFailure);
}

TEST_CASE("identical configs give byte-identical CSV") {
  const auto cfg = write_config("det.json", {{"v1", -1.35}, {"v2", -1.25}, {"n_cells", 4}});
  const auto a = (scratch_dir() / "det_a.csv").string();
  const auto b = (scratch_dir() / "det_b.csv").string();
  CHECK(run_cli({"levels", "--config", cfg, "--output", a}) == kOk);
  CHECK(run_cli({"levels", "--config", cfg, "--output", b, "--threads", "1"}) == kOk);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a).find('\r') == std::string::npos);
}

TEST_CASE("JSON reports re-parse into the same values") {
  const LevelReport r = cmd_levels(config(-1.35, -1.25, 4));
  const json doc = json::parse(format_levels(r, OutputFormat::json));
  CHECK(doc.at("command") == "levels");
  REQUIRE(doc.at("levels").size() == r.levels.size());
  for (std::size_t i = 0; i < r.levels.size(); ++i) {
    const json& l = doc.at("levels").at(i);
    CHECK(l.at("j").get<int>() == r.levels[i].j);
    CHECK(l.at("energy").get<double>() == r.levels[i].energy);
    CHECK(l.at("alpha").get<double>() == r.levels[i].alpha);
    CHECK(l.at("beta").get<double>() == r.levels[i].beta);
    CHECK(l.at("band_index").get<int>() == r.levels[i].band_index);
  }
  REQUIRE(doc.at("bands").size() == r.bands.size());
  CHECK(doc.at("bands").at(0).at("lower").at("energy").get<double>() == r.bands[0].lower.energy);
  CHECK(parse_config(doc.at("config")).v1 == r.config.v1);

  const VerifyReport v = cmd_verify(config(-1.25, -1.25, 2));
  const json vdoc = json::parse(format_verify(v, OutputFormat::json));
  CHECK(vdoc.at("max_abs_diff").get<double>() == v.max_abs_diff);
  CHECK(vdoc.at("pass").get<bool>() == v.pass);
}
