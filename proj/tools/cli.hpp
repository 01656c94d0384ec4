#pragma once

// Command layer behind the `milnebands` executable. Each command returns a
// plain report struct; formatting to CSV/JSON is separate so the reports can
// be checked directly in tests.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "milnebands/milnebands.hpp"

namespace milnebands::cli {

class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

enum class OutputFormat { csv, json };

struct RunConfig {
  double v1 = 0.0;
  double v2 = 0.0;
  int n_cells = 2;
  double mass = kDefaultMass;
  SolverSettings solver;
  int scan_points = 400;
  OutputFormat format = OutputFormat::csv;
  std::string output;

  Potential potential() const { return Potential(v1, v2, n_cells, mass); }
  void validate() const;
};

/// Keys: v1, v2, n_cells (required); mass, rel_tol, abs_tol, tail_phase_tol,
/// scan_points, format, output (optional). Anything else is rejected.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& config);

struct ReportOptions {
  /// Round energies and phases to 4 decimals.
  bool paper = false;
  /// Keep levels outside the reported ground bands (band_index -1).
  bool all_levels = false;
  unsigned threads = 0;
};

struct LevelRow {
  int j = 0;
  double energy = 0.0;
  int band_index = -1;
  double alpha = 0.0;
  double beta = 0.0;
};

/// Ground bands of the distinct depths among (v1, v2), sorted by energy.
std::vector<Band> configuration_bands(const RunConfig& config, unsigned threads = 0);

struct LevelReport {
  RunConfig config;
  std::vector<Band> bands;
  std::vector<LevelRow> levels;
};

LevelReport cmd_levels(const RunConfig& config, const ReportOptions& options = {});

struct BandReport {
  RunConfig config;
  std::vector<Band> bands;
};

BandReport cmd_bands(const RunConfig& config, const ReportOptions& options = {});

struct SweepRow {
  int n_cells = 0;
  int j = 0;
  double energy = 0.0;
  int band_index = -1;
};

struct SweepReport {
  RunConfig config;
  std::vector<int> n_values;
  std::vector<Band> bands;
  std::vector<SweepRow> levels;
};

/// Throws ConfigError for odd or non-positive entries of n_values.
SweepReport cmd_sweep(const RunConfig& config, const std::vector<int>& n_values,
                      const ReportOptions& options = {});

struct WaveOptions {
  int level = 0;
  double x_min = 0.0;
  double x_max = 0.0;
  int samples = 401;
};

struct WaveReport {
  RunConfig config;
  Level level;
  std::vector<WavePoint> points;
};

/// Defaults to the box [-6, N pi + 6] when x_min == x_max.
WaveReport cmd_wavefunction(const RunConfig& config, const WaveOptions& wave);

struct VerifyOptions {
  int oracle_points = 8000;
  double oracle_pad = 12.0;
  double tolerance = 2e-3;
  unsigned threads = 0;
};

struct VerifyRow {
  int j = 0;
  double amplitude_phase = 0.0;
  double finite_difference = 0.0;
  double abs_diff = 0.0;
  double richardson_order = 0.0;
};

struct VerifyReport {
  RunConfig config;
  FdGrid grid;
  double tolerance = 0.0;
  int amplitude_phase_count = 0;
  int finite_difference_count = 0;
  std::vector<VerifyRow> rows;
  double max_abs_diff = 0.0;
  std::vector<std::string> warnings;
  bool pass = false;
};

VerifyReport cmd_verify(const RunConfig& config, const VerifyOptions& options = {});

std::string format_levels(const LevelReport& r, OutputFormat f, bool paper = false);
std::string format_bands(const BandReport& r, OutputFormat f, bool paper = false);
/// CSV: long-form level rows; the band edges go to format_sweep_edges.
std::string format_sweep(const SweepReport& r, OutputFormat f, bool paper = false);
std::string format_sweep_edges(const SweepReport& r, bool paper = false);
std::string format_wavefunction(const WaveReport& r, OutputFormat f);
std::string format_verify(const VerifyReport& r, OutputFormat f);

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kConfigFailure = 1,
  kNumericalFailure = 2,
  kResolutionFailure = 3,
  kVerifyMismatch = 4,
};

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv);

}  // namespace milnebands::cli
