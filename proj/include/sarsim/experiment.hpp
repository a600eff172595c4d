#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sarsim/despeckle.hpp"
#include "sarsim/metrics.hpp"
#include "sarsim/sar_imaging.hpp"
#include "sarsim/sea_surface.hpp"
#include "sarsim/speckle.hpp"
#include "sarsim/wake.hpp"

namespace sarsim {

inline constexpr const char* kVersion = "0.1.0";

enum class Scale { kDesk, kPaper };
Scale scale_by_name(const std::string& name);
std::string scale_name(Scale s);

struct SceneConfig {
  double wind_speed = 5.0;           // U10 [m/s]
  double wind_direction = 0.7853981633974483;  // [rad] from azimuth
  double inverse_wave_age = 0.84;
  double extent = 256.0;             // square scene side [m]
  double facet = 2.0;                // facet spacing [m]
  double time = 0.0;
  // Extra ocean simulated on both azimuth sides and cropped after velocity
  // bunching, so edge pixels receive the intensity displaced in from outside.
  double azimuth_margin = 64.0;  // [m]
  SurfaceSampling sampling;
  bool ship_enabled = true;
  ShipParams ship;
  // Bow position as a fraction of the extent; unset = centre + 0.3 extent along heading.
  std::optional<double> bow_x_fraction;
  std::optional<double> bow_y_fraction;

  GridSpec grid() const;
  /// grid() widened by the azimuth margin (rounded to whole image pixels).
  GridSpec render_grid(double azimuth_resolution) const;
  SpectrumParams spectrum() const;
  ShipPlacement placement() const;
};

struct NoiseConfig {
  std::vector<int> looks{3, 5, 7};
  std::vector<std::uint64_t> seeds{1};
  LookModel model = LookModel::kMomentMatched;
};

struct MethodConfig {
  RegulariserSpec spec;
  // Strength values searched against the clean reference; empty = use spec as is.
  std::vector<double> tune;
};

struct DespeckleConfig {
  std::vector<MethodConfig> methods;
  DespeckleOptions options;
};

enum class ReportFormat { kText, kCsv, kBoth };

struct ExperimentConfig {
  Scale scale = Scale::kDesk;
  SceneConfig scene;
  SarGeometry radar;
  ScatteringOptions scattering;
  NoiseConfig noise;
  DespeckleConfig despeckle;
  std::filesystem::path output_dir = "out";
  ReportFormat report_format = ReportFormat::kBoth;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Defaults for a scale; the paper scale is the 512 m scene.
ExperimentConfig default_config(Scale scale = Scale::kDesk);
std::vector<MethodConfig> default_methods();

/// Parses JSON text on top of the defaults. Unknown keys are rejected.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Fully resolved config as JSON text; parse_config(to_json(c)) reproduces c.
std::string config_to_json(const ExperimentConfig& config);
/// FNV-1a 64 of the resolved JSON, hex.
std::string config_hash(const ExperimentConfig& config);

std::optional<WakeField> compute_wake(const ExperimentConfig& config);

struct SceneResult {
  IntensityImage image;
  RenderStats stats;
};
/// Renders the speckle-free scene for one seed; `wake` may be a cached compute_wake result
/// (it lives on the margin-widened grid).
SceneResult simulate_scene(const ExperimentConfig& config, std::uint64_t seed,
                           const std::optional<WakeField>& wake);

// Results table: one row per method (Noisy first), PSNR and S/MSE per look count.
struct TableCell {
  double psnr_db = 0.0;
  double smse_db = 0.0;
  std::size_t samples = 0;
};
struct ResultsTable {
  std::vector<std::string> rows;
  std::vector<int> looks;
  std::vector<std::vector<TableCell>> cells;  // [row][look]

  void add(const std::string& row, int looks, const ScoreReport& s);
  const TableCell* find(const std::string& row, int looks) const;
};
std::string format_table_text(const ResultsTable& table);
std::string format_table_delimited(const ResultsTable& table, char delimiter = ',');

struct CellRecord {
  std::uint64_t seed = 0;
  int looks = 0;
  std::string method;  // "noisy" or regulariser name
  double strength = 0.0;
  ScoreReport score;
  std::vector<SubbandReport> reports;
};

struct PipelineResult {
  ResultsTable table;
  std::vector<CellRecord> cells;
};

/// Writes raster, PGM and sidecar with provenance.
void write_image_set(const std::filesystem::path& raster_path, const IntensityImage& image,
                     const ExperimentConfig& config, std::uint64_t seed);

std::vector<std::filesystem::path> cmd_simulate(const ExperimentConfig& config,
                                                const std::optional<std::uint64_t>& seed);
std::vector<std::filesystem::path> cmd_speckle(const std::filesystem::path& input,
                                               const std::vector<int>& looks, std::uint64_t seed,
                                               LookModel model, const std::filesystem::path& out);
struct DespeckleCommandResult {
  std::filesystem::path output;
  std::filesystem::path report;
  DespeckleResult result;
};
/// Looks are read from the input's metadata unless given.
DespeckleCommandResult cmd_despeckle(const std::filesystem::path& input, const RegulariserSpec& reg,
                                     const DespeckleOptions& options, std::optional<int> looks,
                                     LookModel model, const std::filesystem::path& out);
ResultsTable cmd_evaluate(const std::filesystem::path& reference,
                          const std::vector<std::filesystem::path>& estimates,
                          const std::filesystem::path& out, ReportFormat format);
PipelineResult cmd_pipeline(const ExperimentConfig& config);

/// Row label for an image from its metadata: "Noisy", "L1", "TV", "Cauchy" or "Reference".
std::string method_label(const IntensityImage& image);

}  // namespace sarsim
