#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "oscseg/error.hpp"
#include "oscseg/grid.hpp"
#include "oscseg/image.hpp"
#include "oscseg/models.hpp"
#include "oscseg/network.hpp"
#include "oscseg/segmentation.hpp"

namespace oscseg::harness {

enum class SegmentMode { otsu_binary, gap_cluster };

std::string_view to_string(SegmentMode mode) noexcept;
SegmentMode parse_segment_mode(std::string_view text);

/// Everything one model's pipeline run needs, fully resolved.
struct RunConfig {
  std::string preset;
  ModelConfig model;
  CouplingSpec coupling;
  SimConfig sim;
  SegmentMode mode = SegmentMode::otsu_binary;
  /// Fixed frequency cut for otsu-binary mode; Otsu picks one when empty.
  std::optional<double> threshold;
  double gap_threshold = 0.025;
  /// gap_threshold is a fraction of the median usable frequency.
  bool relative_gap = false;

  ModelKind kind() const noexcept { return kind_of(model); }
};

/// Ordered key=value settings. A key may carry a model prefix
/// ("bz.coupling") to restrict it to that model.
using Overrides = std::vector<std::pair<std::string, std::string>>;

std::vector<std::string> preset_names();

/// Model fixed by a preset name (neural-default -> neural), if any.
std::optional<ModelKind> preset_model(std::string_view preset);

/// Defaults for `kind` under a named preset; an empty name means
/// "<kind>-default". Throws Error(invalid_config) on unknown names or a
/// preset bound to another model.
RunConfig make_config(ModelKind kind, std::string_view preset = {});

/// Applies every override that targets cfg's model. used[i] is set for each
/// override that applied. Throws Error(invalid_config) on unknown keys or
/// unparsable values.
void apply_overrides(RunConfig& cfg, const Overrides& overrides,
                     std::vector<bool>& used);

/// Throws Error(invalid_config) naming the first override no config used.
void require_all_used(const Overrides& overrides, const std::vector<bool>& used);

/// "key = value" lines; '#' starts a comment, blank lines are skipped.
Overrides parse_config_text(std::string_view text);
Overrides load_config_file(const std::filesystem::path& path);

void validate(const RunConfig& cfg);

/// Exit status for a library error: 2 config, 3 numerical, 4 I/O.
int exit_code(Errc code) noexcept;

// ---------------------------------------------------------------------------
// pipeline

struct PipelineResult {
  SimulationResult sim;
  LabelMap labels;
  /// Binary threshold or absolute gap that produced `labels`.
  double threshold = 0.0;
};

/// Median of the usable frequencies (0 when none).
double base_frequency(const FrequencyMap& map);

/// Absolute gap for cfg (relative gaps scale with base_frequency).
double absolute_gap(const FrequencyMap& map, const RunConfig& cfg);

/// Post-hoc segmentation of an existing frequency map.
LabelMap segment_frequencies(const FrequencyMap& map, const RunConfig& cfg,
                             double* threshold_used = nullptr);

/// map_intensity -> simulate -> segment.
PipelineResult run_pipeline(const GrayImage& image, const RunConfig& cfg);

/// Intensity Otsu baseline.
LabelMap otsu_segment(const GrayImage& image);

/// Labels from a reference image: distinct grey levels ranked ascending, so
/// a {0,255} mask gives {0,1}.
LabelMap labels_from_image(const GrayImage& image);

/// Inverse of labels_from_image for K labels (0 and 255 at the ends).
GrayImage labels_to_image(const LabelMap& labels);

// ---------------------------------------------------------------------------
// commands

struct SegmentRequest {
  RunConfig config;
  std::filesystem::path input;
  std::optional<std::filesystem::path> reference;
  std::filesystem::path out_dir = ".";
};

struct SegmentOutcome {
  PipelineResult result;
  std::optional<SegmentationMetrics> metrics;
};

/// Writes frequencies.csv, labels.csv, labels.pgm and report.json. Inputs are
/// loaded and the simulation finished before anything is written.
SegmentOutcome cmd_segment(const SegmentRequest& req);

struct SweepRequest {
  RunConfig config;
  std::filesystem::path input;
  std::vector<double> couplings;
  std::vector<double> thresholds;
  std::filesystem::path out_dir = ".";
};

struct SweepCell {
  double coupling = 0.0;
  double threshold = 0.0;
  double gap = 0.0;  ///< absolute gap used
  int clusters = 0;
  std::uint64_t map_hash = 0;
  std::string status = "ok";
  std::string mask_file;
};

/// One simulation per coupling, gap-clustered at every threshold. Failed
/// cells keep status = error name and clusters = 0.
std::vector<SweepCell> run_sweep(const GrayImage& image, const RunConfig& cfg,
                                 const std::vector<double>& couplings,
                                 const std::vector<double>& thresholds,
                                 std::vector<FrequencyMap>* maps = nullptr,
                                 std::vector<LabelMap>* masks = nullptr);

/// coupling,threshold,gap,clusters,map_hash,status,mask
std::string sweep_csv(const std::vector<SweepCell>& cells);

/// Writes sweep.csv, one mask PGM per good cell, the per-coupling frequency
/// CSVs and report.json.
std::vector<SweepCell> cmd_sweep(const SweepRequest& req);

struct NoiseStudyRequest {
  std::vector<RunConfig> methods;  ///< oscillator pipelines
  bool include_otsu = true;
  GrayImage image;
  std::optional<LabelMap> truth;
  std::vector<double> variances;
  int trials = 5;
  std::uint64_t noise_seed = 1;
  std::filesystem::path out_dir = ".";
};

struct NoiseRow {
  double variance = 0.0;
  std::string method;
  int trials = 0;
  /// Mean mislabel rate against the method's own noise-free result.
  double error_vs_clean = 0.0;
  /// Mean mislabel rate against the ground truth (NaN without one).
  double error_vs_truth = 0.0;
};

/// Trial t uses noise seed noise_seed + t for every variance and method.
std::vector<NoiseRow> run_noise_study(const NoiseStudyRequest& req);

/// variance,method,trials,error_vs_clean,error_vs_truth
std::string noise_csv(const std::vector<NoiseRow>& rows);

std::vector<NoiseRow> cmd_noise_study(const NoiseStudyRequest& req);

struct CompareRequest {
  std::vector<RunConfig> methods;
  bool include_otsu = true;
  std::vector<std::filesystem::path> images;
  std::vector<std::filesystem::path> references;
  std::filesystem::path out_dir = ".";
};

struct CompareRow {
  std::string image;
  std::string method;
  int clusters = 0;
  std::size_t mislabeled = 0;
  std::size_t pixels = 0;
  double mislabel_rate = 0.0;
};

std::vector<CompareRow> run_compare(const std::vector<GrayImage>& images,
                                    const std::vector<LabelMap>& references,
                                    const std::vector<std::string>& names,
                                    const std::vector<RunConfig>& methods,
                                    bool include_otsu);

/// image,method,clusters,mislabeled,pixels,mislabel_rate
std::string compare_csv(const std::vector<CompareRow>& rows);

std::vector<CompareRow> cmd_compare(const CompareRequest& req);

struct SyntheticRequest {
  std::string kind = "quadrant";  ///< quadrant | two-region
  int side = 16;
  int levels = 64;
  double intensity_a = 0.3;
  double intensity_b = 0.7;
  double noise_variance = 0.0;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir = ".";
};

/// Writes image.pgm and reference.pgm.
void cmd_gen_synthetic(const SyntheticRequest& req);

/// %.17g, the round-trip format used by every CSV.
std::string format_double(double v);

}  // namespace oscseg::harness
