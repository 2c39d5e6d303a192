#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "oscseg/image.hpp"
#include "oscseg/models.hpp"

namespace oscseg {

enum class NodeStatus : std::uint8_t { ok, non_oscillating, low_confidence };

std::string_view to_string(NodeStatus status) noexcept;
NodeStatus parse_node_status(std::string_view text);

/// Per-oscillator frequency estimate (AU^-1) read out of the network.
/// NonOscillating nodes carry frequency 0.
struct FrequencyMap {
  GridDims dims;
  std::vector<double> freqs;
  std::vector<NodeStatus> flags;

  FrequencyMap() = default;
  explicit FrequencyMap(GridDims d)
      : dims(d), freqs(d.size(), 0.0), flags(d.size(), NodeStatus::ok) {}

  std::size_t size() const noexcept { return freqs.size(); }
  double at(int row, int col) const { return freqs[dims.index({row, col})]; }

  /// Nodes whose frequency takes part in segmentation (OK or LowConfidence).
  bool usable(std::size_t i) const noexcept {
    return flags[i] != NodeStatus::non_oscillating;
  }
  std::size_t count(NodeStatus status) const noexcept;

  /// max - min over usable nodes, 0 when none are usable.
  double spread() const noexcept;

  /// FNV-1a over dimensions, frequency bit patterns and flags.
  std::uint64_t hash() const noexcept;
};

struct FrequencyEstimate {
  double freq = 0.0;
  NodeStatus flag = NodeStatus::non_oscillating;
};

/// Mean-interval frequency from sorted event times inside
/// [t_start, t_end): freq = (k - 1) / (t_k - t_1).
/// k < 2 gives NonOscillating, k == 2 LowConfidence.
FrequencyEstimate estimate_frequency(std::span<const double> event_times,
                                     double t_start, double t_end);

/// Linearly interpolated time at which a sampled signal crosses `level`
/// upwards between two consecutive samples, if it does.
std::optional<double> upward_crossing(double prev, double next, double level,
                                      double t_prev, double t_next) noexcept;

/// Model-aware crossing detector: neural x through 0, BZ x1 through the
/// configured level (0.5 by default), MEMS Re(z) through 0.
std::optional<double> crossing_detector(const ModelConfig& model,
                                        const NeuralState& prev,
                                        const NeuralState& next, double t_prev,
                                        double t_next);
std::optional<double> crossing_detector(const ModelConfig& model,
                                        const BzState& prev,
                                        const BzState& next, double t_prev,
                                        double t_next);
std::optional<double> crossing_detector(const ModelConfig& model,
                                        const MemsState& prev,
                                        const MemsState& next, double t_prev,
                                        double t_next);

struct FrequencyHistogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::size_t> counts;
  /// All usable frequencies identical (or none usable): one bin is returned.
  bool degenerate = false;

  double bin_width() const noexcept {
    return counts.empty() ? 0.0 : (hi - lo) / static_cast<double>(counts.size());
  }
};

/// Equal-width histogram of usable frequencies over [min, max].
FrequencyHistogram frequency_histogram(const FrequencyMap& map,
                                       std::size_t bins);

/// Number of local maxima (plateaus count once) among non-empty bins.
std::size_t count_peaks(const FrequencyHistogram& hist);

// CSV: first line "width,height", second the values, third the column
// header "row,col,freq,flag", then one row-major line per node.
void write_frequency_csv(std::ostream& out, const FrequencyMap& map);
std::string to_csv(const FrequencyMap& map);
FrequencyMap read_frequency_csv(std::istream& in);

}  // namespace oscseg
