#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "oscseg/frequency.hpp"
#include "oscseg/image.hpp"

namespace oscseg {

/// Per-pixel region labels in {0 .. K-1}; 0 is background for binary masks.
struct LabelMap {
  GridDims dims;
  std::vector<int> labels;

  LabelMap() = default;
  explicit LabelMap(GridDims d, int fill = 0) : dims(d), labels(d.size(), fill) {}

  std::size_t size() const noexcept { return labels.size(); }
  int at(int row, int col) const { return labels[dims.index({row, col})]; }
  /// max label + 1 (0 for an empty map).
  int label_count() const noexcept;
};

struct SegmentationMetrics {
  double mislabeled_fraction = 0.0;
  std::size_t mislabeled = 0;
  std::size_t pixel_count = 0;
};

/// Default histogram resolution for Otsu (8-bit source imagery).
inline constexpr std::size_t kOtsuBins = 256;

/// Otsu's threshold: values are binned into `bins` equal-width bins over
/// [min, max] and the internal bin edge maximising the between-class variance
/// w0 * w1 * (mu0 - mu1)^2 is returned; ties go to the lower edge.
/// Throws Error(degenerate) if all values are equal.
double otsu_threshold(std::span<const double> values,
                      std::size_t bins = kOtsuBins);

/// Otsu over the usable (non NonOscillating) nodes of a frequency map.
double otsu_threshold(const FrequencyMap& map, std::size_t bins = kOtsuBins);

/// label 1 where value > threshold, else 0.
LabelMap segment_binary(const GrayImage& image, double threshold);
/// NonOscillating nodes are labelled 0.
LabelMap segment_binary(const FrequencyMap& map, double threshold);

/// Gap clustering: sort the distinct usable frequencies and open a new
/// cluster wherever consecutive values differ by more than gap_threshold.
/// Clusters are numbered by ascending frequency; NonOscillating nodes join
/// cluster 0. Throws Error(degenerate) if no node is usable.
LabelMap cluster_by_gap(const FrequencyMap& map, double gap_threshold);

/// Same rule applied to raw values.
LabelMap cluster_by_gap(std::span<const double> values, GridDims dims,
                        double gap_threshold);

/// Fraction of pixels mislabelled after the best one-to-one pairing of
/// result labels with reference labels. For binary maps this is the error
/// minimised over the two polarities. Symmetric in its arguments.
/// Throws Error(dimension_mismatch).
SegmentationMetrics mislabel_rate(const LabelMap& result,
                                  const LabelMap& reference);

/// 1 - mislabel_rate: share of pixels agreeing under the best pairing.
double region_match_accuracy(const LabelMap& result, const LabelMap& reference);

/// Maximum-weight assignment on a dense (rows x cols) non-negative weight
/// matrix; returns the total weight of the best partial matching.
long long max_weight_matching(std::span<const long long> weights,
                              std::size_t rows, std::size_t cols);

// Serialisation: PGM scales labels onto 0..255, CSV is "row,col,label".
std::string to_pgm(const LabelMap& labels);
void write_label_csv(std::ostream& out, const LabelMap& labels);
std::string to_csv(const LabelMap& labels);

/// Binary mask from a reference image: label 1 where intensity >= 0.5.
LabelMap mask_from_image(const GrayImage& image);

}  // namespace oscseg
