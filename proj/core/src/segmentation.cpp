#include "oscseg/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "oscseg/error.hpp"

namespace oscseg {

int LabelMap::label_count() const noexcept {
  if (labels.empty()) return 0;
  return *std::max_element(labels.begin(), labels.end()) + 1;
}

namespace {

__extension__ typedef unsigned __int128 u128;

struct Binned {
  double lo = 0.0;
  double width = 0.0;
  std::vector<std::uint64_t> counts;
};

Binned bin_values(std::span<const double> values, std::size_t bins) {
  require(!values.empty(), "otsu_threshold needs at least one value");
  require(bins >= 2, "otsu_threshold needs at least 2 bins");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  require(std::isfinite(lo) && std::isfinite(hi), "otsu values must be finite");
  if (!(hi > lo)) fail(Errc::degenerate, "otsu_threshold: all values are equal");
  Binned b{lo, (hi - lo) / static_cast<double>(bins),
           std::vector<std::uint64_t>(bins, 0)};
  const double scale = static_cast<double>(bins) / (hi - lo);
  for (double v : values) {
    const auto k = static_cast<std::size_t>((v - lo) * scale);
    ++b.counts[std::min(k, bins - 1)];
  }
  return b;
}

}  // namespace

double otsu_threshold(std::span<const double> values, std::size_t bins) {
  const Binned b = bin_values(values, bins);
  // Bin indices stand in for bin centres: the criterion's argmax is invariant
  // under the affine map index -> lo + (index + 0.5) * width, and integer
  // sums make every comparison exact while the products fit in 128 bits.
  std::uint64_t total = 0;
  std::uint64_t total_sum = 0;
  for (std::size_t k = 0; k < bins; ++k) {
    total += b.counts[k];
    total_sum += b.counts[k] * k;
  }
  const bool exact = static_cast<double>(total) < 4.0e5 && bins <= 4096;

  std::size_t best_edge = 0;
  u128 best_num = 0, best_den = 1;
  long double best_score = -1.0L;
  std::uint64_t n0 = 0, s0 = 0;
  for (std::size_t edge = 1; edge < bins; ++edge) {
    n0 += b.counts[edge - 1];
    s0 += b.counts[edge - 1] * (edge - 1);
    const std::uint64_t n1 = total - n0;
    if (n0 == 0 || n1 == 0) continue;
    const std::uint64_t s1 = total_sum - s0;
    // between-class variance * N^2 = (s0 n1 - s1 n0)^2 / (n0 n1)
    if (exact) {
      const u128 a = static_cast<u128>(s0) * n1;
      const u128 c = static_cast<u128>(s1) * n0;
      const u128 diff = a > c ? a - c : c - a;
      const u128 num = diff * diff;
      const u128 den = static_cast<u128>(n0) * n1;
      if (best_edge == 0 || num * best_den > best_num * den) {
        best_edge = edge;
        best_num = num;
        best_den = den;
      }
    } else {
      const long double diff = static_cast<long double>(s0) * n1 -
                               static_cast<long double>(s1) * n0;
      const long double score =
          diff * diff / (static_cast<long double>(n0) * n1);
      if (best_edge == 0 || score > best_score) {
        best_edge = edge;
        best_score = score;
      }
    }
  }
  return b.lo + static_cast<double>(best_edge) * b.width;
}

double otsu_threshold(const FrequencyMap& map, std::size_t bins) {
  std::vector<double> values;
  values.reserve(map.size());
  for (std::size_t i = 0; i < map.size(); ++i)
    if (map.usable(i)) values.push_back(map.freqs[i]);
  if (values.empty())
    fail(Errc::degenerate, "otsu_threshold: no oscillating nodes");
  return otsu_threshold(values, bins);
}

LabelMap segment_binary(const GrayImage& image, double threshold) {
  require(std::isfinite(threshold), "threshold must be finite");
  LabelMap out(image.dims());
  const auto px = image.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) out.labels[i] = px[i] > threshold;
  return out;
}

LabelMap segment_binary(const FrequencyMap& map, double threshold) {
  require(std::isfinite(threshold), "threshold must be finite");
  LabelMap out(map.dims);
  for (std::size_t i = 0; i < map.size(); ++i)
    out.labels[i] = map.usable(i) && map.freqs[i] > threshold;
  return out;
}

namespace {

LabelMap gap_labels(std::span<const double> values, std::span<const char> use,
                    GridDims dims, double gap_threshold) {
  require(gap_threshold > 0.0, "gap threshold must be > 0");
  std::vector<double> sorted;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (use[i]) sorted.push_back(values[i]);
  if (sorted.empty()) fail(Errc::degenerate, "cluster_by_gap: no usable nodes");
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  std::vector<int> cluster(sorted.size(), 0);
  for (std::size_t k = 1; k < sorted.size(); ++k)
    cluster[k] = cluster[k - 1] + (sorted[k] - sorted[k - 1] > gap_threshold);

  LabelMap out(dims);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!use[i]) continue;
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), values[i]);
    out.labels[i] = cluster[static_cast<std::size_t>(it - sorted.begin())];
  }
  return out;
}

}  // namespace

LabelMap cluster_by_gap(const FrequencyMap& map, double gap_threshold) {
  std::vector<char> use(map.size());
  for (std::size_t i = 0; i < map.size(); ++i) use[i] = map.usable(i);
  return gap_labels(map.freqs, use, map.dims, gap_threshold);
}

LabelMap cluster_by_gap(std::span<const double> values, GridDims dims,
                        double gap_threshold) {
  if (values.size() != dims.size())
    fail(Errc::dimension_mismatch, "values do not match dimensions");
  std::vector<char> use(values.size(), 1);
  return gap_labels(values, use, dims, gap_threshold);
}

long long max_weight_matching(std::span<const long long> weights,
                              std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) return 0;
  // Hungarian algorithm (potentials form) on cost = -weight with
  // n <= m; transpose when needed.
  const bool transpose = rows > cols;
  const std::size_t n = transpose ? cols : rows;
  const std::size_t m = transpose ? rows : cols;
  auto cost = [&](std::size_t i, std::size_t j) -> long long {
    // 1-based i in [1, n], j in [1, m]
    return transpose ? -weights[(j - 1) * cols + (i - 1)]
                     : -weights[(i - 1) * cols + (j - 1)];
  };
  constexpr long long kInf = std::numeric_limits<long long>::max() / 4;
  std::vector<long long> u(n + 1, 0), v(m + 1, 0), minv(m + 1);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  std::vector<char> used(m + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      long long delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const long long cur = cost(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  long long total = 0;
  for (std::size_t j = 1; j <= m; ++j)
    if (p[j] != 0) total -= cost(p[j], j);
  return total;
}

SegmentationMetrics mislabel_rate(const LabelMap& result,
                                  const LabelMap& reference) {
  if (!(result.dims == reference.dims) || result.size() != reference.size())
    fail(Errc::dimension_mismatch, "label maps differ in size");
  SegmentationMetrics m;
  m.pixel_count = result.size();
  if (m.pixel_count == 0) return m;
  const auto ka = static_cast<std::size_t>(result.label_count());
  const auto kb = static_cast<std::size_t>(reference.label_count());
  std::vector<long long> confusion(ka * kb, 0);
  for (std::size_t i = 0; i < result.size(); ++i) {
    require(result.labels[i] >= 0 && reference.labels[i] >= 0,
            "labels must be non-negative");
    ++confusion[static_cast<std::size_t>(result.labels[i]) * kb +
                static_cast<std::size_t>(reference.labels[i])];
  }
  const long long matched = max_weight_matching(confusion, ka, kb);
  m.mislabeled = m.pixel_count - static_cast<std::size_t>(matched);
  m.mislabeled_fraction =
      static_cast<double>(m.mislabeled) / static_cast<double>(m.pixel_count);
  return m;
}

double region_match_accuracy(const LabelMap& result, const LabelMap& reference) {
  return 1.0 - mislabel_rate(result, reference).mislabeled_fraction;
}

std::string to_pgm(const LabelMap& labels) {
  const int top = std::max(labels.label_count() - 1, 1);
  std::string out = "P5\n" + std::to_string(labels.dims.width) + " " +
                    std::to_string(labels.dims.height) + "\n255\n";
  out.reserve(out.size() + labels.size());
  for (int v : labels.labels) {
    const long scaled = std::lround(255.0 * v / top);
    out.push_back(static_cast<char>(static_cast<unsigned char>(scaled)));
  }
  return out;
}

void write_label_csv(std::ostream& out, const LabelMap& labels) {
  out << "row,col,label\n";
  for (int r = 0; r < labels.dims.height; ++r)
    for (int c = 0; c < labels.dims.width; ++c)
      out << r << ',' << c << ',' << labels.at(r, c) << '\n';
}

std::string to_csv(const LabelMap& labels) {
  std::ostringstream os;
  write_label_csv(os, labels);
  return os.str();
}

LabelMap mask_from_image(const GrayImage& image) {
  LabelMap out(image.dims());
  const auto px = image.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) out.labels[i] = px[i] >= 0.5;
  return out;
}

}  // namespace oscseg
