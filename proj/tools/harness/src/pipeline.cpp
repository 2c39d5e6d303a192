#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "oscseg/harness.hpp"

namespace oscseg::harness {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double base_frequency(const FrequencyMap& map) {
  std::vector<double> usable;
  for (std::size_t i = 0; i < map.size(); ++i)
    if (map.usable(i)) usable.push_back(map.freqs[i]);
  if (usable.empty()) return 0.0;
  const auto mid = usable.begin() + static_cast<std::ptrdiff_t>(usable.size() / 2);
  std::nth_element(usable.begin(), mid, usable.end());
  if (usable.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(usable.begin(), mid);
  return 0.5 * (lower + upper);
}

double absolute_gap(const FrequencyMap& map, const RunConfig& cfg) {
  if (!cfg.relative_gap) return cfg.gap_threshold;
  const double base = base_frequency(map);
  if (!(base > 0.0)) fail(Errc::degenerate, "no oscillating nodes to scale the gap by");
  return cfg.gap_threshold * base;
}

LabelMap segment_frequencies(const FrequencyMap& map, const RunConfig& cfg,
                             double* threshold_used) {
  double used = 0.0;
  LabelMap labels;
  if (cfg.mode == SegmentMode::gap_cluster) {
    used = absolute_gap(map, cfg);
    labels = cluster_by_gap(map, used);
  } else {
    used = cfg.threshold ? *cfg.threshold : otsu_threshold(map);
    labels = segment_binary(map, used);
  }
  if (threshold_used) *threshold_used = used;
  return labels;
}

PipelineResult run_pipeline(const GrayImage& image, const RunConfig& cfg) {
  validate(cfg);
  PipelineResult out;
  out.sim = simulate(image, cfg.model, cfg.coupling, cfg.sim);
  out.labels = segment_frequencies(out.sim.frequencies, cfg, &out.threshold);
  return out;
}

LabelMap otsu_segment(const GrayImage& image) {
  return segment_binary(image, otsu_threshold(image.pixels()));
}

LabelMap labels_from_image(const GrayImage& image) {
  std::map<double, int> rank;
  for (double v : image.pixels()) rank.emplace(v, 0);
  int next = 0;
  for (auto& [value, r] : rank) r = next++;
  LabelMap out(image.dims());
  const auto px = image.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) out.labels[i] = rank.at(px[i]);
  return out;
}

GrayImage labels_to_image(const LabelMap& labels) {
  const int top = std::max(labels.label_count() - 1, 1);
  std::vector<double> px(labels.size());
  for (std::size_t i = 0; i < px.size(); ++i)
    px[i] = std::round(255.0 * labels.labels[i] / top) / 255.0;
  return GrayImage(labels.dims.width, labels.dims.height, std::move(px));
}

}  // namespace oscseg::harness
