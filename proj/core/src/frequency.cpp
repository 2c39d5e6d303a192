#include "oscseg/frequency.hpp"

#include <algorithm>
#include <bit>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "oscseg/error.hpp"

namespace oscseg {

std::string_view to_string(NodeStatus status) noexcept {
  switch (status) {
    case NodeStatus::ok: return "OK";
    case NodeStatus::non_oscillating: return "NonOscillating";
    case NodeStatus::low_confidence: return "LowConfidence";
  }
  return "?";
}

NodeStatus parse_node_status(std::string_view text) {
  if (text == "OK") return NodeStatus::ok;
  if (text == "NonOscillating") return NodeStatus::non_oscillating;
  if (text == "LowConfidence") return NodeStatus::low_confidence;
  fail(Errc::malformed_header, "unknown node flag '" + std::string(text) + "'");
}

std::size_t FrequencyMap::count(NodeStatus status) const noexcept {
  return static_cast<std::size_t>(std::count(flags.begin(), flags.end(), status));
}

double FrequencyMap::spread() const noexcept {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    if (!usable(i)) continue;
    lo = std::min(lo, freqs[i]);
    hi = std::max(hi, freqs[i]);
  }
  return hi >= lo ? hi - lo : 0.0;
}

std::uint64_t FrequencyMap::hash() const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t word) {
    for (int b = 0; b < 8; ++b) {
      h ^= (word >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  mix(static_cast<std::uint64_t>(dims.width));
  mix(static_cast<std::uint64_t>(dims.height));
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    mix(std::bit_cast<std::uint64_t>(freqs[i]));
    mix(static_cast<std::uint64_t>(flags[i]));
  }
  return h;
}

FrequencyEstimate estimate_frequency(std::span<const double> event_times,
                                     double t_start, double t_end) {
  const auto first = std::lower_bound(event_times.begin(), event_times.end(), t_start);
  const auto last = std::lower_bound(first, event_times.end(), t_end);
  const auto k = static_cast<std::size_t>(last - first);
  if (k < 2) return {0.0, NodeStatus::non_oscillating};
  const double span = *(last - 1) - *first;
  if (!(span > 0.0)) return {0.0, NodeStatus::non_oscillating};
  return {static_cast<double>(k - 1) / span,
          k == 2 ? NodeStatus::low_confidence : NodeStatus::ok};
}

std::optional<double> upward_crossing(double prev, double next, double level,
                                      double t_prev, double t_next) noexcept {
  if (!(prev < level && next >= level)) return std::nullopt;
  return t_prev + (level - prev) / (next - prev) * (t_next - t_prev);
}

std::optional<double> crossing_detector(const ModelConfig& model,
                                        const NeuralState& prev,
                                        const NeuralState& next, double t_prev,
                                        double t_next) {
  return upward_crossing(prev.x, next.x, event_level(model), t_prev, t_next);
}

std::optional<double> crossing_detector(const ModelConfig& model,
                                        const BzState& prev,
                                        const BzState& next, double t_prev,
                                        double t_next) {
  return upward_crossing(prev.x1, next.x1, event_level(model), t_prev, t_next);
}

std::optional<double> crossing_detector(const ModelConfig& model,
                                        const MemsState& prev,
                                        const MemsState& next, double t_prev,
                                        double t_next) {
  return upward_crossing(prev.z_re, next.z_re, event_level(model), t_prev,
                         t_next);
}

FrequencyHistogram frequency_histogram(const FrequencyMap& map,
                                       std::size_t bins) {
  require(bins >= 2, "histogram needs at least 2 bins");
  FrequencyHistogram hist;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  std::size_t n = 0;
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (!map.usable(i)) continue;
    lo = std::min(lo, map.freqs[i]);
    hi = std::max(hi, map.freqs[i]);
    ++n;
  }
  if (n == 0 || !(hi > lo)) {
    hist.lo = n ? lo : 0.0;
    hist.hi = n ? hi : 0.0;
    hist.counts = {n};
    hist.degenerate = true;
    return hist;
  }
  hist.lo = lo;
  hist.hi = hi;
  hist.counts.assign(bins, 0);
  const double scale = static_cast<double>(bins) / (hi - lo);
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (!map.usable(i)) continue;
    auto b = static_cast<std::size_t>((map.freqs[i] - lo) * scale);
    ++hist.counts[std::min(b, bins - 1)];
  }
  return hist;
}

std::size_t count_peaks(const FrequencyHistogram& hist) {
  const auto& c = hist.counts;
  std::size_t peaks = 0;
  std::size_t i = 0;
  while (i < c.size()) {
    if (c[i] == 0) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < c.size() && c[j + 1] == c[i]) ++j;
    const bool left_lower = i == 0 || c[i - 1] < c[i];
    const bool right_lower = j + 1 == c.size() || c[j + 1] < c[i];
    if (left_lower && right_lower) ++peaks;
    i = j + 1;
  }
  return peaks;
}

void write_frequency_csv(std::ostream& out, const FrequencyMap& map) {
  out << "width,height\n" << map.dims.width << ',' << map.dims.height << '\n';
  out << "row,col,freq,flag\n";
  char buf[64];
  for (int r = 0; r < map.dims.height; ++r) {
    for (int c = 0; c < map.dims.width; ++c) {
      const std::size_t i = map.dims.index({r, c});
      std::snprintf(buf, sizeof buf, "%.17g", map.freqs[i]);
      out << r << ',' << c << ',' << buf << ',' << to_string(map.flags[i]) << '\n';
    }
  }
}

std::string to_csv(const FrequencyMap& map) {
  std::ostringstream os;
  write_frequency_csv(os, map);
  return os.str();
}

FrequencyMap read_frequency_csv(std::istream& in) {
  std::string line;
  auto next_line = [&]() {
    if (!std::getline(in, line))
      fail(Errc::truncated_data, "frequency CSV ended early");
    if (!line.empty() && line.back() == '\r') line.pop_back();
  };
  next_line();
  if (line != "width,height")
    fail(Errc::malformed_header, "expected 'width,height' header");
  next_line();
  GridDims dims;
  if (std::sscanf(line.c_str(), "%d,%d", &dims.width, &dims.height) != 2 ||
      dims.width <= 0 || dims.height <= 0)
    fail(Errc::malformed_header, "bad dimension line '" + line + "'");
  next_line();
  if (line != "row,col,freq,flag")
    fail(Errc::malformed_header, "expected 'row,col,freq,flag' header");
  FrequencyMap map(dims);
  for (std::size_t k = 0; k < dims.size(); ++k) {
    next_line();
    int r = 0, c = 0;
    double f = 0.0;
    char flag[32] = {};
    if (std::sscanf(line.c_str(), "%d,%d,%lf,%31s", &r, &c, &f, flag) != 4 ||
        !dims.contains({r, c}))
      fail(Errc::malformed_header, "bad frequency line '" + line + "'");
    const std::size_t i = dims.index({r, c});
    map.freqs[i] = f;
    map.flags[i] = parse_node_status(flag);
  }
  return map;
}

}  // namespace oscseg
