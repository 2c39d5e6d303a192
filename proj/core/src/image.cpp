#include "oscseg/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "oscseg/error.hpp"

namespace oscseg {

GrayImage::GrayImage(int width, int height, std::vector<double> pixels)
    : dims_{width, height}, pixels_(std::move(pixels)) {
  if (width <= 0 || height <= 0)
    fail(Errc::invalid_size, "image dimensions must be positive");
  if (pixels_.size() != dims_.size())
    fail(Errc::invalid_size, "pixel count " + std::to_string(pixels_.size()) +
                                 " does not match " + std::to_string(width) +
                                 "x" + std::to_string(height));
  const bool in_range = std::all_of(pixels_.begin(), pixels_.end(), [](double v) {
    return std::isfinite(v) && v >= 0.0 && v <= 1.0;
  });
  require(in_range, "image intensities must lie in [0, 1]");
}

GrayImage::GrayImage(int width, int height, double fill)
    : GrayImage(width, height,
                std::vector<double>(
                    width > 0 && height > 0
                        ? static_cast<std::size_t>(width) * height
                        : 0,
                    fill)) {}

GrayImage GrayImage::flipped_horizontal() const {
  return GrayImage(width(), height(),
                   flip_horizontal<double>(pixels_, dims_));
}

}  // namespace oscseg
