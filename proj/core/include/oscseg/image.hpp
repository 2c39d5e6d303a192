#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace oscseg {

/// Row/column position on the pixel (and oscillator) grid.
struct GridPos {
  int row = 0;
  int col = 0;

  friend bool operator==(const GridPos&, const GridPos&) = default;
};

struct GridDims {
  int width = 0;
  int height = 0;

  std::size_t size() const noexcept {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  bool contains(GridPos p) const noexcept {
    return p.row >= 0 && p.row < height && p.col >= 0 && p.col < width;
  }
  std::size_t index(GridPos p) const noexcept {
    return static_cast<std::size_t>(p.row) * static_cast<std::size_t>(width) +
           static_cast<std::size_t>(p.col);
  }

  friend bool operator==(const GridDims&, const GridDims&) = default;
};

/// Grayscale image with row-major intensities in [0, 1].
class GrayImage {
 public:
  GrayImage() = default;
  /// Throws Error(invalid_size) for empty dimensions or a size mismatch and
  /// Error(invalid_config) for values outside [0, 1].
  GrayImage(int width, int height, std::vector<double> pixels);
  /// Constant image.
  GrayImage(int width, int height, double fill);

  int width() const noexcept { return dims_.width; }
  int height() const noexcept { return dims_.height; }
  GridDims dims() const noexcept { return dims_; }
  std::size_t size() const noexcept { return pixels_.size(); }

  double at(int row, int col) const { return pixels_[dims_.index({row, col})]; }
  std::span<const double> pixels() const noexcept { return pixels_; }

  GrayImage flipped_horizontal() const;

 private:
  GridDims dims_{};
  std::vector<double> pixels_;
};

/// Mirror a row-major grid left to right.
template <class T>
std::vector<T> flip_horizontal(std::span<const T> values, GridDims dims) {
  std::vector<T> out(values.size());
  for (int r = 0; r < dims.height; ++r)
    for (int c = 0; c < dims.width; ++c)
      out[dims.index({r, c})] = values[dims.index({r, dims.width - 1 - c})];
  return out;
}

}  // namespace oscseg
