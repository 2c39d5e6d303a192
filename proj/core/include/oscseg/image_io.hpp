#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "oscseg/image.hpp"
#include "oscseg/segmentation.hpp"

namespace oscseg {

/// Parses P2 (ASCII) or P5 (binary) PGM with maxval <= 255.
/// Errors: malformed_header, truncated_data, unsupported_maxval.
GrayImage read_pgm(std::string_view bytes);
/// Emits P5, maxval 255, each pixel round(v * 255).
std::string write_pgm(const GrayImage& image);

GrayImage load_pgm(const std::filesystem::path& path);
void save_file(const std::filesystem::path& path, std::string_view bytes);

struct NoiseSpec {
  double variance = 0.0;
  std::uint64_t seed = 0;
};

/// Adds i.i.d. N(0, variance) to every pixel (Box-Muller on mt19937_64, see
/// Rng) and clamps the result to [0, 1].
GrayImage add_gaussian_noise(const GrayImage& image, const NoiseSpec& spec);

/// Unclamped perturbation field that add_gaussian_noise would add.
std::vector<double> gaussian_field(std::size_t n, const NoiseSpec& spec);

struct SyntheticImage {
  GrayImage image;
  LabelMap reference;
};

/// side x side image split into four equal squares (0 top-left, 1 top-right,
/// 2 bottom-left, 3 bottom-right). Quadrant k holds `levels_per_quadrant`
/// evenly spaced intensities from the band [k/4, (k+1)/4), each repeated
/// equally often and shuffled with `seed`, so the global histogram is uniform
/// while quadrant means differ. Throws Error(invalid_size) unless side is even
/// and side^2 is divisible by 4 * levels_per_quadrant.
SyntheticImage generate_quadrant_image(int side, int levels_per_quadrant,
                                       std::uint64_t seed = 0);

/// Left half intensity_a (label 0), right half intensity_b (label 1).
SyntheticImage generate_two_region_image(int side, double intensity_a,
                                         double intensity_b);

}  // namespace oscseg
