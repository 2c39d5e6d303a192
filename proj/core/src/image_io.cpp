#include "oscseg/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "oscseg/error.hpp"
#include "oscseg/rng.hpp"

namespace oscseg {

namespace {

class PgmCursor {
 public:
  explicit PgmCursor(std::string_view bytes) : bytes_(bytes) {}

  std::size_t pos() const noexcept { return pos_; }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const auto ch = static_cast<unsigned char>(bytes_[pos_]);
      if (std::isspace(ch)) {
        ++pos_;
      } else if (ch == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  /// Next unsigned decimal token, or -1 at end of input.
  long number(Errc on_garbage, const char* what) {
    skip_space_and_comments();
    if (pos_ >= bytes_.size()) return -1;
    long value = 0;
    std::size_t digits = 0;
    while (pos_ < bytes_.size() &&
           std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000'000L) fail(on_garbage, std::string(what) + " too large");
      ++pos_;
      ++digits;
    }
    if (digits == 0) fail(on_garbage, std::string("expected ") + what);
    return value;
  }

  std::string_view rest() const { return bytes_.substr(pos_); }
  void advance(std::size_t n) { pos_ += n; }
  bool at_end() const noexcept { return pos_ >= bytes_.size(); }
  char peek() const { return bytes_[pos_]; }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

GrayImage read_pgm(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5'))
    fail(Errc::malformed_header, "not a P2/P5 PGM file");
  const bool binary = bytes[1] == '5';
  PgmCursor cur(bytes.substr(2));
  if (!cur.at_end() && !std::isspace(static_cast<unsigned char>(cur.peek())) &&
      cur.peek() != '#')
    fail(Errc::malformed_header, "not a P2/P5 PGM file");

  const long width = cur.number(Errc::malformed_header, "width");
  const long height = cur.number(Errc::malformed_header, "height");
  const long maxval = cur.number(Errc::malformed_header, "maxval");
  if (width <= 0 || height <= 0 || maxval < 0)
    fail(Errc::malformed_header, "missing or zero PGM dimensions");
  if (maxval == 0) fail(Errc::malformed_header, "PGM maxval must be positive");
  if (maxval > 255)
    fail(Errc::unsupported_maxval,
         "PGM maxval " + std::to_string(maxval) + " exceeds 255");

  const auto count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  std::vector<double> pixels(count);
  const double scale = 1.0 / static_cast<double>(maxval);
  if (binary) {
    // Exactly one whitespace byte separates maxval from the raster.
    if (cur.at_end()) fail(Errc::truncated_data, "PGM raster missing");
    if (!std::isspace(static_cast<unsigned char>(cur.peek())))
      fail(Errc::malformed_header, "expected whitespace after maxval");
    cur.advance(1);
    const auto raster = cur.rest();
    if (raster.size() < count)
      fail(Errc::truncated_data, "PGM raster has " + std::to_string(raster.size()) +
                                     " of " + std::to_string(count) + " bytes");
    for (std::size_t i = 0; i < count; ++i) {
      const auto v = static_cast<unsigned char>(raster[i]);
      if (v > maxval) fail(Errc::malformed_header, "pixel exceeds maxval");
      pixels[i] = v * scale;
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      const long v = cur.number(Errc::malformed_header, "pixel value");
      if (v < 0)
        fail(Errc::truncated_data, "PGM raster has " + std::to_string(i) +
                                       " of " + std::to_string(count) + " values");
      if (v > maxval) fail(Errc::malformed_header, "pixel exceeds maxval");
      pixels[i] = static_cast<double>(v) * scale;
    }
  }
  return GrayImage(static_cast<int>(width), static_cast<int>(height), std::move(pixels));
}

std::string write_pgm(const GrayImage& image) {
  std::string out = "P5\n" + std::to_string(image.width()) + " " +
                    std::to_string(image.height()) + "\n255\n";
  out.reserve(out.size() + image.size());
  for (double v : image.pixels())
    out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0))));
  return out;
}

GrayImage load_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io, "cannot open " + path.string());
  const std::string bytes{std::istreambuf_iterator<char>(in),
                          std::istreambuf_iterator<char>()};
  return read_pgm(bytes);
}

void save_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::io, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(Errc::io, "write failed for " + path.string());
}

std::vector<double> gaussian_field(std::size_t n, const NoiseSpec& spec) {
  require(std::isfinite(spec.variance) && spec.variance >= 0.0,
          "noise variance must be >= 0");
  std::vector<double> field(n, 0.0);
  if (spec.variance == 0.0) return field;
  Rng rng(spec.seed);
  const double sigma = std::sqrt(spec.variance);
  for (auto& v : field) v = sigma * rng.normal();
  return field;
}

GrayImage add_gaussian_noise(const GrayImage& image, const NoiseSpec& spec) {
  const auto field = gaussian_field(image.size(), spec);
  std::vector<double> px(image.pixels().begin(), image.pixels().end());
  for (std::size_t i = 0; i < px.size(); ++i)
    px[i] = std::clamp(px[i] + field[i], 0.0, 1.0);
  return GrayImage(image.width(), image.height(), std::move(px));
}

SyntheticImage generate_quadrant_image(int side, int levels_per_quadrant,
                                       std::uint64_t seed) {
  if (side <= 0 || side % 2 != 0)
    fail(Errc::invalid_size, "quadrant image side must be even and positive");
  if (levels_per_quadrant <= 0)
    fail(Errc::invalid_size, "levels_per_quadrant must be positive");
  const long area = static_cast<long>(side) * side;
  if (area % (4L * levels_per_quadrant) != 0)
    fail(Errc::invalid_size, "side^2 must be divisible by 4 * levels_per_quadrant");

  const int half = side / 2;
  const auto per_quadrant = static_cast<std::size_t>(half) * half;
  const auto repeats = per_quadrant / static_cast<std::size_t>(levels_per_quadrant);
  const double band_levels = 4.0 * levels_per_quadrant;

  GridDims dims{side, side};
  std::vector<double> px(dims.size());
  LabelMap ref(dims);
  Rng rng(seed);
  for (int q = 0; q < 4; ++q) {
    std::vector<double> values;
    values.reserve(per_quadrant);
    for (int j = 0; j < levels_per_quadrant; ++j) {
      const double v = (q * levels_per_quadrant + j + 0.5) / band_levels;
      values.insert(values.end(), repeats, v);
    }
    for (std::size_t i = values.size(); i > 1; --i)
      std::swap(values[i - 1], values[rng.below(i)]);

    const int row0 = (q / 2) * half;
    const int col0 = (q % 2) * half;
    std::size_t k = 0;
    for (int r = row0; r < row0 + half; ++r) {
      for (int c = col0; c < col0 + half; ++c) {
        px[dims.index({r, c})] = values[k++];
        ref.labels[dims.index({r, c})] = q;
      }
    }
  }
  return {GrayImage(side, side, std::move(px)), std::move(ref)};
}

SyntheticImage generate_two_region_image(int side, double intensity_a,
                                         double intensity_b) {
  if (side < 2) fail(Errc::invalid_size, "two-region image side must be >= 2");
  GridDims dims{side, side};
  std::vector<double> px(dims.size());
  LabelMap ref(dims);
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      const bool right = c >= side / 2;
      px[dims.index({r, c})] = right ? intensity_b : intensity_a;
      ref.labels[dims.index({r, c})] = right;
    }
  }
  return {GrayImage(side, side, std::move(px)), std::move(ref)};
}

}  // namespace oscseg
