#include "oscseg/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "oscseg/error.hpp"

namespace oscseg {

std::string_view to_string(Boundary boundary) noexcept {
  return boundary == Boundary::mirror ? "mirror" : "truncate";
}

Boundary parse_boundary(std::string_view name) {
  if (name == "truncate") return Boundary::truncate;
  if (name == "mirror") return Boundary::mirror;
  fail(Errc::invalid_config,
       "unknown boundary '" + std::string(name) + "' (expected truncate or mirror)");
}

void validate(const CouplingSpec& spec) {
  require(spec.radius >= 1, "coupling radius must be >= 1");
  require(std::isfinite(spec.coefficient) && spec.coefficient >= 0.0,
          "coupling coefficient must be finite and >= 0");
}

namespace {

// Symmetric reflection into [0, n): -1 -> 0, -2 -> 1, n -> n - 1, ...
inline int reflect(int i, int n) {
  const int period = 2 * n;
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - 1 - i;
}

// Output at (row, col) as seen from inside the grid: 0 when the position is
// outside and the boundary truncates, the mirrored value otherwise.
inline double sample(std::span<const double> o, GridDims dims, Boundary b,
                     int row, int col) {
  const bool inside = row >= 0 && row < dims.height && col >= 0 && col < dims.width;
  if (!inside) {
    if (b == Boundary::truncate) return 0.0;
    row = reflect(row, dims.height);
    col = reflect(col, dims.width);
  }
  return o[static_cast<std::size_t>(row) * dims.width + col];
}

// Sum of the 2r horizontal neighbours of (row, col), excluding the centre,
// accumulated as (left_d + right_d) pairs for d = 1..r.
inline double row_side_sum(std::span<const double> o, GridDims dims,
                           const CouplingSpec& spec, int row, int col) {
  double side = 0.0;
  for (int d = 1; d <= spec.radius; ++d)
    side += sample(o, dims, spec.boundary, row, col - d) +
            sample(o, dims, spec.boundary, row, col + d);
  return side;
}

inline double row_full_sum(std::span<const double> o, GridDims dims,
                           const CouplingSpec& spec, int row, int col) {
  return sample(o, dims, spec.boundary, row, col) +
         row_side_sum(o, dims, spec, row, col);
}

// Rows outside the grid contribute nothing under truncation.
inline bool row_exists(GridDims dims, const CouplingSpec& spec, int row) {
  return spec.boundary == Boundary::mirror || (row >= 0 && row < dims.height);
}

inline double node_sum(std::span<const double> o, GridDims dims,
                       const CouplingSpec& spec, int row, int col) {
  double total = spec.include_self ? row_full_sum(o, dims, spec, row, col)
                                   : row_side_sum(o, dims, spec, row, col);
  for (int d = 1; d <= spec.radius; ++d) {
    const double up = row_exists(dims, spec, row - d)
                          ? row_full_sum(o, dims, spec, row - d, col)
                          : 0.0;
    const double down = row_exists(dims, spec, row + d)
                            ? row_full_sum(o, dims, spec, row + d, col)
                            : 0.0;
    total += up + down;
  }
  return total;
}

}  // namespace

std::vector<GridPos> neighborhood(GridPos pos, GridDims dims,
                                  const CouplingSpec& spec) {
  std::vector<GridPos> out;
  const int r = spec.radius;
  for (int row = pos.row - r; row <= pos.row + r; ++row) {
    for (int col = pos.col - r; col <= pos.col + r; ++col) {
      if (!spec.include_self && row == pos.row && col == pos.col) continue;
      if (dims.contains({row, col})) {
        out.push_back({row, col});
      } else if (spec.boundary == Boundary::mirror) {
        out.push_back({reflect(row, dims.height), reflect(col, dims.width)});
      }
    }
  }
  return out;
}

double coupling_term(GridPos node, std::span<const double> outputs,
                     GridDims dims, const CouplingSpec& spec) {
  if (outputs.size() != dims.size())
    fail(Errc::dimension_mismatch, "output grid does not match dimensions");
  return spec.coefficient * node_sum(outputs, dims, spec, node.row, node.col);
}

std::complex<double> coupling_term(
    GridPos node, std::span<const std::complex<double>> outputs, GridDims dims,
    const CouplingSpec& spec) {
  if (outputs.size() != dims.size())
    fail(Errc::dimension_mismatch, "output grid does not match dimensions");
  std::vector<double> re(outputs.size()), im(outputs.size());
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    re[i] = outputs[i].real();
    im[i] = outputs[i].imag();
  }
  return {coupling_term(node, re, dims, spec),
          coupling_term(node, im, dims, spec)};
}

void neighbor_sums(std::span<const double> o, GridDims dims,
                   const CouplingSpec& spec, std::span<double> sums,
                   std::span<double> scratch) {
  const std::size_t n = dims.size();
  if (o.size() != n || sums.size() != n || scratch.size() < 2 * n)
    fail(Errc::dimension_mismatch, "neighbor_sums buffers do not match grid");
  // Same association order as node_sum, with the per-row partial sums cached.
  std::span<double> side = scratch.subspan(0, n);
  std::span<double> full = scratch.subspan(n, n);
  for (int row = 0; row < dims.height; ++row) {
    for (int col = 0; col < dims.width; ++col) {
      const std::size_t i = dims.index({row, col});
      side[i] = row_side_sum(o, dims, spec, row, col);
      full[i] = o[i] + side[i];
    }
  }
  auto full_at = [&](int row, int col) {
    if (row >= 0 && row < dims.height) return full[dims.index({row, col})];
    if (spec.boundary == Boundary::truncate) return 0.0;
    return full[dims.index({reflect(row, dims.height), col})];
  };
  for (int row = 0; row < dims.height; ++row) {
    for (int col = 0; col < dims.width; ++col) {
      const std::size_t i = dims.index({row, col});
      double total = spec.include_self ? full[i] : side[i];
      for (int d = 1; d <= spec.radius; ++d)
        total += full_at(row - d, col) + full_at(row + d, col);
      sums[i] = total;
    }
  }
}

std::vector<double> map_intensity(const GrayImage& image,
                                  const ModelConfig& model) {
  const auto [lo, hi] = control_range(model);
  std::vector<double> out(image.size());
  const auto px = image.pixels();
  std::transform(px.begin(), px.end(), out.begin(),
                 [lo = lo, hi = hi](double v) { return lo + (hi - lo) * v; });
  return out;
}

}  // namespace oscseg
