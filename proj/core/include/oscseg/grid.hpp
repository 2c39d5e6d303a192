#pragma once

#include <complex>
#include <span>
#include <string_view>
#include <vector>

#include "oscseg/image.hpp"
#include "oscseg/models.hpp"

namespace oscseg {

/// How neighbourhoods are completed at the image border.
enum class Boundary {
  /// Out-of-grid neighbours are dropped: a corner has 3 neighbours at r = 1.
  truncate,
  /// Out-of-grid neighbours are replaced by their mirror image across the
  /// border (index -d -> d - 1), so every node sums (2r+1)^2 - 1 outputs.
  mirror,
};

std::string_view to_string(Boundary boundary) noexcept;
Boundary parse_boundary(std::string_view name);

/// Moore-neighbourhood coupling: S = c * sum of neighbour outputs within
/// Chebyshev radius r. The sum is not normalised by the neighbour count.
struct CouplingSpec {
  int radius = 1;
  double coefficient = 0.0;
  bool include_self = false;
  Boundary boundary = Boundary::truncate;
};

void validate(const CouplingSpec& spec);

/// Positions within Chebyshev distance spec.radius of pos, in row-major
/// order. With Boundary::mirror, out-of-grid positions are reflected back
/// inside and may repeat.
std::vector<GridPos> neighborhood(GridPos pos, GridDims dims,
                                  const CouplingSpec& spec);

/// c times the sum of outputs over neighborhood(node).
double coupling_term(GridPos node, std::span<const double> outputs,
                     GridDims dims, const CouplingSpec& spec);
std::complex<double> coupling_term(GridPos node,
                                   std::span<const std::complex<double>> outputs,
                                   GridDims dims, const CouplingSpec& spec);

/// Neighbourhood sums for every node at once (without the factor c).
///
/// Columns are accumulated as centre + sum over d of (left_d + right_d) and
/// rows likewise, so the result is bitwise invariant under horizontal and
/// vertical mirroring of the input.
/// scratch must hold 2 * dims.size() values.
void neighbor_sums(std::span<const double> outputs, GridDims dims,
                   const CouplingSpec& spec, std::span<double> sums,
                   std::span<double> scratch);

/// Affine map of each intensity onto the model's control range (I, tau or
/// omega).
std::vector<double> map_intensity(const GrayImage& image,
                                  const ModelConfig& model);

}  // namespace oscseg
