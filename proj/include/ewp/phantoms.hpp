#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ewp/core.hpp"

namespace ewp {

/// Modified (high-contrast) Shepp-Logan head phantom, 10 ellipses, rasterised
/// on pixel centres over [-1,1]^2 and clipped to [0,1]. Real-valued.
ComplexImage shepp_logan(std::size_t size);

enum class RegionShape { rectangle, ellipse };

/// An axis-aligned region in pixel units. Rectangles cover rows
/// [center_row - half_height, center_row + half_height] (likewise columns);
/// ellipses cover the pixels whose centres satisfy the ellipse inequality.
struct Region {
  RegionShape shape = RegionShape::rectangle;
  double center_row = 0.0;
  double center_col = 0.0;
  double half_height = 0.0;
  double half_width = 0.0;
  double intensity = 1.0;
};

struct PiecewisePhantom {
  ComplexImage image;
  EdgeWeightMap edges;  // 1 on region boundaries, 0 elsewhere
};

/// Paints `regions` in order over a zero background; later regions cover
/// earlier ones. A pixel is an edge when one of its four periodic neighbours
/// shows a region painted earlier (or the background), i.e. the boundary is
/// drawn on the inside of the upper region.
PiecewisePhantom rasterize_regions(std::size_t size, const std::vector<Region>& regions);

/// `regions` counts the background, so regions - 1 random rectangles and
/// ellipses are drawn, each with its own intensity in (0,1].
PiecewisePhantom piecewise_phantom(std::size_t size, std::size_t regions, std::uint64_t seed);

/// Multiplies by exp(i * max_phase * (row/height + col/width) / 2), a smooth
/// linear phase ramp reaching max_phase at the far corner.
ComplexImage with_phase_ramp(const ComplexImage& image, double max_phase);

}  // namespace ewp
