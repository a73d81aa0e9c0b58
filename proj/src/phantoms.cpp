#include "ewp/phantoms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "ewp/masks.hpp"

namespace ewp {

namespace {

struct Ellipse {
  double intensity, semi_x, semi_y, x0, y0, phi_deg;
};

// Toft's modified Shepp-Logan parameters.
constexpr std::array<Ellipse, 10> kSheppLogan{{
    {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
    {-0.8, 0.6624, 0.874, 0.0, -0.0184, 0.0},
    {-0.2, 0.11, 0.31, 0.22, 0.0, -18.0},
    {-0.2, 0.16, 0.41, -0.22, 0.0, 18.0},
    {0.1, 0.21, 0.25, 0.0, 0.35, 0.0},
    {0.1, 0.046, 0.046, 0.0, 0.1, 0.0},
    {0.1, 0.046, 0.046, 0.0, -0.1, 0.0},
    {0.1, 0.046, 0.023, -0.08, -0.605, 0.0},
    {0.1, 0.023, 0.023, 0.0, -0.606, 0.0},
    {0.1, 0.023, 0.046, 0.06, -0.605, 0.0},
}};

bool covers(const Region& g, double row, double col) {
  const double dr = row - g.center_row;
  const double dc = col - g.center_col;
  if (g.shape == RegionShape::rectangle) {
    return std::abs(dr) <= g.half_height && std::abs(dc) <= g.half_width;
  }
  const double u = dr / g.half_height;
  const double v = dc / g.half_width;
  return u * u + v * v <= 1.0;
}

}  // namespace

ComplexImage shepp_logan(std::size_t size) {
  if (size < 16) throw Error(ErrorCode::InvalidArgument, "phantom size must be >= 16");
  const auto n = static_cast<double>(size);
  ComplexImage out(size, size);
  for (std::size_t r = 0; r < size; ++r) {
    const double y = 1.0 - (2.0 * static_cast<double>(r) + 1.0) / n;
    for (std::size_t c = 0; c < size; ++c) {
      const double x = (2.0 * static_cast<double>(c) + 1.0) / n - 1.0;
      double value = 0.0;
      for (const auto& e : kSheppLogan) {
        const double phi = e.phi_deg * std::numbers::pi / 180.0;
        const double dx = x - e.x0;
        const double dy = y - e.y0;
        const double u = (dx * std::cos(phi) + dy * std::sin(phi)) / e.semi_x;
        const double v = (-dx * std::sin(phi) + dy * std::cos(phi)) / e.semi_y;
        if (u * u + v * v <= 1.0) value += e.intensity;
      }
      out(r, c) = std::clamp(value, 0.0, 1.0);
    }
  }
  return out;
}

PiecewisePhantom rasterize_regions(std::size_t size, const std::vector<Region>& regions) {
  if (size == 0) throw Error(ErrorCode::InvalidArgument, "phantom size must be positive");
  std::vector<std::size_t> label(size * size, 0);
  for (std::size_t k = 0; k < regions.size(); ++k) {
    const auto& g = regions[k];
    if (!(g.half_height > 0.0 && g.half_width > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "region extents must be positive");
    }
    for (std::size_t r = 0; r < size; ++r) {
      for (std::size_t c = 0; c < size; ++c) {
        if (covers(g, static_cast<double>(r), static_cast<double>(c))) label[r * size + c] = k + 1;
      }
    }
  }

  ComplexImage image(size, size);
  std::vector<double> edges(size * size, 0.0);
  for (std::size_t r = 0; r < size; ++r) {
    for (std::size_t c = 0; c < size; ++c) {
      const std::size_t l = label[r * size + c];
      if (l == 0) continue;
      image(r, c) = regions[l - 1].intensity;
      const std::size_t up = (r + size - 1) % size, down = (r + 1) % size;
      const std::size_t left = (c + size - 1) % size, right = (c + 1) % size;
      if (label[up * size + c] < l || label[down * size + c] < l ||
          label[r * size + left] < l || label[r * size + right] < l) {
        edges[r * size + c] = 1.0;
      }
    }
  }
  return {std::move(image), EdgeWeightMap(size, size, std::move(edges))};
}

PiecewisePhantom piecewise_phantom(std::size_t size, std::size_t regions, std::uint64_t seed) {
  if (size < 16) throw Error(ErrorCode::InvalidArgument, "phantom size must be >= 16");
  if (regions < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 regions");

  const std::size_t shapes = regions - 1;
  Rng rng(seed);

  // Evenly spaced levels in (0,1], shuffled, keep every region distinct.
  std::vector<std::size_t> order(shapes);
  for (std::size_t k = 0; k < shapes; ++k) order[k] = k;
  order = rng.sample(std::move(order), shapes);

  const auto n = static_cast<double>(size);
  std::vector<Region> list;
  list.reserve(shapes);
  for (std::size_t k = 0; k < shapes; ++k) {
    Region g;
    g.shape = rng.below(2) == 0 ? RegionShape::rectangle : RegionShape::ellipse;
    g.half_height = std::floor(n * (0.06 + 0.16 * rng.uniform01()));
    g.half_width = std::floor(n * (0.06 + 0.16 * rng.uniform01()));
    // Keep every region clear of the border so nothing wraps.
    const double margin_r = g.half_height + 2.0;
    const double margin_c = g.half_width + 2.0;
    g.center_row = std::floor(margin_r + (n - 1.0 - 2.0 * margin_r) * rng.uniform01());
    g.center_col = std::floor(margin_c + (n - 1.0 - 2.0 * margin_c) * rng.uniform01());
    g.intensity = 0.25 + 0.75 * static_cast<double>(order[k] + 1) / static_cast<double>(shapes);
    list.push_back(g);
  }
  return rasterize_regions(size, list);
}

ComplexImage with_phase_ramp(const ComplexImage& image, double max_phase) {
  ComplexImage out = image;
  const auto h = static_cast<double>(image.height());
  const auto w = static_cast<double>(image.width());
  for (std::size_t r = 0; r < image.height(); ++r) {
    for (std::size_t c = 0; c < image.width(); ++c) {
      const double phase =
          0.5 * max_phase * (static_cast<double>(r) / h + static_cast<double>(c) / w);
      out(r, c) *= std::polar(1.0, phase);
    }
  }
  return out;
}

}  // namespace ewp
