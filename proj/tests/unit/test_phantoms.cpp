#include <doctest.h>

#include "ewp/edges.hpp"
#include "ewp/phantoms.hpp"
#include "testing.hpp"

using namespace ewp;

TEST_CASE("Shepp-Logan") {
  const ComplexImage p = shepp_logan(128);
  CHECK(p(0, 0) == cplx{});
  CHECK(p(127, 127) == cplx{});
  double peak = 0.0;
  for (const auto& v : p.data()) {
    CHECK(v.imag() == 0.0);
    CHECK(v.real() >= 0.0);
    CHECK(v.real() <= 1.0);
    peak = std::max(peak, v.real());
  }
  CHECK(peak == 1.0);
  CHECK(shepp_logan(128) == p);
  CHECK(shepp_logan(64).height() == 64);
  CHECK_THROWS_AS(shepp_logan(8), Error);
}

TEST_CASE("one rectangle has its edges exactly on the perimeter") {
  Region rect;
  rect.center_row = 16;
  rect.center_col = 14;
  rect.half_height = 5;
  rect.half_width = 7;
  rect.intensity = 0.6;
  const PiecewisePhantom p = rasterize_regions(32, {rect});
  for (std::size_t r = 0; r < 32; ++r) {
    for (std::size_t c = 0; c < 32; ++c) {
      const bool inside = r >= 11 && r <= 21 && c >= 7 && c <= 21;
      const bool perimeter = inside && (r == 11 || r == 21 || c == 7 || c == 21);
      CHECK(p.image(r, c) == cplx(inside ? 0.6 : 0.0, 0.0));
      CHECK(p.edges(r, c) == (perimeter ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("later regions cover earlier ones") {
  Region big, small;
  big.center_row = big.center_col = 16;
  big.half_height = big.half_width = 8;
  big.intensity = 0.3;
  small.shape = RegionShape::ellipse;
  small.center_row = small.center_col = 16;
  small.half_height = small.half_width = 3;
  small.intensity = 0.9;
  const PiecewisePhantom p = rasterize_regions(32, {big, small});
  CHECK(p.image(16, 16) == cplx(0.9, 0.0));
  CHECK(p.image(10, 10) == cplx(0.3, 0.0));
  CHECK(p.edges(16, 13) == 1.0);   // inner boundary of the ellipse
  CHECK(p.edges(16, 12) == 0.0);   // big region pixel beside a higher one
  CHECK(p.edges(16, 16) == 0.0);
}

TEST_CASE("piecewise phantom determinism and validity") {
  const PiecewisePhantom a = piecewise_phantom(64, 5, 7), b = piecewise_phantom(64, 5, 7);
  CHECK(a.image == b.image);
  CHECK(a.edges == b.edges);
  CHECK(piecewise_phantom(64, 5, 8).image != a.image);
  for (const auto& v : a.image.data()) {
    CHECK(v.real() >= 0.0);
    CHECK(v.real() <= 1.0);
  }
  CHECK_THROWS_AS(piecewise_phantom(64, 1, 7), Error);
}

TEST_CASE("property: TV on a clean phantom fires exactly beside oracle edges") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const std::size_t n = 64;
    const PiecewisePhantom p = piecewise_phantom(n, 2 + seed % 5, seed);
    const EdgeWeightMap tv = detect_tv(magnitude(p.image));
    auto edge = [&](std::size_t r, std::size_t c) { return p.edges(r % n, c % n) == 1.0; };
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        // a forward difference is nonzero only across a boundary, whose upper side is an edge
        if (tv(r, c) > 0.0) CHECK((edge(r, c) || edge(r, c + 1) || edge(r + 1, c)));
        // every edge pixel sees a jump to a right/down neighbour or from a left/up one
        if (edge(r, c))
          CHECK((tv(r, c) > 0.0 || tv(r, (c + n - 1) % n) > 0.0 || tv((r + n - 1) % n, c) > 0.0));
      }
    }
  }
}

TEST_CASE("phase ramp keeps magnitudes") {
  const ComplexImage p = shepp_logan(32);
  const ComplexImage q = with_phase_ramp(p, 1.5);
  for (std::size_t i = 0; i < p.size(); ++i) CHECK(std::abs(std::abs(q[i]) - std::abs(p[i])) < 1e-15);
  CHECK(with_phase_ramp(p, 0.0) == p);
}
