#include <doctest.h>

#include "ewp/frame.hpp"
#include "ewp/threshold.hpp"
#include "testing.hpp"

using namespace ewp;
using namespace ewp::testing;

namespace {

FrameCoeffs random_coeffs(Gen& g, std::size_t h, std::size_t w, std::size_t levels) {
  FrameCoeffs c(h, w, levels);
  for (std::size_t b = 0; b < c.subband_count(); ++b)
    for (auto& v : c.subband(b)) v = g.complex_normal();
  return c;
}

double coeff_l2(const FrameCoeffs& c) { return std::sqrt(squared_norm(c)); }

}  // namespace

TEST_CASE("analysis matches a direct Haar evaluation band by band") {
  Gen g(1);
  for (std::size_t levels : {1u, 2u, 3u}) {
    const std::size_t h = 8 * g.index(1, 3), w = 8 * g.index(1, 3);
    const ComplexImage x = g.image(h, w);
    const FrameCoeffs c = frame_forward(x, levels);
    const auto expect = naive_haar_analysis(x.data(), h, w, levels);
    REQUIRE(c.subband_count() == expect.size());
    for (std::size_t b = 0; b < expect.size(); ++b) {
      CAPTURE(levels);
      CAPTURE(b);
      CHECK(max_abs_diff(c.subband(b), expect[b]) < 1e-13);
    }
  }
}

TEST_CASE("constant image has zero details and a constant approximation") {
  const cplx v(2.5, -1.0);
  const FrameCoeffs c = frame_forward(ComplexImage(16, 16, v), 3);
  for (std::size_t b = 0; b + 1 < c.subband_count(); ++b)
    for (const auto& d : c.subband(b)) CHECK(d == cplx{});
  for (const auto& a : c.approximation()) CHECK(a == v);
}

TEST_CASE("zero coefficients synthesise a zero image") {
  for (const auto held = frame_backward(FrameCoeffs(8, 8, 2)); const auto& v : held.data()) CHECK(v == cplx{});
}

TEST_CASE("property: Parseval, perfect reconstruction and adjointness") {
  Gen g(2);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t levels = g.index(1, 4);
    const std::size_t block = std::size_t{1} << levels;
    const std::size_t h = block * g.index(1, 4), w = block * g.index(1, 4);
    const ComplexImage x = g.image(h, w);
    const FrameCoeffs px = frame_forward(x, levels);
    CHECK(std::abs(coeff_l2(px) - l2(x.data())) <= 1e-12 * l2(x.data()));
    CHECK(max_abs_diff(frame_backward(px).data(), x.data()) <= 1e-12);

    const FrameCoeffs c = random_coeffs(g, h, w, levels);
    cplx lhs{};
    for (std::size_t b = 0; b < c.subband_count(); ++b) lhs += dot(px.subband(b), c.subband(b));
    const cplx rhs = dot(x.data(), frame_backward(c).data());
    CHECK(std::abs(lhs - rhs) <= 1e-12 * l2(x.data()) * coeff_l2(c));
  }
}

TEST_CASE("property: analysis is linear") {
  Gen g(3);
  const ComplexImage a = g.image(16, 8), b = g.image(16, 8);
  const cplx s(-0.4, 2.0);
  ComplexImage mix(16, 8);
  for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = a[i] + s * b[i];
  const FrameCoeffs pa = frame_forward(a, 2), pb = frame_forward(b, 2), pm = frame_forward(mix, 2);
  for (std::size_t band = 0; band < pm.subband_count(); ++band) {
    std::vector<cplx> expect(pa.subband(band).size());
    for (std::size_t i = 0; i < expect.size(); ++i)
      expect[i] = pa.subband(band)[i] + s * pb.subband(band)[i];
    CHECK(max_abs_diff(pm.subband(band), expect) < 1e-13);
  }
}

TEST_CASE("level counts the image cannot support are rejected") {
  CHECK_THROWS_AS(frame_forward(ComplexImage(12, 12), 3), Error);
  CHECK_THROWS_AS(frame_forward(ComplexImage(8, 8), 0), Error);
  CHECK_NOTHROW(frame_forward(ComplexImage(12, 12), 2));
  CHECK_THROWS_AS(frame_backward(FrameCoeffs(12, 12, 3)), Error);
}

TEST_CASE("in-place forms reuse the workspace and give the same result") {
  Gen g(4);
  FrameWorkspace ws;
  FrameCoeffs c(32, 16, 3);
  ComplexImage back(32, 16);
  for (int trial = 0; trial < 3; ++trial) {
    const ComplexImage x = g.image(32, 16);
    frame_forward_into(x, c, ws);
    CHECK(c == frame_forward(x, 3));
    frame_backward_into(c, back, ws);
    CHECK(back == frame_backward(c));
  }
}

TEST_CASE("property: fused shrinkage is bit-identical to analysis then thresholding") {
  Gen g(5);
  FrameWorkspace ws;
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t levels = g.index(1, 3);
    const std::size_t block = std::size_t{1} << levels;
    const std::size_t h = block * g.index(1, 5), w = block * g.index(1, 5);
    const ComplexImage x = g.image(h, w);
    const bool approx = trial % 3 == 0;
    const std::size_t bands = approx ? FrameCoeffs::band_count(levels) : 3 * levels;
    const ThresholdConfig cfg{g.uniform(0.05, 0.8), 1.0, 0.1};
    FrameCoeffs fused(h, w, levels);

    SUBCASE("uniform") {
      FrameCoeffs expect = frame_forward(x, levels);
      soft_threshold_uniform_inplace(expect, cfg, bands);
      frame_forward_shrink_into(x, fused, ws, DetailShrink{{}, cfg.lambda_gamma(), approx});
      CHECK(fused == expect);
    }
    SUBCASE("per pixel") {
      const EdgeWeightMap wmap(h, w, g.weights(h * w));
      FrameCoeffs expect = frame_forward(x, levels);
      soft_threshold_weighted_inplace(expect, wmap, cfg, bands);
      std::vector<double> t(h * w);
      for (std::size_t i = 0; i < t.size(); ++i)
        t[i] = cfg.lambda_gamma() / (wmap[i] + cfg.epsilon);
      frame_forward_shrink_into(x, fused, ws, DetailShrink{t, 0.0, approx});
      CHECK(fused == expect);
    }
  }
}
