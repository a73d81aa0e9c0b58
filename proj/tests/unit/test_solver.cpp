#include <doctest.h>

#include "ewp/edges.hpp"
#include "ewp/fourier.hpp"
#include "ewp/frame.hpp"
#include "ewp/harness.hpp"
#include "ewp/masks.hpp"
#include "ewp/metrics.hpp"
#include "ewp/phantoms.hpp"
#include "ewp/solver.hpp"
#include "testing.hpp"

using namespace ewp;
using namespace ewp::testing;

namespace {

double max_diff(const ComplexImage& a, const ComplexImage& b) {
  return max_abs_diff(a.data(), b.data());
}

SolverConfig config(std::size_t iters, double lambda) {
  SolverConfig cfg;
  cfg.iterations = iters;
  cfg.threshold.lambda = lambda;
  cfg.threshold.gamma = 1.0;
  cfg.track_objective = false;
  return cfg;
}

}  // namespace

TEST_CASE("zero_filled") {
  Gen g(1);
  const ComplexImage x = g.image(16, 16);
  const SamplingMask m = random2d_mask(16, 16, 0.4, 0.1, 2);
  CHECK(max_diff(zero_filled(fft2_centered(x), SamplingMask::full(16, 16)), x) < 1e-12);
  for (const auto held = zero_filled(KSpaceGrid(16, 16), m); const auto& v : held.data()) CHECK(v == cplx{});
  const KSpaceGrid y = g.kspace(16, 16);
  CHECK(zero_filled(apply_mask(y, m), m) == zero_filled(y, m));
}

TEST_CASE("full sampling with lambda 0 recovers the image in one iteration") {
  const ComplexImage ref = shepp_logan(128);
  const SamplingMask full = SamplingMask::full(128, 128);
  const ReconResult r = pfista_reconstruct(fft2_centered(ref), full, config(1, 0.0), ref);
  REQUIRE(r.iterate_rlne.size() == 1);
  CHECK(r.iterate_rlne[0] < 1e-12);
  CHECK(rlne(ref, r.image) < 1e-12);
}

TEST_CASE("lambda 0: the first iterate is the data-consistency step of the zero-filled image") {
  Gen g(2);
  const ComplexImage ref = g.image(32, 32);
  const SamplingMask m = cartesian_mask(32, 32, 3.0, 0.1, 4);
  const KSpaceGrid y = apply_mask(fft2_centered(ref), m);
  const ReconResult r = pfista_reconstruct(y, m, config(1, 0.0));
  const ComplexImage expect = dc_gradient_step(zero_filled(y, m), y, m, DcConfig{1.0});
  CHECK(max_diff(r.image, expect) < 1e-12);
}

TEST_CASE("constant weight w0 matches the uniform run at lambda*gamma/(w0+eps) on every iterate") {
  const ComplexImage ref = shepp_logan(128);
  const SamplingMask m = cartesian_mask(128, 128, 4.0, 0.04, 1);
  const KSpaceGrid y = apply_mask(fft2_centered(ref), m);
  const double lg = 2e-3, w0 = 0.5, eps = 0.1;

  SolverConfig weighted = config(20, lg);
  weighted.threshold.epsilon = eps;
  weighted.edge_mode = EdgeMode::oracle;
  weighted.keep_iterates = true;
  SolverConfig uniform = config(20, lg / (w0 + eps));
  uniform.keep_iterates = true;

  const ReconResult a = pfista_reconstruct(y, m, weighted, std::nullopt, EdgeWeightMap(128, 128, w0));
  const ReconResult b = pfista_reconstruct(y, m, uniform);
  REQUIRE(a.iterates.size() == 20);
  REQUIRE(b.iterates.size() == 20);
  for (std::size_t k = 0; k < 20; ++k) CHECK(max_diff(a.iterates[k], b.iterates[k]) <= 1e-12);
}

TEST_CASE("reconstruction is deterministic and reports per-iteration traces") {
  const PiecewisePhantom p = piecewise_phantom(64, 4, 3);
  const SamplingMask m = cartesian_mask(64, 64, 4.0, 0.04, 2);
  const KSpaceGrid y = apply_mask(fft2_centered(p.image), m);
  SolverConfig cfg = config(15, 1e-3);
  cfg.track_objective = true;
  cfg.edge_mode = EdgeMode::detected;
  const ReconResult a = pfista_reconstruct(y, m, cfg, p.image);
  const ReconResult b = pfista_reconstruct(y, m, cfg, p.image);
  CHECK(a.image == b.image);
  CHECK(a.iterate_rlne == b.iterate_rlne);
  CHECK(a.iterate_rlne.size() == 15);
  CHECK(a.objective.size() == 15);
  REQUIRE(a.edge_map_used);
  CHECK(*a.edge_map_used == detect(zero_filled(y, m), cfg.detector));
}

TEST_CASE("oracle mode needs a map and records it") {
  const SamplingMask m = SamplingMask::full(16, 16);
  const KSpaceGrid y(16, 16);
  SolverConfig cfg = config(2, 1e-3);
  cfg.edge_mode = EdgeMode::oracle;
  CHECK_THROWS_AS(pfista_reconstruct(y, m, cfg), Error);
  const EdgeWeightMap w(16, 16, 0.25);
  const ReconResult r = pfista_reconstruct(y, m, cfg, std::nullopt, w);
  REQUIRE(r.edge_map_used);
  CHECK(*r.edge_map_used == w);
  CHECK(!pfista_reconstruct(y, m, config(2, 1e-3)).edge_map_used);
}

TEST_CASE("detected edges on a constant image reduce to the uniform threshold lambda*gamma/eps") {
  const ComplexImage flat(64, 64, cplx(0.5, 0.0));
  const SamplingMask m = cartesian_mask(64, 64, 4.0, 0.04, 1);
  const KSpaceGrid y = apply_mask(fft2_centered(flat), m);
  for (Detector d : {Detector::tv, Detector::sobel, Detector::canny}) {
    SolverConfig cfg = config(10, 1e-3);
    cfg.edge_mode = EdgeMode::detected;
    cfg.detector.detector = d;
    const ReconResult a = pfista_reconstruct(y, m, cfg);
    REQUIRE(a.edge_map_used);
    for (double v : a.edge_map_used->weights()) CHECK(v == 0.0);
    const ReconResult b = pfista_reconstruct(y, m, config(10, 1e-3 / cfg.threshold.epsilon));
    CHECK(max_diff(a.image, b.image) <= 1e-12);
  }
}

TEST_CASE("objective examples") {
  Gen g(3);
  const std::size_t n = 16;
  const ComplexImage x = g.image(n, n);
  const SamplingMask full = SamplingMask::full(n, n);
  const SamplingMask m = random2d_mask(n, n, 0.5, 0.1, 1);
  const KSpaceGrid y = g.kspace(n, n);
  ThresholdConfig zero{0.0, 1.0, 0.1};

  CHECK(objective_value(x, fft2_centered(x), full, std::nullopt, zero, 2) <= 1e-24);

  double half_y = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (m[i]) half_y += std::norm(y[i]);
  half_y *= 0.5;
  CHECK(objective_value(ComplexImage(n, n), y, m, std::nullopt, zero, 2) ==
        doctest::Approx(half_y).epsilon(1e-14));

  const EdgeWeightMap w(n, n, g.weights(n * n));
  for (const auto& weights : {std::optional<EdgeWeightMap>{}, std::optional<EdgeWeightMap>{w}}) {
    const double data = objective_value(x, y, m, weights, zero, 2);
    const double one = objective_value(x, y, m, weights, ThresholdConfig{0.3, 1.0, 0.1}, 2) - data;
    const double two = objective_value(x, y, m, weights, ThresholdConfig{0.6, 1.0, 0.1}, 2) - data;
    CHECK(two == doctest::Approx(2.0 * one).epsilon(1e-13));
  }
}

TEST_CASE("penalty weights each detail coefficient by 1/(w+eps)") {
  Gen g(4);
  const std::size_t n = 8;
  const ComplexImage x = g.image(n, n);
  const EdgeWeightMap w(n, n, g.weights(n * n));
  const ThresholdConfig cfg{0.7, 1.0, 0.1};
  const KSpaceGrid y = apply_mask(fft2_centered(x), SamplingMask::full(n, n));
  const auto bands = naive_haar_analysis(x.data(), n, n, 2);
  double expect = 0.0, expect_all = 0.0;
  for (std::size_t b = 0; b < bands.size(); ++b) {
    for (std::size_t i = 0; i < n * n; ++i) {
      const double term = std::abs(bands[b][i]) / (w[i] + 0.1);
      expect_all += term;
      if (b + 1 < bands.size()) expect += term;
    }
  }
  CHECK(objective_value(x, y, SamplingMask::full(n, n), w, cfg, 2) ==
        doctest::Approx(0.7 * expect).epsilon(1e-12));
  CHECK(objective_value(x, y, SamplingMask::full(n, n), w, cfg, 2, true) ==
        doctest::Approx(0.7 * expect_all).epsilon(1e-12));
}

TEST_CASE("Shepp-Logan AF 6: oracle edge weighting beats uniform over the lambda sweep") {
  const ComplexImage ref = shepp_logan(256);
  const SamplingMask m = cartesian_mask(256, 256, 6.0, kDefaultCenterFraction, 1);
  const EdgeWeightMap oracle = detect_tv(magnitude(ref));
  RunSettings s;
  s.iterations = 200;
  double best_uniform = 1e9, best_oracle = 1e9;
  for (double lg : log_grid(1e-4, 1e-2, 5)) {
    s.lambda_gamma = lg;
    best_uniform = std::min(best_uniform, run_reconstruction(ref, m, "cartesian1d", 6.0,
                                                             Method::uniform, s, std::nullopt,
                                                             false, false)
                                              .row.rlne);
    // with epsilon 0.1 this keeps the smooth-pixel threshold equal to uniform's
    s.lambda_gamma = 0.1 * lg;
    best_oracle = std::min(best_oracle, run_reconstruction(ref, m, "cartesian1d", 6.0,
                                                           Method::oracle_edge, s, oracle, false,
                                                           false)
                                            .row.rlne);
  }
  MESSAGE("best uniform " << best_uniform << ", best oracle " << best_oracle);
  CHECK(best_oracle < best_uniform);
}

TEST_CASE("invalid solver settings are rejected") {
  const KSpaceGrid y(16, 16);
  const SamplingMask m = SamplingMask::full(16, 16);
  CHECK_THROWS_AS(pfista_reconstruct(y, m, config(0, 1e-3)), Error);
  CHECK_THROWS_AS(pfista_reconstruct(y, m, config(1, -1.0)), Error);
  CHECK_THROWS_AS(pfista_reconstruct(y, SamplingMask::full(16, 8), config(1, 1e-3)), Error);
  CHECK_THROWS_AS(parse_edge_mode("sometimes"), Error);
}
