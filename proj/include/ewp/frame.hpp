#pragma once

#include <span>

#include "ewp/core.hpp"

namespace ewp {

constexpr std::size_t kDefaultFrameLevels = 3;

/// Undecimated (a trous) 2D Haar analysis with periodic boundaries.
///
/// Level j filters with taps spaced 2^(j-1) apart:
///   low[i]  = (x[i] + x[i - d]) / 2
///   high[i] = (x[i] - x[i - d]) / 2
/// Since |H|^2 + |G|^2 = 1 at every frequency, the stacked analysis operator is
/// a Parseval frame: ||P x|| = ||x|| and P^H P = I.
///
/// Per level the bands are (high along height, high along width, high along
/// both), followed by the final approximation band. Every band is pixel-aligned
/// with the input image.
FrameCoeffs frame_forward(const ComplexImage& image, std::size_t levels = kDefaultFrameLevels);

/// Adjoint of frame_forward, which for a Parseval frame is its left inverse.
ComplexImage frame_backward(const FrameCoeffs& coeffs);

/// Scratch buffers reused across calls by the in-place variants below.
struct FrameWorkspace {
  std::vector<cplx> a;
  std::vector<cplx> b;
  std::vector<cplx> rows;
};

/// frame_forward into preallocated coefficients; `out.levels()` selects the depth.
void frame_forward_into(const ComplexImage& image, FrameCoeffs& out, FrameWorkspace& ws);

/// frame_backward into a preallocated image of matching shape.
void frame_backward_into(const FrameCoeffs& coeffs, ComplexImage& out, FrameWorkspace& ws);

/// Soft-thresholding applied to detail coefficients as they are produced.
/// Coefficient i of every detail band is shrunk by thresholds[i], or by
/// `uniform` when `thresholds` is empty. A zero threshold leaves values as is.
struct DetailShrink {
  std::span<const double> thresholds;
  double uniform = 0.0;
  bool approximation = false;  // shrink the approximation band too
};

/// frame_forward_into followed by shrinkage, in a single pass over memory.
/// Bit-identical to the two steps done separately.
void frame_forward_shrink_into(const ComplexImage& image, FrameCoeffs& out, FrameWorkspace& ws,
                               const DetailShrink& shrink);

}  // namespace ewp
