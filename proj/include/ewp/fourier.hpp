#pragma once

#include <memory>

#include "ewp/core.hpp"

namespace ewp {

/// Step size of the data-consistency gradient step.
struct DcConfig {
  double gamma = 1.0;

  void validate() const;
};

/// Orthonormal 2D DFT. The returned k-space is centred: the zero frequency
/// sits at (height/2, width/2).
KSpaceGrid fft2_centered(const ComplexImage& image);

/// Inverse (and adjoint) of fft2_centered.
ComplexImage ifft2_centered(const KSpaceGrid& kspace);

KSpaceGrid apply_mask(const KSpaceGrid& kspace, const SamplingMask& mask);

/// x + gamma * F^H (M .* (y - M .* F x))
ComplexImage dc_gradient_step(const ComplexImage& x, const KSpaceGrid& y,
                              const SamplingMask& mask, const DcConfig& cfg);

/// Data-consistency step bound to fixed measurements. Holds the FFT scratch
/// buffers so repeated steps do not allocate; dc_gradient_step is a one-shot
/// wrapper around it. Not safe for concurrent use; make one per thread.
class DcOperator {
 public:
  DcOperator(const KSpaceGrid& y, const SamplingMask& mask);
  ~DcOperator();
  DcOperator(DcOperator&&) noexcept;
  DcOperator& operator=(DcOperator&&) noexcept;

  Shape shape() const noexcept;

  /// out = x + gamma * F^H (M .* (y - M .* F x)); `out` may alias `x`.
  void step(const ComplexImage& x, const DcConfig& cfg, ComplexImage& out);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ewp
