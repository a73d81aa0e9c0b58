#pragma once

#include "ewp/core.hpp"

namespace ewp {

/// Threshold parameters. The base threshold is the product lambda * gamma;
/// epsilon keeps the weighted threshold finite where the edge weight is 0.
struct ThresholdConfig {
  double lambda = 1e-4;
  double gamma = 1.0;
  double epsilon = 0.1;

  double lambda_gamma() const noexcept { return lambda * gamma; }
  void validate() const;
};

/// Complex soft-thresholding of a single coefficient:
///   max(|alpha| - threshold, 0) * alpha / |alpha|, and 0 for alpha = 0.
inline cplx soft_threshold(cplx alpha, double threshold) {
  const double mag2 = alpha.real() * alpha.real() + alpha.imag() * alpha.imag();
  // Clearly below threshold: the sqrt below would also give mag <= threshold.
  if (mag2 < threshold * threshold * (1.0 - 1e-12)) return cplx{};
  const double mag = std::sqrt(mag2);
  if (mag <= threshold || mag == 0.0) return cplx{};
  return (mag - threshold) * (alpha / mag);
}

/// soft_threshold over n contiguous coefficients, with per-coefficient
/// thresholds `t` or, when `t` is null, the single threshold `uniform`.
/// Branch-free; gives the same values as the scalar function.
void soft_threshold_row(cplx* v, std::size_t n, const double* t, double uniform);

/// Edge-weighted soft-thresholding: coefficient i of every sub-band is shrunk
/// by lambda*gamma / (w_i + epsilon), where w_i is the weight at the same pixel.
/// Larger weights (edges) get smaller thresholds.
FrameCoeffs soft_threshold_weighted(const FrameCoeffs& coeffs, const EdgeWeightMap& weights,
                                    const ThresholdConfig& cfg);

/// Same threshold lambda*gamma on every coefficient.
FrameCoeffs soft_threshold_uniform(const FrameCoeffs& coeffs, const ThresholdConfig& cfg);

/// In-place forms of the two operators. `bands` limits shrinkage to the first
/// `bands` sub-bands (all of them by default).
void soft_threshold_weighted_inplace(FrameCoeffs& coeffs, const EdgeWeightMap& weights,
                                     const ThresholdConfig& cfg,
                                     std::size_t bands = static_cast<std::size_t>(-1));
void soft_threshold_uniform_inplace(FrameCoeffs& coeffs, const ThresholdConfig& cfg,
                                    std::size_t bands = static_cast<std::size_t>(-1));

}  // namespace ewp
