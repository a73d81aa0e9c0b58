#include "ewp/threshold.hpp"

#include <algorithm>
#include <cmath>

namespace ewp {

void ThresholdConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::InvalidArgument, "lambda must be finite and nonnegative");
  }
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::InvalidArgument, "gamma must be finite and nonnegative");
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorCode::InvalidArgument, "epsilon must be finite and positive");
  }
}

namespace {

// Written without branches so it vectorizes; rejected lanes divide by 1 and
// are then replaced by 0.
template <bool PerPixel>
inline void shrink_loop(double* d, std::size_t n, const double* t, double uniform) {
  for (std::size_t i = 0; i < n; ++i) {
    double thr;
    if constexpr (PerPixel) {
      thr = t[i];
    } else {
      thr = uniform;
    }
    const double re = d[2 * i];
    const double im = d[2 * i + 1];
    const double mag = std::sqrt(re * re + im * im);
    const bool keep = mag > thr;
    const double q = keep ? mag : 1.0;
    const double s = mag - thr;
    const double out_re = s * (re / q);
    const double out_im = s * (im / q);
    d[2 * i] = keep ? out_re : 0.0;
    d[2 * i + 1] = keep ? out_im : 0.0;
  }
}

}  // namespace

__attribute__((target_clones("avx2", "default")))
void soft_threshold_row(cplx* v, std::size_t n, const double* t, double uniform) {
  double* d = reinterpret_cast<double*>(v);
  if (t != nullptr) {
    shrink_loop<true>(d, n, t, uniform);
  } else {
    shrink_loop<false>(d, n, t, uniform);
  }
}

void soft_threshold_weighted_inplace(FrameCoeffs& coeffs, const EdgeWeightMap& weights,
                                     const ThresholdConfig& cfg, std::size_t bands) {
  cfg.validate();
  require_same_shape(coeffs.shape(), weights.shape(), "soft_threshold_weighted");

  const double base = cfg.lambda_gamma();
  if (base == 0.0) return;
  const std::size_t n = weights.size();
  std::vector<double> per_pixel(n);
  for (std::size_t i = 0; i < n; ++i) per_pixel[i] = base / (weights[i] + cfg.epsilon);

  bands = std::min(bands, coeffs.subband_count());
  for (std::size_t b = 0; b < bands; ++b) {
    cplx* band = coeffs.subband(b).data();
    soft_threshold_row(band, n, per_pixel.data(), 0.0);
  }
}

void soft_threshold_uniform_inplace(FrameCoeffs& coeffs, const ThresholdConfig& cfg,
                                    std::size_t bands) {
  cfg.validate();
  const double t = cfg.lambda_gamma();
  if (t == 0.0) return;
  bands = std::min(bands, coeffs.subband_count());
  for (std::size_t b = 0; b < bands; ++b) {
    soft_threshold_row(coeffs.subband(b).data(), coeffs.subband(b).size(), nullptr, t);
  }
}

FrameCoeffs soft_threshold_weighted(const FrameCoeffs& coeffs, const EdgeWeightMap& weights,
                                    const ThresholdConfig& cfg) {
  FrameCoeffs out = coeffs;
  soft_threshold_weighted_inplace(out, weights, cfg);
  return out;
}

FrameCoeffs soft_threshold_uniform(const FrameCoeffs& coeffs, const ThresholdConfig& cfg) {
  FrameCoeffs out = coeffs;
  soft_threshold_uniform_inplace(out, cfg);
  return out;
}

}  // namespace ewp
