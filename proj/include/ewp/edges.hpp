#pragma once

#include "ewp/core.hpp"

namespace ewp {

enum class Detector { tv, sobel, canny };

const char* to_string(Detector d);
Detector parse_detector(const std::string& name);

struct DetectorConfig {
  Detector detector = Detector::tv;
  double canny_low = 0.1;   // fraction of the maximum gradient magnitude
  double canny_high = 0.3;  // fraction of the maximum gradient magnitude
  double gaussian_sigma = 1.0;
  bool dilate = false;  // 3x3 max filter applied after detection

  void validate() const;
};

RealGrid magnitude(const ComplexImage& image);

/// Forward differences with periodic wrap, sqrt(dx^2 + dy^2), max-normalised.
EdgeWeightMap detect_tv(const RealGrid& mag);

/// Raw Sobel responses (correlation with the 3x3 kernels, periodic boundary).
/// gx uses (-1 0 1; -2 0 2; -1 0 1), gy is its transpose.
struct SobelGradients {
  RealGrid gx;
  RealGrid gy;
};
SobelGradients sobel_gradients(const RealGrid& mag);

/// sqrt(gx^2 + gy^2) of the Sobel responses, max-normalised.
EdgeWeightMap detect_sobel(const RealGrid& mag);

/// Binary Canny edge map: Gaussian blur, Sobel gradients, non-maximum
/// suppression along the gradient direction quantised to 45 degrees, double
/// threshold relative to the largest gradient magnitude, 8-connected hysteresis.
EdgeWeightMap detect_canny(const RealGrid& mag, const DetectorConfig& cfg);

/// Periodic separable Gaussian blur; the kernel spans ceil(3 sigma) each side.
RealGrid gaussian_blur(const RealGrid& grid, double sigma);

/// 3x3 periodic max filter.
EdgeWeightMap dilate3x3(const EdgeWeightMap& map);

/// Magnitude, then the configured detector, then optional dilation.
EdgeWeightMap detect(const ComplexImage& image, const DetectorConfig& cfg);

}  // namespace ewp
