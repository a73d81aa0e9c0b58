#include "ewp/edges.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace ewp {

namespace {

std::size_t wrap(std::ptrdiff_t i, std::size_t n) {
  const auto m = static_cast<std::ptrdiff_t>(n);
  return static_cast<std::size_t>(((i % m) + m) % m);
}

EdgeWeightMap max_normalized(RealGrid g) {
  const double peak = *std::max_element(g.data().begin(), g.data().end());
  if (peak > 0.0) {
    for (auto& v : g.data()) v /= peak;
  } else {
    std::fill(g.data().begin(), g.data().end(), 0.0);
  }
  return EdgeWeightMap(std::move(g));
}

}  // namespace

const char* to_string(Detector d) {
  switch (d) {
    case Detector::tv: return "tv";
    case Detector::sobel: return "sobel";
    case Detector::canny: return "canny";
  }
  return "unknown";
}

Detector parse_detector(const std::string& name) {
  if (name == "tv") return Detector::tv;
  if (name == "sobel") return Detector::sobel;
  if (name == "canny") return Detector::canny;
  throw Error(ErrorCode::InvalidArgument, "unknown detector '" + name + "'");
}

void DetectorConfig::validate() const {
  if (!(canny_low >= 0.0 && canny_low < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "canny_low must lie in [0,1)");
  }
  if (!(canny_high > 0.0 && canny_high <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "canny_high must lie in (0,1]");
  }
  if (!(canny_low < canny_high)) {
    throw Error(ErrorCode::InvalidArgument, "canny_low must be below canny_high");
  }
  if (!(gaussian_sigma > 0.0) || !std::isfinite(gaussian_sigma)) {
    throw Error(ErrorCode::InvalidArgument, "gaussian_sigma must be positive");
  }
}

RealGrid magnitude(const ComplexImage& image) {
  RealGrid out(image.shape());
  for (std::size_t i = 0; i < image.size(); ++i) out[i] = std::abs(image[i]);
  return out;
}

EdgeWeightMap detect_tv(const RealGrid& mag) {
  const std::size_t h = mag.height();
  const std::size_t w = mag.width();
  RealGrid g(h, w);
  for (std::size_t r = 0; r < h; ++r) {
    const std::size_t rn = r + 1 == h ? 0 : r + 1;
    for (std::size_t c = 0; c < w; ++c) {
      const std::size_t cn = c + 1 == w ? 0 : c + 1;
      const double dx = mag(r, cn) - mag(r, c);
      const double dy = mag(rn, c) - mag(r, c);
      g(r, c) = std::sqrt(dx * dx + dy * dy);
    }
  }
  return max_normalized(std::move(g));
}

SobelGradients sobel_gradients(const RealGrid& mag) {
  const std::size_t h = mag.height();
  const std::size_t w = mag.width();
  SobelGradients out{RealGrid(h, w), RealGrid(h, w)};
  for (std::size_t r = 0; r < h; ++r) {
    const std::size_t rp = r == 0 ? h - 1 : r - 1;
    const std::size_t rn = r + 1 == h ? 0 : r + 1;
    for (std::size_t c = 0; c < w; ++c) {
      const std::size_t cp = c == 0 ? w - 1 : c - 1;
      const std::size_t cn = c + 1 == w ? 0 : c + 1;
      out.gx(r, c) = (mag(rp, cn) + 2.0 * mag(r, cn) + mag(rn, cn)) -
                     (mag(rp, cp) + 2.0 * mag(r, cp) + mag(rn, cp));
      out.gy(r, c) = (mag(rn, cp) + 2.0 * mag(rn, c) + mag(rn, cn)) -
                     (mag(rp, cp) + 2.0 * mag(rp, c) + mag(rp, cn));
    }
  }
  return out;
}

EdgeWeightMap detect_sobel(const RealGrid& mag) {
  const auto [gx, gy] = sobel_gradients(mag);
  RealGrid g(mag.shape());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::sqrt(gx[i] * gx[i] + gy[i] * gy[i]);
  return max_normalized(std::move(g));
}

RealGrid gaussian_blur(const RealGrid& grid, double sigma) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma must be positive");
  const auto radius = static_cast<std::ptrdiff_t>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  double total = 0.0;
  for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
    const double v = std::exp(-static_cast<double>(k * k) / (2.0 * sigma * sigma));
    kernel[static_cast<std::size_t>(k + radius)] = v;
    total += v;
  }
  for (auto& v : kernel) v /= total;

  const std::size_t h = grid.height();
  const std::size_t w = grid.width();
  RealGrid tmp(h, w);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      double s = 0.0;
      for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
        s += kernel[static_cast<std::size_t>(k + radius)] *
             grid(r, wrap(static_cast<std::ptrdiff_t>(c) + k, w));
      }
      tmp(r, c) = s;
    }
  }
  RealGrid out(h, w);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      double s = 0.0;
      for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
        s += kernel[static_cast<std::size_t>(k + radius)] *
             tmp(wrap(static_cast<std::ptrdiff_t>(r) + k, h), c);
      }
      out(r, c) = s;
    }
  }
  return out;
}

EdgeWeightMap detect_canny(const RealGrid& mag, const DetectorConfig& cfg) {
  cfg.validate();
  const std::size_t h = mag.height();
  const std::size_t w = mag.width();

  const auto [gx, gy] = sobel_gradients(gaussian_blur(mag, cfg.gaussian_sigma));
  RealGrid strength(h, w);
  for (std::size_t i = 0; i < strength.size(); ++i) {
    strength[i] = std::sqrt(gx[i] * gx[i] + gy[i] * gy[i]);
  }
  const double peak = *std::max_element(strength.data().begin(), strength.data().end());
  if (!(peak > 0.0)) return EdgeWeightMap(h, w, 0.0);

  // Non-maximum suppression. A pixel survives if it is strictly larger than
  // its neighbour against the gradient and not smaller than the one along it,
  // so a symmetric ridge two pixels wide thins to one.
  RealGrid thin(h, w);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      const double m = strength(r, c);
      if (m == 0.0) continue;
      double angle = std::atan2(gy(r, c), gx(r, c)) * 180.0 / std::numbers::pi;
      if (angle < 0.0) angle += 180.0;
      std::ptrdiff_t dr = 0;
      std::ptrdiff_t dc = 0;
      if (angle < 22.5 || angle >= 157.5) {
        dc = 1;
      } else if (angle < 67.5) {
        dr = 1;
        dc = 1;
      } else if (angle < 112.5) {
        dr = 1;
      } else {
        dr = 1;
        dc = -1;
      }
      const auto ri = static_cast<std::ptrdiff_t>(r);
      const auto ci = static_cast<std::ptrdiff_t>(c);
      const double behind = strength(wrap(ri - dr, h), wrap(ci - dc, w));
      const double ahead = strength(wrap(ri + dr, h), wrap(ci + dc, w));
      if (m > behind && m >= ahead) thin(r, c) = m;
    }
  }

  const double high = cfg.canny_high * peak;
  const double low = cfg.canny_low * peak;
  std::vector<double> edges(h * w, 0.0);
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < h * w; ++i) {
    if (thin[i] >= high && thin[i] > 0.0) {
      edges[i] = 1.0;
      stack.push_back(i);
    }
  }
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    const auto r = static_cast<std::ptrdiff_t>(i / w);
    const auto c = static_cast<std::ptrdiff_t>(i % w);
    for (std::ptrdiff_t dr = -1; dr <= 1; ++dr) {
      for (std::ptrdiff_t dc = -1; dc <= 1; ++dc) {
        if (dr == 0 && dc == 0) continue;
        const std::size_t j = wrap(r + dr, h) * w + wrap(c + dc, w);
        if (edges[j] == 0.0 && thin[j] >= low && thin[j] > 0.0) {
          edges[j] = 1.0;
          stack.push_back(j);
        }
      }
    }
  }
  return EdgeWeightMap(h, w, std::move(edges));
}

EdgeWeightMap dilate3x3(const EdgeWeightMap& map) {
  const std::size_t h = map.height();
  const std::size_t w = map.width();
  std::vector<double> out(h * w, 0.0);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      double m = 0.0;
      for (std::ptrdiff_t dr = -1; dr <= 1; ++dr) {
        for (std::ptrdiff_t dc = -1; dc <= 1; ++dc) {
          m = std::max(m, map(wrap(static_cast<std::ptrdiff_t>(r) + dr, h),
                              wrap(static_cast<std::ptrdiff_t>(c) + dc, w)));
        }
      }
      out[r * w + c] = m;
    }
  }
  return EdgeWeightMap(h, w, std::move(out));
}

EdgeWeightMap detect(const ComplexImage& image, const DetectorConfig& cfg) {
  cfg.validate();
  const RealGrid mag = magnitude(image);
  EdgeWeightMap map = [&] {
    switch (cfg.detector) {
      case Detector::tv: return detect_tv(mag);
      case Detector::sobel: return detect_sobel(mag);
      case Detector::canny: return detect_canny(mag, cfg);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown detector");
  }();
  return cfg.dilate ? dilate3x3(map) : map;
}

}  // namespace ewp
