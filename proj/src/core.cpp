#include "ewp/core.hpp"

#include <algorithm>
#include <numeric>

namespace ewp {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::ShapeMismatch: return "shape mismatch";
    case ErrorCode::BadMagic: return "bad magic";
    case ErrorCode::Truncated: return "truncated payload";
    case ErrorCode::TrailingData: return "trailing data";
    case ErrorCode::DimensionOverflow: return "dimension overflow";
    case ErrorCode::NonBinaryMaskCell: return "non-binary mask cell";
    case ErrorCode::KindMismatch: return "kind mismatch";
    case ErrorCode::InvalidValue: return "invalid value";
    case ErrorCode::Io: return "i/o failure";
  }
  return "unknown error";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

std::string to_string(const Shape& s) {
  return std::to_string(s.height) + "x" + std::to_string(s.width);
}

void require_same_shape(const Shape& a, const Shape& b, const char* context) {
  if (!(a == b)) {
    throw Error(ErrorCode::ShapeMismatch,
                std::string(context) + ": " + to_string(a) + " vs " + to_string(b));
  }
}

// --- EdgeWeightMap ---------------------------------------------------------

EdgeWeightMap::EdgeWeightMap(std::size_t height, std::size_t width, double fill)
    : grid_(height, width, fill) {
  validate();
}

EdgeWeightMap::EdgeWeightMap(std::size_t height, std::size_t width, std::vector<double> weights)
    : grid_(height, width, std::move(weights)) {
  validate();
}

EdgeWeightMap::EdgeWeightMap(RealGrid weights) : grid_(std::move(weights)) { validate(); }

void EdgeWeightMap::validate() const {
  for (double w : grid_.data()) {
    // Negated comparison also rejects NaN.
    if (!(w >= 0.0 && w <= 1.0)) {
      throw Error(ErrorCode::InvalidValue,
                  "edge weight " + std::to_string(w) + " outside [0,1]");
    }
  }
}

// --- SamplingMask ------------------------------------------------------------

const char* to_string(MaskKind kind) {
  switch (kind) {
    case MaskKind::cartesian1d: return "cartesian";
    case MaskKind::random2d: return "random2d";
    case MaskKind::full: return "full";
  }
  return "unknown";
}

SamplingMask::SamplingMask(std::size_t height, std::size_t width,
                           std::vector<std::uint8_t> cells, MaskKind kind, std::uint64_t seed,
                           double nominal_rate)
    : height_(height),
      width_(width),
      cells_(std::move(cells)),
      kind_(kind),
      seed_(seed),
      nominal_rate_(nominal_rate) {
  if (height == 0 || width == 0) {
    throw Error(ErrorCode::InvalidArgument, "mask dimensions must be positive");
  }
  if (cells_.size() != height * width) {
    throw Error(ErrorCode::ShapeMismatch, "mask cell count does not match dimensions");
  }
  for (auto c : cells_) {
    if (c > 1) {
      throw Error(ErrorCode::NonBinaryMaskCell, "mask cell value " + std::to_string(c));
    }
  }
  if (!(nominal_rate >= 0.0 && nominal_rate <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "nominal rate must lie in [0,1]");
  }
}

SamplingMask SamplingMask::full(std::size_t height, std::size_t width) {
  return SamplingMask(height, width, std::vector<std::uint8_t>(height * width, 1),
                      MaskKind::full, 0, 1.0);
}

std::size_t SamplingMask::sampled_count() const noexcept {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

double SamplingMask::achieved_rate() const noexcept {
  return static_cast<double>(sampled_count()) / static_cast<double>(cells_.size());
}

// --- FrameCoeffs -------------------------------------------------------------

FrameCoeffs::FrameCoeffs(std::size_t height, std::size_t width, std::size_t levels,
                         std::vector<std::vector<cplx>> subbands)
    : shape_{height, width}, levels_(levels), subbands_(std::move(subbands)) {
  if (height == 0 || width == 0 || levels == 0) {
    throw Error(ErrorCode::InvalidArgument, "frame dimensions and levels must be positive");
  }
  if (subbands_.size() != band_count(levels)) {
    throw Error(ErrorCode::InvalidArgument,
                "expected " + std::to_string(band_count(levels)) + " sub-bands for " +
                    std::to_string(levels) + " levels, got " + std::to_string(subbands_.size()));
  }
  for (const auto& band : subbands_) {
    if (band.size() != shape_.size()) {
      throw Error(ErrorCode::ShapeMismatch, "sub-band size does not match frame dimensions");
    }
  }
}

FrameCoeffs::FrameCoeffs(std::size_t height, std::size_t width, std::size_t levels)
    : FrameCoeffs(height, width, levels,
                  std::vector<std::vector<cplx>>(band_count(levels),
                                                 std::vector<cplx>(height * width))) {}

// --- helpers -----------------------------------------------------------------

double squared_norm(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return s;
}

double norm2(const std::vector<cplx>& v) { return std::sqrt(squared_norm(v)); }

double squared_norm(const FrameCoeffs& c) {
  double s = 0.0;
  for (const auto& band : c.subbands()) s += squared_norm(band);
  return s;
}

cplx inner(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::ShapeMismatch, "inner product of unequal lengths");
  }
  cplx s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

}  // namespace ewp
