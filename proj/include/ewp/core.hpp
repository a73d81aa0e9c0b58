#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ewp {

using cplx = std::complex<double>;

enum class ErrorCode {
  InvalidArgument,
  ShapeMismatch,
  BadMagic,
  Truncated,
  TrailingData,
  DimensionOverflow,
  NonBinaryMaskCell,
  KindMismatch,
  InvalidValue,
  Io,
};

const char* to_string(ErrorCode code);

/// Every failure in the library is reported through this exception; `code()`
/// distinguishes the cases callers may want to handle separately.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct Shape {
  std::size_t height = 0;
  std::size_t width = 0;

  std::size_t size() const noexcept { return height * width; }
  friend bool operator==(const Shape&, const Shape&) = default;
};

std::string to_string(const Shape& s);

void require_same_shape(const Shape& a, const Shape& b, const char* context);

/// Dense row-major 2D grid. `Tag` keeps image-domain and k-space grids from
/// being mixed up even though they share an element type.
template <class T, class Tag>
class Grid {
 public:
  using value_type = T;

  Grid(std::size_t height, std::size_t width, T fill = T{})
      : shape_{checked(height, width)}, data_(height * width, fill) {}

  Grid(std::size_t height, std::size_t width, std::vector<T> data)
      : shape_{checked(height, width)}, data_(std::move(data)) {
    if (data_.size() != shape_.size()) {
      throw Error(ErrorCode::ShapeMismatch,
                  "data length " + std::to_string(data_.size()) + " does not match " +
                      to_string(shape_));
    }
  }

  explicit Grid(Shape s, T fill = T{}) : Grid(s.height, s.width, fill) {}

  std::size_t height() const noexcept { return shape_.height; }
  std::size_t width() const noexcept { return shape_.width; }
  std::size_t size() const noexcept { return data_.size(); }
  Shape shape() const noexcept { return shape_; }

  T& operator()(std::size_t row, std::size_t col) { return data_[row * shape_.width + col]; }
  const T& operator()(std::size_t row, std::size_t col) const {
    return data_[row * shape_.width + col];
  }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  std::vector<T>& data() noexcept { return data_; }
  const std::vector<T>& data() const noexcept { return data_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  static Shape checked(std::size_t height, std::size_t width) {
    if (height == 0 || width == 0) {
      throw Error(ErrorCode::InvalidArgument,
                  "grid dimensions must be positive, got " + std::to_string(height) + "x" +
                      std::to_string(width));
    }
    return Shape{height, width};
  }

  Shape shape_;
  std::vector<T> data_;
};

struct ImageTag {};
struct KSpaceTag {};
struct RealTag {};
struct LabelTag {};

using ComplexImage = Grid<cplx, ImageTag>;
using KSpaceGrid = Grid<cplx, KSpaceTag>;
using RealGrid = Grid<double, RealTag>;
using LabelGrid = Grid<int, LabelTag>;

inline bool is_finite(double v) noexcept { return std::isfinite(v); }
inline bool is_finite(const cplx& v) noexcept {
  return std::isfinite(v.real()) && std::isfinite(v.imag());
}

/// Throws InvalidValue if any sample is NaN or infinite.
template <class G>
void require_finite(const G& grid, const char* context) {
  for (const auto& v : grid.data()) {
    if (!is_finite(v)) {
      throw Error(ErrorCode::InvalidValue, std::string(context) + ": non-finite sample");
    }
  }
}

/// Per-pixel weights in [0,1] used to modulate soft-thresholding.
class EdgeWeightMap {
 public:
  EdgeWeightMap(std::size_t height, std::size_t width, double fill = 0.0);
  EdgeWeightMap(std::size_t height, std::size_t width, std::vector<double> weights);
  explicit EdgeWeightMap(RealGrid weights);

  std::size_t height() const noexcept { return grid_.height(); }
  std::size_t width() const noexcept { return grid_.width(); }
  std::size_t size() const noexcept { return grid_.size(); }
  Shape shape() const noexcept { return grid_.shape(); }

  double operator()(std::size_t row, std::size_t col) const { return grid_(row, col); }
  double operator[](std::size_t i) const { return grid_[i]; }
  const std::vector<double>& weights() const noexcept { return grid_.data(); }
  const RealGrid& grid() const noexcept { return grid_; }

  friend bool operator==(const EdgeWeightMap&, const EdgeWeightMap&) = default;

 private:
  void validate() const;
  RealGrid grid_;
};

enum class MaskKind : std::uint8_t { cartesian1d, random2d, full };

const char* to_string(MaskKind kind);

/// Binary k-space sampling pattern plus the parameters that produced it.
class SamplingMask {
 public:
  SamplingMask(std::size_t height, std::size_t width, std::vector<std::uint8_t> cells,
               MaskKind kind, std::uint64_t seed, double nominal_rate);

  /// All-ones mask.
  static SamplingMask full(std::size_t height, std::size_t width);

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t size() const noexcept { return cells_.size(); }
  Shape shape() const noexcept { return {height_, width_}; }

  std::uint8_t operator()(std::size_t row, std::size_t col) const {
    return cells_[row * width_ + col];
  }
  std::uint8_t operator[](std::size_t i) const { return cells_[i]; }
  const std::vector<std::uint8_t>& cells() const noexcept { return cells_; }

  MaskKind kind() const noexcept { return kind_; }
  std::uint64_t seed() const noexcept { return seed_; }
  double nominal_rate() const noexcept { return nominal_rate_; }

  std::size_t sampled_count() const noexcept;
  double achieved_rate() const noexcept;

  friend bool operator==(const SamplingMask&, const SamplingMask&) = default;

 private:
  std::size_t height_;
  std::size_t width_;
  std::vector<std::uint8_t> cells_;
  MaskKind kind_;
  std::uint64_t seed_;
  double nominal_rate_;
};

/// Undecimated multi-level decomposition: `3 * levels` detail bands ordered
/// level by level (horizontal, vertical, diagonal), then one approximation band.
class FrameCoeffs {
 public:
  FrameCoeffs(std::size_t height, std::size_t width, std::size_t levels,
              std::vector<std::vector<cplx>> subbands);
  FrameCoeffs(std::size_t height, std::size_t width, std::size_t levels);

  static std::size_t band_count(std::size_t levels) noexcept { return 3 * levels + 1; }

  std::size_t height() const noexcept { return shape_.height; }
  std::size_t width() const noexcept { return shape_.width; }
  Shape shape() const noexcept { return shape_; }
  std::size_t levels() const noexcept { return levels_; }
  std::size_t subband_count() const noexcept { return subbands_.size(); }

  std::vector<cplx>& subband(std::size_t i) { return subbands_[i]; }
  const std::vector<cplx>& subband(std::size_t i) const { return subbands_[i]; }
  std::vector<cplx>& approximation() { return subbands_.back(); }
  const std::vector<cplx>& approximation() const { return subbands_.back(); }
  const std::vector<std::vector<cplx>>& subbands() const noexcept { return subbands_; }

  friend bool operator==(const FrameCoeffs&, const FrameCoeffs&) = default;

 private:
  Shape shape_;
  std::size_t levels_;
  std::vector<std::vector<cplx>> subbands_;
};

// Small element-wise helpers shared by several modules.

double norm2(const std::vector<cplx>& v);
double squared_norm(const std::vector<cplx>& v);
double squared_norm(const FrameCoeffs& c);
cplx inner(const std::vector<cplx>& a, const std::vector<cplx>& b);  // sum conj(a) * b

}  // namespace ewp
