#include "ewp/masks.hpp"

#include <cmath>
#include <limits>

namespace ewp {

namespace {

// Guards ceil/floor against products like 0.29 * 100 = 28.999999999999996.
constexpr double kRoundingSlack = 1e-9;

std::size_t ceil_count(double x) {
  return static_cast<std::size_t>(std::ceil(x - kRoundingSlack));
}

void check_center_fraction(double f) {
  if (!(f >= 0.0 && f < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "center_fraction must lie in [0,1)");
  }
}

}  // namespace

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::InvalidArgument, "Rng::below(0)");
  // 2^64 mod bound, computed without overflow.
  const std::uint64_t tail = (std::uint64_t{0} - bound) % bound;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - tail;
  std::uint64_t x = next();
  while (x > limit) x = next();
  return x % bound;
}

std::vector<std::size_t> Rng::sample(std::vector<std::size_t> pool, std::size_t count) {
  if (count > pool.size()) {
    throw Error(ErrorCode::InvalidArgument, "sample larger than pool");
  }
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

std::size_t cartesian_budget(std::size_t width, double acceleration) {
  if (!(acceleration >= 1.0) || !std::isfinite(acceleration)) {
    throw Error(ErrorCode::InvalidArgument, "acceleration must be >= 1");
  }
  return static_cast<std::size_t>(std::llround(static_cast<double>(width) / acceleration));
}

std::size_t random2d_budget(std::size_t height, std::size_t width, double rate) {
  if (!(rate > 0.0 && rate <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "rate must lie in (0,1]");
  }
  const double total = static_cast<double>(height * width);
  const auto n = static_cast<std::size_t>(std::floor(rate * total + kRoundingSlack));
  return std::min(n, height * width);
}

SamplingMask cartesian_mask(std::size_t height, std::size_t width, double acceleration,
                            double center_fraction, std::uint64_t seed) {
  if (height == 0 || width == 0) {
    throw Error(ErrorCode::InvalidArgument, "mask dimensions must be positive");
  }
  check_center_fraction(center_fraction);
  const std::size_t budget = cartesian_budget(width, acceleration);
  const std::size_t center = ceil_count(center_fraction * static_cast<double>(width));
  if (budget < center || budget == 0) {
    throw Error(ErrorCode::InvalidArgument,
                "line budget " + std::to_string(budget) + " is smaller than the " +
                    std::to_string(center) + " centre lines");
  }

  std::vector<std::uint8_t> keep(width, 0);
  const std::size_t start = width / 2 - center / 2;
  for (std::size_t c = start; c < start + center; ++c) keep[c] = 1;

  std::vector<std::size_t> pool;
  for (std::size_t c = 0; c < width; ++c) {
    if (keep[c] == 0) pool.push_back(c);
  }
  Rng rng(seed);
  for (std::size_t c : rng.sample(std::move(pool), budget - center)) keep[c] = 1;

  std::vector<std::uint8_t> cells(height * width);
  for (std::size_t r = 0; r < height; ++r) {
    std::copy(keep.begin(), keep.end(), cells.begin() + static_cast<std::ptrdiff_t>(r * width));
  }
  const MaskKind kind = budget == width ? MaskKind::full : MaskKind::cartesian1d;
  return SamplingMask(height, width, std::move(cells), kind, seed, 1.0 / acceleration);
}

SamplingMask random2d_mask(std::size_t height, std::size_t width, double rate,
                           double center_fraction, std::uint64_t seed) {
  if (height == 0 || width == 0) {
    throw Error(ErrorCode::InvalidArgument, "mask dimensions must be positive");
  }
  check_center_fraction(center_fraction);
  const std::size_t budget = random2d_budget(height, width, rate);
  const std::size_t side =
      ceil_count(center_fraction * static_cast<double>(std::min(height, width)));
  if (budget < side * side) {
    throw Error(ErrorCode::InvalidArgument,
                "point budget " + std::to_string(budget) + " is smaller than the " +
                    std::to_string(side * side) + "-point centre block");
  }

  std::vector<std::uint8_t> cells(height * width, 0);
  const std::size_t r0 = height / 2 - side / 2;
  const std::size_t c0 = width / 2 - side / 2;
  for (std::size_t r = r0; r < r0 + side; ++r) {
    for (std::size_t c = c0; c < c0 + side; ++c) cells[r * width + c] = 1;
  }

  std::vector<std::size_t> pool;
  pool.reserve(height * width - side * side);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i] == 0) pool.push_back(i);
  }
  Rng rng(seed);
  for (std::size_t i : rng.sample(std::move(pool), budget - side * side)) cells[i] = 1;

  const MaskKind kind = budget == height * width ? MaskKind::full : MaskKind::random2d;
  return SamplingMask(height, width, std::move(cells), kind, seed, rate);
}

}  // namespace ewp
