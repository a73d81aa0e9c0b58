#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ewp/core.hpp"

namespace ewp {

constexpr double kDefaultCenterFraction = 0.04;

/// Seeded generator used by every randomised construction in the library.
/// std::mt19937_64 has a fully specified output sequence, and the bounded draw
/// below avoids std::uniform_int_distribution, whose algorithm differs between
/// standard libraries. Together they make masks bit-identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound), by rejection of the biased tail.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Picks `count` distinct values from `pool` by a partial Fisher-Yates shuffle.
  std::vector<std::size_t> sample(std::vector<std::size_t> pool, std::size_t count);

 private:
  std::mt19937_64 engine_;
};

/// Phase-encode (column) undersampling. The central ceil(center_fraction*width)
/// columns are always kept; the rest of the round(width/acceleration) budget is
/// drawn uniformly without replacement. Kept columns are fully sampled.
SamplingMask cartesian_mask(std::size_t height, std::size_t width, double acceleration,
                            double center_fraction, std::uint64_t seed);

/// Point-wise undersampling: a central square of side
/// ceil(center_fraction*min(height,width)) plus uniformly drawn points, for
/// exactly floor(rate*height*width) samples in total.
SamplingMask random2d_mask(std::size_t height, std::size_t width, double rate,
                           double center_fraction, std::uint64_t seed);

/// Number of columns a Cartesian mask keeps: round(width / acceleration).
std::size_t cartesian_budget(std::size_t width, double acceleration);
/// Number of points a random 2D mask keeps: floor(rate * height * width).
std::size_t random2d_budget(std::size_t height, std::size_t width, double rate);

}  // namespace ewp
