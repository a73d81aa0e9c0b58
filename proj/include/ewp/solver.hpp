#pragma once

#include <optional>
#include <vector>

#include "ewp/core.hpp"
#include "ewp/edges.hpp"
#include "ewp/fourier.hpp"
#include "ewp/frame.hpp"
#include "ewp/threshold.hpp"

namespace ewp {

enum class EdgeMode {
  none,      // uniform threshold lambda*gamma
  detected,  // W detected once from the zero-filled image
  oracle     // W supplied by the caller
};

const char* to_string(EdgeMode m);
EdgeMode parse_edge_mode(const std::string& name);

struct SolverConfig {
  std::size_t iterations = 100;
  ThresholdConfig threshold;
  DcConfig dc;
  std::size_t levels = kDefaultFrameLevels;
  EdgeMode edge_mode = EdgeMode::none;
  DetectorConfig detector;
  bool momentum = true;  // false gives plain ISTA
  /// Also shrink the coarse approximation band. Off by default: it carries the
  /// image intensity, not a sparse signal.
  bool shrink_approximation = false;
  /// Evaluate objective_value after every iteration.
  bool track_objective = true;
  /// Keep a copy of every iterate in ReconResult::iterates.
  bool keep_iterates = false;

  void validate() const;
};

struct ReconResult {
  ComplexImage image;
  std::vector<double> iterate_rlne;  // one per iteration when a reference was given
  std::vector<double> objective;     // one per iteration when tracking is on
  double elapsed_seconds = 0.0;
  std::optional<EdgeWeightMap> edge_map_used;
  std::vector<ComplexImage> iterates;
};

/// ifft2(mask .* y)
ComplexImage zero_filled(const KSpaceGrid& y, const SamplingMask& mask);

/// Projected FISTA with a Parseval frame:
///   z       = x_hat + gamma F^H (y - M F x_hat)
///   x_k     = Q T(P z)
///   t_{k+1} = (1 + sqrt(1 + 4 t_k^2)) / 2
///   x_hat   = x_k + ((t_k - 1) / t_{k+1}) (x_k - x_{k-1})
/// starting from x_0 = x_hat_1 = zero_filled(y, mask), t_1 = 1. T is the
/// uniform or edge-weighted soft-threshold depending on cfg.edge_mode.
ReconResult pfista_reconstruct(const KSpaceGrid& y, const SamplingMask& mask,
                               const SolverConfig& cfg,
                               const std::optional<ComplexImage>& reference = std::nullopt,
                               const std::optional<EdgeWeightMap>& oracle_edges = std::nullopt);

/// 1/2 ||M F x - y||^2 + lambda * sum_i |(P x)_i| * s_i, where s_i = 1/(w_i + eps)
/// with weights and s_i = 1 without (the penalty whose proximal map is the
/// uniform threshold lambda*gamma). The approximation band contributes only
/// when `include_approximation` is set, matching SolverConfig::shrink_approximation.
double objective_value(const ComplexImage& x, const KSpaceGrid& y, const SamplingMask& mask,
                       const std::optional<EdgeWeightMap>& weights, const ThresholdConfig& cfg,
                       std::size_t levels = kDefaultFrameLevels,
                       bool include_approximation = false);

}  // namespace ewp
