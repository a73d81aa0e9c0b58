#include "ewp/solver.hpp"

#include <chrono>
#include <cmath>

#include "ewp/metrics.hpp"

namespace ewp {

const char* to_string(EdgeMode m) {
  switch (m) {
    case EdgeMode::none: return "none";
    case EdgeMode::detected: return "detected";
    case EdgeMode::oracle: return "oracle";
  }
  return "unknown";
}

EdgeMode parse_edge_mode(const std::string& name) {
  if (name == "none") return EdgeMode::none;
  if (name == "detected") return EdgeMode::detected;
  if (name == "oracle") return EdgeMode::oracle;
  throw Error(ErrorCode::InvalidArgument, "unknown edge mode '" + name + "'");
}

void SolverConfig::validate() const {
  if (iterations == 0) throw Error(ErrorCode::InvalidArgument, "iterations must be >= 1");
  threshold.validate();
  dc.validate();
  if (levels == 0) throw Error(ErrorCode::InvalidArgument, "levels must be >= 1");
  if (edge_mode == EdgeMode::detected) detector.validate();
}

ComplexImage zero_filled(const KSpaceGrid& y, const SamplingMask& mask) {
  return ifft2_centered(apply_mask(y, mask));
}

double objective_value(const ComplexImage& x, const KSpaceGrid& y, const SamplingMask& mask,
                       const std::optional<EdgeWeightMap>& weights, const ThresholdConfig& cfg,
                       std::size_t levels, bool include_approximation) {
  cfg.validate();
  require_same_shape(x.shape(), y.shape(), "objective_value (x vs y)");
  require_same_shape(x.shape(), mask.shape(), "objective_value (x vs mask)");
  if (weights) require_same_shape(x.shape(), weights->shape(), "objective_value (x vs weights)");

  const KSpaceGrid fx = fft2_centered(x);
  double data = 0.0;
  for (std::size_t i = 0; i < fx.size(); ++i) {
    const cplx predicted = mask[i] != 0 ? fx[i] : cplx{};
    const cplx measured = mask[i] != 0 ? y[i] : cplx{};
    data += std::norm(predicted - measured);
  }

  double penalty = 0.0;
  if (cfg.lambda != 0.0) {
    const FrameCoeffs coeffs = frame_forward(x, levels);
    const std::size_t bands =
        include_approximation ? coeffs.subband_count() : coeffs.subband_count() - 1;
    for (std::size_t b = 0; b < bands; ++b) {
      const auto& band = coeffs.subband(b);
      for (std::size_t i = 0; i < band.size(); ++i) {
        const double scale = weights ? 1.0 / ((*weights)[i] + cfg.epsilon) : 1.0;
        penalty += std::sqrt(std::norm(band[i])) * scale;
      }
    }
  }
  return 0.5 * data + cfg.lambda * penalty;
}

ReconResult pfista_reconstruct(const KSpaceGrid& y, const SamplingMask& mask,
                               const SolverConfig& cfg,
                               const std::optional<ComplexImage>& reference,
                               const std::optional<EdgeWeightMap>& oracle_edges) {
  cfg.validate();
  require_same_shape(y.shape(), mask.shape(), "pfista_reconstruct (y vs mask)");
  if (reference) require_same_shape(y.shape(), reference->shape(), "pfista_reconstruct (reference)");

  const auto start = std::chrono::steady_clock::now();

  const KSpaceGrid measured = apply_mask(y, mask);
  const ComplexImage x0 = ifft2_centered(measured);

  std::optional<EdgeWeightMap> weights;
  switch (cfg.edge_mode) {
    case EdgeMode::none: break;
    case EdgeMode::detected: weights = detect(x0, cfg.detector); break;
    case EdgeMode::oracle:
      if (!oracle_edges) {
        throw Error(ErrorCode::InvalidArgument, "edge_mode=oracle requires an oracle edge map");
      }
      require_same_shape(y.shape(), oracle_edges->shape(), "pfista_reconstruct (oracle map)");
      weights = oracle_edges;
      break;
  }

  ReconResult result{x0, {}, {}, 0.0, weights, {}};
  if (reference) result.iterate_rlne.reserve(cfg.iterations);
  if (cfg.track_objective) result.objective.reserve(cfg.iterations);

  FrameCoeffs coeffs(y.height(), y.width(), cfg.levels);
  FrameWorkspace ws;

  // Same per-pixel thresholds as soft_threshold_weighted_inplace.
  const double base = cfg.threshold.lambda_gamma();
  std::vector<double> per_pixel;
  if (weights && base != 0.0) {
    per_pixel.resize(weights->size());
    for (std::size_t i = 0; i < per_pixel.size(); ++i) {
      per_pixel[i] = base / ((*weights)[i] + cfg.threshold.epsilon);
    }
  }
  const DetailShrink shrink{per_pixel, weights ? 0.0 : base, cfg.shrink_approximation};
  DcOperator dc(measured, mask);

  ComplexImage previous = x0;
  ComplexImage extrapolated = x0;
  ComplexImage current(y.shape());
  ComplexImage z(y.shape());
  double t = 1.0;
  for (std::size_t k = 0; k < cfg.iterations; ++k) {
    dc.step(extrapolated, cfg.dc, z);
    frame_forward_shrink_into(z, coeffs, ws, shrink);
    frame_backward_into(coeffs, current, ws);

    if (cfg.momentum) {
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      const double beta = (t - 1.0) / t_next;
      for (std::size_t i = 0; i < current.size(); ++i) {
        extrapolated[i] = current[i] + beta * (current[i] - previous[i]);
      }
      t = t_next;
    } else {
      extrapolated = current;
    }

    if (reference) result.iterate_rlne.push_back(rlne(*reference, current));
    if (cfg.track_objective) {
      result.objective.push_back(objective_value(current, measured, mask, weights,
                                                 cfg.threshold, cfg.levels,
                                                 cfg.shrink_approximation));
    }
    if (cfg.keep_iterates) result.iterates.push_back(current);
    std::swap(previous, current);
  }

  result.image = std::move(previous);
  result.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace ewp
