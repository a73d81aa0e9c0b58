#pragma once

#include <limits>
#include <span>

#include "ewp/core.hpp"

namespace ewp {

/// ||x - x_hat||_2 / ||x||_2
double rlne(const ComplexImage& reference, const ComplexImage& reconstruction);

enum class PsnrMode {
  standard,      // 10 log10(MN ||x||_inf^2 / ||x - x_hat||_2^2)
  paper_literal  // 10 log10(MN ||x||_inf / ||x - x_hat||_2), squares omitted
};

/// Returned when the reconstruction equals the reference.
constexpr double kPsnrIdentical = std::numeric_limits<double>::infinity();

double psnr(const ComplexImage& reference, const ComplexImage& reconstruction,
            PsnrMode mode = PsnrMode::standard);

/// 2|A n B| / (|A| + |B|) for the pixels carrying `label` in each grid.
double dice(const LabelGrid& seg_a, const LabelGrid& seg_b, int label);

/// Sum over iterates of ||x_ref - x_m||_2^2.
double rec_loss(std::span<const ComplexImage> iterates, const ComplexImage& reference);

/// ||w_ref - w||_2^2
double edge_loss(const EdgeWeightMap& w_ref, const EdgeWeightMap& w);

/// rec_loss + edge_loss.
double total_loss(std::span<const ComplexImage> iterates, const ComplexImage& reference,
                  const EdgeWeightMap& w_ref, const EdgeWeightMap& w);

}  // namespace ewp
