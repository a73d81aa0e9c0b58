#include "ewp/metrics.hpp"

#include <cmath>

namespace ewp {

namespace {

// Neumaier-compensated sum of |a_i - b_i|^2 (b may be null for |a_i|^2).
double compensated_sq(const cplx* a, const cplx* b, std::size_t n) {
  double s = 0.0, c = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = std::norm(b ? a[i] - b[i] : a[i]);
    const double t = s + v;
    c += std::abs(s) >= v ? (s - t) + v : (v - t) + s;
    s = t;
  }
  return s + c;
}

double squared_distance(const ComplexImage& a, const ComplexImage& b) {
  return compensated_sq(a.data().data(), b.data().data(), a.size());
}

}  // namespace

double rlne(const ComplexImage& reference, const ComplexImage& reconstruction) {
  require_same_shape(reference.shape(), reconstruction.shape(), "rlne");
  const double ref = compensated_sq(reference.data().data(), nullptr, reference.size());
  if (!(ref > 0.0)) throw Error(ErrorCode::InvalidArgument, "rlne: reference has zero norm");
  return std::sqrt(squared_distance(reference, reconstruction)) / std::sqrt(ref);
}

double psnr(const ComplexImage& reference, const ComplexImage& reconstruction, PsnrMode mode) {
  require_same_shape(reference.shape(), reconstruction.shape(), "psnr");
  const double err2 = squared_distance(reference, reconstruction);
  if (err2 == 0.0) return kPsnrIdentical;

  double peak = 0.0;
  for (const auto& z : reference.data()) peak = std::max(peak, std::abs(z));
  const auto mn = static_cast<double>(reference.size());
  if (mode == PsnrMode::standard) return 10.0 * std::log10(mn * peak * peak / err2);
  return 10.0 * std::log10(mn * peak / std::sqrt(err2));
}

double dice(const LabelGrid& seg_a, const LabelGrid& seg_b, int label) {
  require_same_shape(seg_a.shape(), seg_b.shape(), "dice");
  std::size_t a = 0, b = 0, both = 0;
  for (std::size_t i = 0; i < seg_a.size(); ++i) {
    const bool in_a = seg_a[i] == label;
    const bool in_b = seg_b[i] == label;
    a += in_a;
    b += in_b;
    both += in_a && in_b;
  }
  if (a + b == 0) {
    throw Error(ErrorCode::InvalidArgument,
                "dice: label " + std::to_string(label) + " absent from both segmentations");
  }
  return 2.0 * static_cast<double>(both) / static_cast<double>(a + b);
}

double rec_loss(std::span<const ComplexImage> iterates, const ComplexImage& reference) {
  if (iterates.empty()) throw Error(ErrorCode::InvalidArgument, "rec_loss: no iterates");
  double s = 0.0;
  for (const auto& x : iterates) {
    require_same_shape(x.shape(), reference.shape(), "rec_loss");
    s += squared_distance(reference, x);
  }
  return s;
}

double edge_loss(const EdgeWeightMap& w_ref, const EdgeWeightMap& w) {
  require_same_shape(w_ref.shape(), w.shape(), "edge_loss");
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double d = w_ref[i] - w[i];
    s += d * d;
  }
  return s;
}

double total_loss(std::span<const ComplexImage> iterates, const ComplexImage& reference,
                  const EdgeWeightMap& w_ref, const EdgeWeightMap& w) {
  return rec_loss(iterates, reference) + edge_loss(w_ref, w);
}

}  // namespace ewp
