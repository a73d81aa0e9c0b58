#include "ewp/frame.hpp"

#include <algorithm>
#include <type_traits>

#include "ewp/threshold.hpp"

namespace ewp {

namespace {

#define EWP_VECTOR_CLONES __attribute__((target_clones("avx2", "default")))

// One row of width-axis analysis: low[c] = (x[c] + x[c-d]) / 2, high likewise.
EWP_VECTOR_CLONES
void analyze_row(const cplx* row, std::size_t w, std::size_t d, cplx* lo, cplx* hi) {
  for (std::size_t c = 0; c < d; ++c) {
    const cplx& prev = row[c + w - d];
    lo[c] = 0.5 * (row[c] + prev);
    hi[c] = 0.5 * (row[c] - prev);
  }
  for (std::size_t c = d; c < w; ++c) {
    const cplx& prev = row[c - d];
    lo[c] = 0.5 * (row[c] + prev);
    hi[c] = 0.5 * (row[c] - prev);
  }
}

EWP_VECTOR_CLONES
void analyze_height_row(const cplx* lo_r, const cplx* hi_r, const cplx* lo_p, const cplx* hi_p,
                        std::size_t w, cplx* o, cplx* o0, cplx* o1, cplx* o2) {
  for (std::size_t c = 0; c < w; ++c) {
    o[c] = 0.5 * (lo_r[c] + lo_p[c]);
    o0[c] = 0.5 * (lo_r[c] - lo_p[c]);
    o1[c] = 0.5 * (hi_r[c] + hi_p[c]);
    o2[c] = 0.5 * (hi_r[c] - hi_p[c]);
  }
}

EWP_VECTOR_CLONES
void synthesize_row(const cplx* lo, const cplx* lo_n, const cplx* h0, const cplx* h0_n,
                    const cplx* h1, const cplx* h1_n, const cplx* h2, const cplx* h2_n,
                    std::size_t w, std::size_t d, cplx* a, cplx* b, cplx* o) {
  for (std::size_t c = 0; c < w; ++c) {
    a[c] = 0.5 * (lo[c] + lo_n[c]) + 0.5 * (h0[c] - h0_n[c]);
    b[c] = 0.5 * (h1[c] + h1_n[c]) + 0.5 * (h2[c] - h2_n[c]);
  }
  for (std::size_t c = 0; c + d < w; ++c) {
    o[c] = 0.5 * (a[c] + a[c + d]) + 0.5 * (b[c] - b[c + d]);
  }
  for (std::size_t c = w - d; c < w; ++c) {
    o[c] = 0.5 * (a[c] + a[c + d - w]) + 0.5 * (b[c] - b[c + d - w]);
  }
}

struct NoShrink {};

// Height-axis analysis of the two width-analysed rows r and r - d gives the
// four outputs of row r; rows are recomputed rather than stored.
template <class Shrink>
void forward_impl(const ComplexImage& image, FrameCoeffs& out, FrameWorkspace& ws,
                  const Shrink& shrink);

void check_levels(std::size_t h, std::size_t w, std::size_t levels) {
  if (levels == 0) throw Error(ErrorCode::InvalidArgument, "levels must be positive");
  if (levels >= 32) throw Error(ErrorCode::InvalidArgument, "too many levels");
  const std::size_t block = std::size_t{1} << levels;
  if (h % block != 0 || w % block != 0) {
    throw Error(ErrorCode::InvalidArgument,
                "image " + std::to_string(h) + "x" + std::to_string(w) +
                    " is not divisible by 2^" + std::to_string(levels));
  }
}

void ensure_size(std::vector<cplx>& v, std::size_t n) {
  if (v.size() != n) v.assign(n, cplx{});
}


template <class Shrink>
void forward_impl(const ComplexImage& image, FrameCoeffs& out, FrameWorkspace& ws,
                  const Shrink& shrink) {
  const std::size_t h = image.height();
  const std::size_t w = image.width();
  const std::size_t levels = out.levels();
  require_same_shape(image.shape(), out.shape(), "frame_forward_into");
  check_levels(h, w, levels);
  if (out.subband_count() != FrameCoeffs::band_count(levels)) {
    throw Error(ErrorCode::InvalidArgument, "sub-band count inconsistent with levels");
  }
  constexpr bool kShrink = std::is_same_v<Shrink, DetailShrink>;
  const double* thresholds = nullptr;
  double uniform = 0.0;
  if constexpr (kShrink) {
    if (!shrink.thresholds.empty()) {
      if (shrink.thresholds.size() != h * w) {
        throw Error(ErrorCode::ShapeMismatch, "threshold map size does not match the image");
      }
      thresholds = shrink.thresholds.data();
    }
    uniform = shrink.uniform;
  }

  const std::size_t n = h * w;
  ensure_size(ws.a, n);
  ensure_size(ws.b, n);
  // Width-analysed rows are kept in a ring of 2^(levels-1) slots so that row
  // r - d, needed again at row r, is not recomputed.
  const std::size_t slots = std::size_t{1} << (levels - 1);
  ensure_size(ws.rows, 2 * w * (slots + 1));
  std::vector<cplx*> ring(slots + 1);

  // Low-pass output ping-pongs between the two scratch images and ends in the
  // approximation band.
  const cplx* src = image.data().data();
  for (std::size_t level = 0; level < levels; ++level) {
    const std::size_t d = std::size_t{1} << level;
    cplx* dst = level + 1 == levels ? out.approximation().data()
                                    : (level % 2 == 0 ? ws.a.data() : ws.b.data());
    cplx* b0 = out.subband(3 * level).data();
    cplx* b1 = out.subband(3 * level + 1).data();
    cplx* b2 = out.subband(3 * level + 2).data();
    for (std::size_t i = 0; i <= slots; ++i) ring[i] = ws.rows.data() + 2 * w * i;
    for (std::size_t r = 0; r < h; ++r) {
      cplx*& slot = ring[r % d];
      cplx* lo_p = slot;
      cplx* hi_p = lo_p + w;
      if (r < d) analyze_row(src + (r + h - d) * w, w, d, lo_p, hi_p);
      cplx* lo_r = ring[slots];
      cplx* hi_r = lo_r + w;
      analyze_row(src + r * w, w, d, lo_r, hi_r);
      cplx* o = dst + r * w;
      cplx* o0 = b0 + r * w;
      cplx* o1 = b1 + r * w;
      cplx* o2 = b2 + r * w;
      analyze_height_row(lo_r, hi_r, lo_p, hi_p, w, o, o0, o1, o2);
      // Row r takes the slot of row r - d, which is no longer needed.
      std::swap(slot, ring[slots]);
      if constexpr (kShrink) {
        const double* t = thresholds != nullptr ? thresholds + r * w : nullptr;
        if (t != nullptr || uniform != 0.0) {
          soft_threshold_row(o0, w, t, uniform);
          soft_threshold_row(o1, w, t, uniform);
          soft_threshold_row(o2, w, t, uniform);
          if (shrink.approximation && level + 1 == levels) soft_threshold_row(o, w, t, uniform);
        }
      }
    }
    src = dst;
  }
}

}  // namespace

void frame_forward_into(const ComplexImage& image, FrameCoeffs& out, FrameWorkspace& ws) {
  forward_impl(image, out, ws, NoShrink{});
}

void frame_forward_shrink_into(const ComplexImage& image, FrameCoeffs& out, FrameWorkspace& ws,
                               const DetailShrink& shrink) {
  forward_impl(image, out, ws, shrink);
}

void frame_backward_into(const FrameCoeffs& coeffs, ComplexImage& out, FrameWorkspace& ws) {
  const std::size_t h = coeffs.height();
  const std::size_t w = coeffs.width();
  const std::size_t levels = coeffs.levels();
  require_same_shape(coeffs.shape(), out.shape(), "frame_backward_into");
  check_levels(h, w, levels);
  if (coeffs.subband_count() != FrameCoeffs::band_count(levels)) {
    throw Error(ErrorCode::InvalidArgument, "sub-band count inconsistent with levels");
  }
  const std::size_t n = h * w;
  ensure_size(ws.a, n);
  ensure_size(ws.b, n);
  ensure_size(ws.rows, 4 * w);
  cplx* a = ws.rows.data();
  cplx* b = a + w;

  // Adjoint of each filter pair: y[i] = (lo[i] + lo[i + d]) / 2 + (hi[i] - hi[i + d]) / 2,
  // first along height into rows a and b, then along width into the output.
  const cplx* approx = coeffs.approximation().data();
  for (std::size_t level = levels; level-- > 0;) {
    const std::size_t d = std::size_t{1} << level;
    cplx* dst = level == 0 ? out.data().data() : (level % 2 == 1 ? ws.a.data() : ws.b.data());
    const cplx* b0 = coeffs.subband(3 * level).data();
    const cplx* b1 = coeffs.subband(3 * level + 1).data();
    const cplx* b2 = coeffs.subband(3 * level + 2).data();
    for (std::size_t r = 0; r < h; ++r) {
      const std::size_t nr = r + d < h ? r + d : r + d - h;
      const cplx* lo = approx + r * w;
      const cplx* lo_n = approx + nr * w;
      const cplx* h0 = b0 + r * w;
      const cplx* h0_n = b0 + nr * w;
      const cplx* h1 = b1 + r * w;
      const cplx* h1_n = b1 + nr * w;
      const cplx* h2 = b2 + r * w;
      const cplx* h2_n = b2 + nr * w;
      synthesize_row(lo, lo_n, h0, h0_n, h1, h1_n, h2, h2_n, w, d, a, b, dst + r * w);
    }
    approx = dst;
  }
}

FrameCoeffs frame_forward(const ComplexImage& image, std::size_t levels) {
  check_levels(image.height(), image.width(), levels);
  FrameCoeffs out(image.height(), image.width(), levels);
  FrameWorkspace ws;
  frame_forward_into(image, out, ws);
  return out;
}

ComplexImage frame_backward(const FrameCoeffs& coeffs) {
  ComplexImage out(coeffs.shape());
  FrameWorkspace ws;
  frame_backward_into(coeffs, out, ws);
  return out;
}

}  // namespace ewp
