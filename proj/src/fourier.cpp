#include "ewp/fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace ewp {

namespace {

struct FftwDeleter {
  void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};
using AlignedBuffer = std::unique_ptr<fftw_complex[], FftwDeleter>;

AlignedBuffer make_buffer(std::size_t n) {
  auto* p = fftw_alloc_complex(n);
  if (p == nullptr) throw Error(ErrorCode::InvalidArgument, "FFTW allocation failed");
  return AlignedBuffer(p);
}

cplx* as_cplx(const AlignedBuffer& b) { return reinterpret_cast<cplx*>(b.get()); }

// FFTW planning is not thread-safe, execution with the new-array functions is.
// Plans are made once per shape and direction with FFTW_ESTIMATE, so the
// algorithm, and therefore every output bit, is the same on every run. All
// execution buffers come from fftw_alloc_complex and share the planned alignment.
//
// A 2D transform is computed as contiguous row transforms with a blocked
// transpose in between; with FFTW_ESTIMATE this is much faster than the
// strided column pass FFTW picks for a rank-2 plan.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  /// `rows` independent transforms of length `length`, stored contiguously.
  fftw_plan rows(std::size_t rows, std::size_t length, int sign) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_tuple(rows, length, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    auto in = make_buffer(rows * length);
    auto out = make_buffer(rows * length);
    const int n[1] = {static_cast<int>(length)};
    const int dist = static_cast<int>(length);
    fftw_plan plan = fftw_plan_many_dft(1, n, static_cast<int>(rows), in.get(), nullptr, 1, dist,
                                        out.get(), nullptr, 1, dist, sign, FFTW_ESTIMATE);
    if (plan == nullptr) {
      throw Error(ErrorCode::InvalidArgument,
                  "FFTW could not plan " + std::to_string(rows) + "x" + std::to_string(length));
    }
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<std::size_t, std::size_t, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

/// dst (w x h) = transpose of src (h x w).
void transpose(const cplx* src, cplx* dst, std::size_t h, std::size_t w) {
  constexpr std::size_t kBlock = 32;
  for (std::size_t r0 = 0; r0 < h; r0 += kBlock) {
    const std::size_t r1 = std::min(r0 + kBlock, h);
    for (std::size_t c0 = 0; c0 < w; c0 += kBlock) {
      const std::size_t c1 = std::min(c0 + kBlock, w);
      for (std::size_t r = r0; r < r1; ++r) {
        for (std::size_t c = c0; c < c1; ++c) dst[c * h + r] = src[r * w + c];
      }
    }
  }
}

/// Unnormalised 2D DFT engine for one shape. Frequencies come out (and go in)
/// transposed: element (c, r) of the w x h result is frequency (r, c).
class Fft2 {
 public:
  Fft2(std::size_t h, std::size_t w)
      : h_(h),
        w_(w),
        fwd_rows_(plan_cache().rows(h, w, FFTW_FORWARD)),
        fwd_cols_(plan_cache().rows(w, h, FFTW_FORWARD)),
        bwd_cols_(plan_cache().rows(w, h, FFTW_BACKWARD)),
        bwd_rows_(plan_cache().rows(h, w, FFTW_BACKWARD)),
        a_(make_buffer(h * w)),
        b_(make_buffer(h * w)),
        c_(make_buffer(h * w)) {}

  /// Image-domain input, written by the caller in natural row-major order.
  cplx* input() { return as_cplx(a_); }

  /// input() -> transposed spectrum, returned pointer valid until the next call.
  cplx* forward() {
    fftw_execute_dft(fwd_rows_, a_.get(), b_.get());
    transpose(as_cplx(b_), as_cplx(c_), h_, w_);
    fftw_execute_dft(fwd_cols_, c_.get(), b_.get());
    return as_cplx(b_);
  }

  /// Transposed spectrum buffer to be filled before backward().
  cplx* spectrum() { return as_cplx(b_); }

  /// Inverse transform along height only: spectrum() -> natural-order grid whose
  /// columns are still raw width frequencies.
  cplx* backward_height() {
    fftw_execute_dft(bwd_cols_, b_.get(), c_.get());
    transpose(as_cplx(c_), as_cplx(b_), w_, h_);
    return as_cplx(b_);
  }

  /// Transform along width only: input() -> row spectra in c.
  cplx* forward_width() {
    fftw_execute_dft(fwd_rows_, a_.get(), c_.get());
    return as_cplx(c_);
  }

  /// Inverse along width only: the buffer from forward_width() -> natural order.
  cplx* backward_width() {
    fftw_execute_dft(bwd_rows_, c_.get(), a_.get());
    return as_cplx(a_);
  }

  /// spectrum() -> natural-order image, returned pointer valid until the next call.
  cplx* backward() {
    fftw_execute_dft(bwd_cols_, b_.get(), c_.get());
    transpose(as_cplx(c_), as_cplx(b_), w_, h_);
    fftw_execute_dft(bwd_rows_, b_.get(), a_.get());
    return as_cplx(a_);
  }

 private:
  std::size_t h_, w_;
  fftw_plan fwd_rows_, fwd_cols_, bwd_cols_, bwd_rows_;
  AlignedBuffer a_, b_, c_;
};

double unitary_scale(std::size_t h, std::size_t w) {
  return 1.0 / std::sqrt(static_cast<double>(h * w));
}

/// Index into the transposed raw spectrum of the centred k-space cell (r, c).
/// Centred (r, c) holds raw frequency ((r + h - h/2) mod h, (c + w - w/2) mod w).
std::size_t transposed_raw_index(std::size_t r, std::size_t c, std::size_t h, std::size_t w) {
  const std::size_t fr = (r + h - h / 2) % h;
  const std::size_t fc = (c + w - w / 2) % w;
  return fc * h + fr;
}

}  // namespace

void DcConfig::validate() const {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::InvalidArgument, "gamma must be a finite nonnegative number");
  }
}

KSpaceGrid fft2_centered(const ComplexImage& image) {
  const std::size_t h = image.height();
  const std::size_t w = image.width();
  Fft2 fft(h, w);
  std::copy(image.data().begin(), image.data().end(), fft.input());
  const cplx* spec = fft.forward();

  const double scale = unitary_scale(h, w);
  KSpaceGrid k(h, w);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) k(r, c) = spec[transposed_raw_index(r, c, h, w)] * scale;
  }
  return k;
}

ComplexImage ifft2_centered(const KSpaceGrid& kspace) {
  const std::size_t h = kspace.height();
  const std::size_t w = kspace.width();
  Fft2 fft(h, w);
  cplx* spec = fft.spectrum();
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) spec[transposed_raw_index(r, c, h, w)] = kspace(r, c);
  }
  const cplx* raw = fft.backward();

  const double scale = unitary_scale(h, w);
  ComplexImage x(h, w);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = raw[i] * scale;
  return x;
}

KSpaceGrid apply_mask(const KSpaceGrid& kspace, const SamplingMask& mask) {
  require_same_shape(kspace.shape(), mask.shape(), "apply_mask");
  KSpaceGrid out(kspace.shape());
  for (std::size_t i = 0; i < kspace.size(); ++i) {
    if (mask[i] != 0) out[i] = kspace[i];
  }
  return out;
}

// --- DcOperator --------------------------------------------------------------

// A mask that keeps or drops whole columns commutes with the transform along
// height, so F^H M (y - M F x) = F_w^H M (F_h^H y - F_w x) and each step needs
// transforms along width only. Other masks use the full 2D transform, with the
// spectrum kept in transposed order to skip a transpose each way.
struct DcOperator::Impl {
  std::size_t h, w;
  double scale;
  bool columns;
  std::vector<std::uint8_t> mask;  // raw FFT order; transposed unless `columns`
  std::vector<cplx> y;             // masked data in the same order; F_h^H y if `columns`
  Fft2 fft;
};

namespace {

bool is_column_mask(const SamplingMask& mask) {
  for (std::size_t r = 1; r < mask.height(); ++r) {
    for (std::size_t c = 0; c < mask.width(); ++c) {
      if (mask(r, c) != mask(0, c)) return false;
    }
  }
  return true;
}

}  // namespace

DcOperator::DcOperator(const KSpaceGrid& y, const SamplingMask& mask) {
  require_same_shape(y.shape(), mask.shape(), "DcOperator");
  const std::size_t h = y.height(), w = y.width(), n = y.size();
  impl_ = std::make_unique<Impl>(Impl{h, w, unitary_scale(h, w), is_column_mask(mask),
                                      std::vector<std::uint8_t>(n), std::vector<cplx>(n),
                                      Fft2(h, w)});
  Impl& s = *impl_;
  if (!s.columns) {
    for (std::size_t r = 0; r < h; ++r) {
      for (std::size_t c = 0; c < w; ++c) {
        const std::size_t t = transposed_raw_index(r, c, h, w);
        s.mask[t] = mask(r, c);
        if (mask(r, c) != 0) s.y[t] = y(r, c);
      }
    }
    return;
  }

  cplx* spec = s.fft.spectrum();
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      spec[transposed_raw_index(r, c, h, w)] = mask(r, c) != 0 ? y(r, c) : cplx{};
    }
  }
  const cplx* hybrid = s.fft.backward_height();
  const double height_scale = 1.0 / std::sqrt(static_cast<double>(h));
  for (std::size_t c = 0; c < w; ++c) {
    const std::size_t fc = (c + w - w / 2) % w;
    for (std::size_t r = 0; r < h; ++r) s.mask[r * w + fc] = mask(0, c);
  }
  for (std::size_t i = 0; i < n; ++i) s.y[i] = s.mask[i] != 0 ? hybrid[i] * height_scale : cplx{};
}

DcOperator::~DcOperator() = default;
DcOperator::DcOperator(DcOperator&&) noexcept = default;
DcOperator& DcOperator::operator=(DcOperator&&) noexcept = default;

Shape DcOperator::shape() const noexcept { return {impl_->h, impl_->w}; }

void DcOperator::step(const ComplexImage& x, const DcConfig& cfg, ComplexImage& out) {
  cfg.validate();
  Impl& s = *impl_;
  require_same_shape(x.shape(), shape(), "DcOperator::step (x)");
  require_same_shape(out.shape(), shape(), "DcOperator::step (out)");
  const std::size_t n = s.h * s.w;
  if (cfg.gamma == 0.0) {
    if (&out != &x) out = x;
    return;
  }

  std::copy(x.data().begin(), x.data().end(), s.fft.input());
  const cplx* correction = nullptr;
  double g = 0.0;
  if (s.columns) {
    const double width_scale = 1.0 / std::sqrt(static_cast<double>(s.w));
    cplx* spec = s.fft.forward_width();
    for (std::size_t i = 0; i < n; ++i) {
      spec[i] = s.mask[i] != 0 ? s.y[i] - spec[i] * width_scale : cplx{};
    }
    correction = s.fft.backward_width();
    g = cfg.gamma * width_scale;
  } else {
    cplx* spec = s.fft.forward();
    for (std::size_t i = 0; i < n; ++i) {
      spec[i] = s.mask[i] != 0 ? s.y[i] - spec[i] * s.scale : cplx{};
    }
    correction = s.fft.backward();
    g = cfg.gamma * s.scale;
  }
  const cplx* xs = x.data().data();
  cplx* o = out.data().data();
  for (std::size_t i = 0; i < n; ++i) o[i] = xs[i] + g * correction[i];
}

ComplexImage dc_gradient_step(const ComplexImage& x, const KSpaceGrid& y,
                              const SamplingMask& mask, const DcConfig& cfg) {
  cfg.validate();
  require_same_shape(x.shape(), y.shape(), "dc_gradient_step (x vs y)");
  require_same_shape(x.shape(), mask.shape(), "dc_gradient_step (x vs mask)");
  if (cfg.gamma == 0.0) return x;
  DcOperator op(y, mask);
  ComplexImage out(x.shape());
  op.step(x, cfg, out);
  return out;
}

}  // namespace ewp
