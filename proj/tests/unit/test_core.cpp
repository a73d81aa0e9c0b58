#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ewp/core.hpp"
#include "ewp/grid_io.hpp"
#include "testing.hpp"

using namespace ewp;
using ewp::testing::Gen;

namespace {

std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() / (std::string("ewp_core_") + name);
}

std::vector<std::uint8_t> header(std::uint8_t kind, std::uint32_t h, std::uint32_t w) {
  std::vector<std::uint8_t> b{'E', 'W', 'P', '1', kind};
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>(h >> (8 * i)));
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>(w >> (8 * i)));
  return b;
}

ErrorCode decode_error(const std::vector<std::uint8_t>& bytes, GridKind kind) {
  try {
    (void)decode_grid(bytes, kind);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("decode succeeded");
  return ErrorCode::Io;
}

}  // namespace

TEST_SUITE("core types") {
  TEST_CASE("grids reject zero dimensions") {
    CHECK_THROWS_AS(ComplexImage(0, 4), Error);
    CHECK_THROWS_AS(ComplexImage(4, 0), Error);
    CHECK_THROWS_AS(EdgeWeightMap(0, 3), Error);
    CHECK_THROWS_AS(SamplingMask(0, 1, {}, MaskKind::full, 0, 1.0), Error);
  }

  TEST_CASE("grid data length must match the shape") {
    CHECK_THROWS_AS(ComplexImage(2, 2, std::vector<cplx>(3)), Error);
    CHECK_NOTHROW(ComplexImage(2, 3, std::vector<cplx>(6)));
  }

  TEST_CASE("edge weights must lie in [0,1]") {
    CHECK_THROWS_AS(EdgeWeightMap(1, 2, std::vector<double>{0.5, 1.5}), Error);
    CHECK_THROWS_AS(EdgeWeightMap(1, 2, std::vector<double>{-0.1, 0.5}), Error);
    CHECK_THROWS_AS(EdgeWeightMap(1, 1, std::vector<double>{std::nan("")}), Error);
    CHECK_NOTHROW(EdgeWeightMap(1, 2, std::vector<double>{0.0, 1.0}));
  }

  TEST_CASE("mask cells must be binary") {
    CHECK_THROWS_AS(SamplingMask(1, 2, {0, 2}, MaskKind::random2d, 0, 0.5), Error);
    const SamplingMask m(2, 2, {1, 0, 1, 1}, MaskKind::random2d, 3, 0.75);
    CHECK(m.sampled_count() == 3);
    CHECK(m.achieved_rate() == doctest::Approx(0.75));
    CHECK(SamplingMask::full(3, 5).sampled_count() == 15);
  }

  TEST_CASE("frame coefficients have 3 L + 1 image-sized bands") {
    const FrameCoeffs c(8, 16, 2);
    CHECK(c.subband_count() == 7);
    for (const auto& b : c.subbands()) CHECK(b.size() == 128);
    CHECK_THROWS_AS(FrameCoeffs(8, 8, 2, std::vector<std::vector<cplx>>(6, std::vector<cplx>(64))),
                    Error);
    CHECK_THROWS_AS(FrameCoeffs(8, 8, 1, std::vector<std::vector<cplx>>(4, std::vector<cplx>(63))),
                    Error);
  }

  TEST_CASE("require_finite flags NaN and infinity") {
    ComplexImage x(2, 2);
    CHECK_NOTHROW(require_finite(x, "x"));
    x[3] = cplx(std::numeric_limits<double>::infinity(), 0.0);
    CHECK_THROWS_AS(require_finite(x, "x"), Error);
  }
}

TEST_SUITE("grid files") {
  TEST_CASE("4x4 image of ones survives a write/read round trip") {
    const ComplexImage x(4, 4, cplx(1.0, 0.0));
    const auto path = temp_file("ones.ewp");
    write_grid(x, path);
    CHECK(read_image(path) == x);
    std::filesystem::remove(path);
  }

  TEST_CASE("2x2 full mask payload is four 0x01 bytes after the header") {
    const auto bytes = encode_grid(SamplingMask::full(2, 2));
    auto expected = header(2, 2, 2);
    expected.insert(expected.end(), {1, 1, 1, 1});
    CHECK(bytes == expected);
    CHECK(bytes.size() == kGridHeaderBytes + 4);
  }

  TEST_CASE("image payload is little-endian (re, im) doubles") {
    const ComplexImage x(1, 1, cplx(1.0, -2.0));
    const auto bytes = encode_grid(x);
    REQUIRE(bytes.size() == kGridHeaderBytes + 16);
    double re = 0, im = 0;
    std::memcpy(&re, bytes.data() + kGridHeaderBytes, 8);
    std::memcpy(&im, bytes.data() + kGridHeaderBytes + 8, 8);
    CHECK(re == 1.0);
    CHECK(im == -2.0);
    CHECK(bytes[4] == 0);
  }

  TEST_CASE("equal grids encode to identical bytes") {
    Gen g(5);
    const ComplexImage x = g.image(3, 7);
    const ComplexImage y = x;
    CHECK(encode_grid(x) == encode_grid(y));
  }

  TEST_CASE("decode errors are reported distinctly") {
    auto good = encode_grid(SamplingMask::full(2, 2));

    auto bad_magic = good;
    bad_magic[0] = 'X';
    CHECK(decode_error(bad_magic, GridKind::mask) == ErrorCode::BadMagic);

    auto truncated = good;
    truncated.pop_back();
    CHECK(decode_error(truncated, GridKind::mask) == ErrorCode::Truncated);
    CHECK(decode_error({'E', 'W', 'P'}, GridKind::mask) == ErrorCode::Truncated);

    auto trailing = good;
    trailing.push_back(0);
    CHECK(decode_error(trailing, GridKind::mask) == ErrorCode::TrailingData);

    auto non_binary = good;
    non_binary.back() = 2;
    CHECK(decode_error(non_binary, GridKind::mask) == ErrorCode::NonBinaryMaskCell);

    CHECK(decode_error(good, GridKind::image) == ErrorCode::KindMismatch);

    auto huge = header(0, 0xFFFFFFFFu, 0xFFFFFFFFu);
    CHECK(decode_error(huge, GridKind::image) == ErrorCode::DimensionOverflow);

    auto zero = header(2, 0, 4);
    CHECK(decode_error(zero, GridKind::mask) == ErrorCode::InvalidArgument);

    auto nan_image = header(0, 1, 1);
    const double nan = std::nan(""), zero_d = 0.0;
    nan_image.resize(nan_image.size() + 16);
    std::memcpy(nan_image.data() + kGridHeaderBytes, &nan, 8);
    std::memcpy(nan_image.data() + kGridHeaderBytes + 8, &zero_d, 8);
    CHECK(decode_error(nan_image, GridKind::image) == ErrorCode::InvalidValue);

    auto bad_weight = header(3, 1, 1);
    const double two = 2.0;
    bad_weight.resize(bad_weight.size() + 8);
    std::memcpy(bad_weight.data() + kGridHeaderBytes, &two, 8);
    CHECK(decode_error(bad_weight, GridKind::edgemap) == ErrorCode::InvalidValue);
  }

  TEST_CASE("missing file is an I/O error") {
    try {
      (void)read_image(temp_file("does_not_exist.ewp"));
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Io);
    }
  }

  TEST_CASE("property: decode(encode(g)) == g for random grids of every kind") {
    Gen g(11);
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t h = g.index(1, 9), w = g.index(1, 9);
      const ComplexImage img = g.image(h, w);
      CHECK(std::get<ComplexImage>(decode_grid(encode_grid(img), GridKind::image)) == img);

      const KSpaceGrid k = g.kspace(h, w);
      CHECK(std::get<KSpaceGrid>(decode_grid(encode_grid(k), GridKind::kspace)) == k);

      const EdgeWeightMap e(h, w, g.weights(h * w));
      CHECK(std::get<EdgeWeightMap>(decode_grid(encode_grid(e), GridKind::edgemap)) == e);

      std::vector<std::uint8_t> cells(h * w);
      for (auto& c : cells) c = static_cast<std::uint8_t>(g.index(0, 1));
      const SamplingMask m = mask_from_cells(h, w, cells);
      const auto back = std::get<SamplingMask>(decode_grid(encode_grid(m), GridKind::mask));
      CHECK(back.cells() == m.cells());
      CHECK(back.kind() == m.kind());
    }
  }

  TEST_CASE("peek_kind reads only the header") {
    const auto path = temp_file("peek.ewp");
    write_grid(EdgeWeightMap(2, 3, 0.5), path);
    CHECK(peek_kind(path) == GridKind::edgemap);
    CHECK_THROWS_AS(read_image(path), Error);
    std::filesystem::remove(path);
  }

  TEST_CASE("mask kind is inferred from the cell pattern") {
    CHECK(mask_from_cells(2, 2, {1, 1, 1, 1}).kind() == MaskKind::full);
    CHECK(mask_from_cells(2, 3, {1, 0, 1, 1, 0, 1}).kind() == MaskKind::cartesian1d);
    CHECK(mask_from_cells(2, 2, {1, 0, 0, 1}).kind() == MaskKind::random2d);
  }
}
