#include "ewp/grid_io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

namespace ewp {

namespace {

constexpr std::uint8_t kMagic[4] = {'E', 'W', 'P', '1'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f64(std::vector<std::uint8_t>& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return v;
}

double get_f64(const std::uint8_t* p) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

std::uint32_t checked_u32(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "refusing to write an empty grid");
  if (n > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::DimensionOverflow, "dimension does not fit in u32");
  }
  return static_cast<std::uint32_t>(n);
}

std::size_t cell_bytes(GridKind kind) {
  switch (kind) {
    case GridKind::image:
    case GridKind::kspace: return 16;
    case GridKind::mask: return 1;
    case GridKind::edgemap: return 8;
  }
  return 0;
}

void write_header(std::vector<std::uint8_t>& out, GridKind kind, Shape shape) {
  const auto h = checked_u32(shape.height);
  const auto w = checked_u32(shape.width);
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  out.push_back(static_cast<std::uint8_t>(kind));
  put_u32(out, h);
  put_u32(out, w);
}

template <class G>
void encode_complex(std::vector<std::uint8_t>& out, const G& g) {
  require_finite(g, "write_grid");
  for (const auto& z : g.data()) {
    put_f64(out, z.real());
    put_f64(out, z.imag());
  }
}

}  // namespace

const char* to_string(GridKind kind) {
  switch (kind) {
    case GridKind::image: return "image";
    case GridKind::kspace: return "kspace";
    case GridKind::mask: return "mask";
    case GridKind::edgemap: return "edgemap";
  }
  return "unknown";
}

GridKind kind_of(const AnyGrid& grid) { return static_cast<GridKind>(grid.index()); }

std::vector<std::uint8_t> encode_grid(const AnyGrid& grid) {
  std::vector<std::uint8_t> out;
  const GridKind kind = kind_of(grid);
  std::visit(
      [&](const auto& g) {
        out.reserve(kGridHeaderBytes + g.size() * cell_bytes(kind));
        write_header(out, kind, g.shape());
      },
      grid);

  switch (kind) {
    case GridKind::image: encode_complex(out, std::get<ComplexImage>(grid)); break;
    case GridKind::kspace: encode_complex(out, std::get<KSpaceGrid>(grid)); break;
    case GridKind::mask: {
      const auto& cells = std::get<SamplingMask>(grid).cells();
      out.insert(out.end(), cells.begin(), cells.end());
      break;
    }
    case GridKind::edgemap:
      for (double w : std::get<EdgeWeightMap>(grid).weights()) put_f64(out, w);
      break;
  }
  return out;
}

AnyGrid decode_grid(std::span<const std::uint8_t> bytes, GridKind expected_kind) {
  if (!bytes.empty() &&
      std::memcmp(bytes.data(), kMagic, std::min<std::size_t>(bytes.size(), 4)) != 0) {
    throw Error(ErrorCode::BadMagic, "expected \"EWP1\"");
  }
  if (bytes.size() < kGridHeaderBytes) {
    throw Error(ErrorCode::Truncated, "header shorter than 13 bytes");
  }
  const std::uint8_t raw_kind = bytes[4];
  if (raw_kind > 3) {
    throw Error(ErrorCode::KindMismatch, "unknown kind byte " + std::to_string(raw_kind));
  }
  const auto kind = static_cast<GridKind>(raw_kind);
  if (kind != expected_kind) {
    throw Error(ErrorCode::KindMismatch, std::string("file holds ") + to_string(kind) +
                                             ", expected " + to_string(expected_kind));
  }
  const std::uint64_t h = get_u32(bytes.data() + 5);
  const std::uint64_t w = get_u32(bytes.data() + 9);
  if (h == 0 || w == 0) {
    throw Error(ErrorCode::InvalidArgument, "zero dimension in header");
  }
  // h, w < 2^32 so h*w fits in 64 bits; the byte count may not.
  const std::uint64_t cells = h * w;
  const std::uint64_t per_cell = cell_bytes(kind);
  if (cells > (std::numeric_limits<std::uint64_t>::max() - kGridHeaderBytes) / per_cell ||
      cells > std::numeric_limits<std::size_t>::max() / per_cell) {
    throw Error(ErrorCode::DimensionOverflow,
                std::to_string(h) + "x" + std::to_string(w) + " payload size overflows");
  }
  const std::uint64_t expected = kGridHeaderBytes + cells * per_cell;
  if (bytes.size() < expected) {
    throw Error(ErrorCode::Truncated, "payload has " +
                                          std::to_string(bytes.size() - kGridHeaderBytes) +
                                          " bytes, expected " +
                                          std::to_string(expected - kGridHeaderBytes));
  }
  if (bytes.size() > expected) {
    throw Error(ErrorCode::TrailingData,
                std::to_string(bytes.size() - expected) + " bytes after payload");
  }

  const std::uint8_t* p = bytes.data() + kGridHeaderBytes;
  const std::size_t n = static_cast<std::size_t>(cells);
  switch (kind) {
    case GridKind::image:
    case GridKind::kspace: {
      std::vector<cplx> data(n);
      for (std::size_t i = 0; i < n; ++i, p += 16) data[i] = {get_f64(p), get_f64(p + 8)};
      if (kind == GridKind::image) {
        ComplexImage g(h, w, std::move(data));
        require_finite(g, "read_grid");
        return g;
      }
      KSpaceGrid g(h, w, std::move(data));
      require_finite(g, "read_grid");
      return g;
    }
    case GridKind::mask: {
      std::vector<std::uint8_t> c(p, p + n);
      for (std::size_t i = 0; i < n; ++i) {
        if (c[i] > 1) {
          throw Error(ErrorCode::NonBinaryMaskCell,
                      "cell " + std::to_string(i) + " holds " + std::to_string(c[i]));
        }
      }
      return mask_from_cells(h, w, std::move(c));
    }
    case GridKind::edgemap: {
      std::vector<double> wts(n);
      for (std::size_t i = 0; i < n; ++i, p += 8) wts[i] = get_f64(p);
      return EdgeWeightMap(h, w, std::move(wts));
    }
  }
  throw Error(ErrorCode::KindMismatch, "unreachable kind");
}

void write_grid(const AnyGrid& grid, const std::filesystem::path& path) {
  const auto bytes = encode_grid(grid);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

namespace {

std::vector<std::uint8_t> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

AnyGrid read_grid(const std::filesystem::path& path, GridKind expected_kind) {
  const auto bytes = slurp(path);
  return decode_grid(bytes, expected_kind);
}

GridKind peek_kind(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  char head[5] = {};
  in.read(head, 5);
  if (std::memcmp(head, kMagic, std::min<std::size_t>(static_cast<std::size_t>(in.gcount()), 4)) != 0) {
    throw Error(ErrorCode::BadMagic, path.string());
  }
  if (in.gcount() < 5) throw Error(ErrorCode::Truncated, path.string());
  const auto k = static_cast<std::uint8_t>(head[4]);
  if (k > 3) throw Error(ErrorCode::KindMismatch, "unknown kind byte " + std::to_string(k));
  return static_cast<GridKind>(k);
}

ComplexImage read_image(const std::filesystem::path& path) {
  return std::get<ComplexImage>(read_grid(path, GridKind::image));
}
KSpaceGrid read_kspace(const std::filesystem::path& path) {
  return std::get<KSpaceGrid>(read_grid(path, GridKind::kspace));
}
SamplingMask read_mask(const std::filesystem::path& path) {
  return std::get<SamplingMask>(read_grid(path, GridKind::mask));
}
EdgeWeightMap read_edgemap(const std::filesystem::path& path) {
  return std::get<EdgeWeightMap>(read_grid(path, GridKind::edgemap));
}

SamplingMask mask_from_cells(std::size_t height, std::size_t width,
                             std::vector<std::uint8_t> cells) {
  std::size_t ones = 0;
  for (auto c : cells) ones += (c == 1);
  MaskKind kind = MaskKind::random2d;
  if (ones == cells.size()) {
    kind = MaskKind::full;
  } else {
    bool columns = true;
    for (std::size_t c = 0; c < width && columns; ++c) {
      for (std::size_t r = 1; r < height; ++r) {
        if (cells[r * width + c] != cells[c]) {
          columns = false;
          break;
        }
      }
    }
    if (columns) kind = MaskKind::cartesian1d;
  }
  const std::size_t total = cells.size();
  const double rate = static_cast<double>(ones) / static_cast<double>(total);
  return SamplingMask(height, width, std::move(cells), kind, 0, rate);
}

}  // namespace ewp
