#pragma once

// Binary grid container, little-endian:
//   "EWP1" | u8 kind | u32 height | u32 width | payload
// payload: image/kspace -> (f64 re, f64 im) per cell, mask -> u8 in {0,1},
// edgemap -> f64 per cell.

#include <cstdint>
#include <filesystem>
#include <span>
#include <variant>
#include <vector>

#include "ewp/core.hpp"

namespace ewp {

enum class GridKind : std::uint8_t { image = 0, kspace = 1, mask = 2, edgemap = 3 };

const char* to_string(GridKind kind);

using AnyGrid = std::variant<ComplexImage, KSpaceGrid, SamplingMask, EdgeWeightMap>;

GridKind kind_of(const AnyGrid& grid);

constexpr std::size_t kGridHeaderBytes = 13;

std::vector<std::uint8_t> encode_grid(const AnyGrid& grid);
AnyGrid decode_grid(std::span<const std::uint8_t> bytes, GridKind expected_kind);

void write_grid(const AnyGrid& grid, const std::filesystem::path& path);
AnyGrid read_grid(const std::filesystem::path& path, GridKind expected_kind);

/// Reads just the header to discover what a file holds.
GridKind peek_kind(const std::filesystem::path& path);

ComplexImage read_image(const std::filesystem::path& path);
KSpaceGrid read_kspace(const std::filesystem::path& path);
SamplingMask read_mask(const std::filesystem::path& path);
EdgeWeightMap read_edgemap(const std::filesystem::path& path);

/// Mask files carry no generator metadata. The kind is inferred from the
/// cell pattern (all ones -> full, whole columns -> cartesian1d, otherwise
/// random2d), the nominal rate is the achieved rate, and the seed is 0.
SamplingMask mask_from_cells(std::size_t height, std::size_t width,
                             std::vector<std::uint8_t> cells);

}  // namespace ewp
