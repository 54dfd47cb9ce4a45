#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "mcwave/grid.hpp"
#include "mcwave/numerics.hpp"

namespace mcw {

/// Interleaved re, im as IEEE-754 binary64, little-endian, no header.
void write_waveform_binary(std::span<const cplx> x, const std::string& path);
ComplexBuffer read_waveform_binary(const std::string& path);

/// "re,im" per sample after optional '#' header lines.
void write_waveform_csv(std::span<const cplx> x, const std::string& path,
                        std::span<const std::string> header_lines = {});

/// One row per symbol interval, "re,im" pairs per subcarrier
/// (columns re0,im0,re1,im1,...).
void write_grid_csv(const SymbolGrid& g, const std::string& path,
                    std::span<const std::string> header_lines = {});
SymbolGrid read_grid_csv(const std::string& path);

/// One row per symbol interval, one real value per subcarrier.
void write_real_grid_csv(const Grid<double>& g, const std::string& path,
                         std::span<const std::string> header_lines = {});

/// 64-bit FNV-1a, used for config provenance hashes.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

}  // namespace mcw
