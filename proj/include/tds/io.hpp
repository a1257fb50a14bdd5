#pragma once

#include "tds/grid.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace tds {

// Plain-text matrix exchange ("tds-matrix v1"):
//   tds-matrix v1 <rows> <cols>\n
//   <cols space-separated values>\n     (repeated rows times)
// Values use %.17g, so parse(render(g)) == g bit for bit.

std::string render_matrix(const Grid& g);

/// Throws ParseError with 1-based line/column on malformed input.
Grid parse_matrix(std::string_view text);

void write_matrix(const Grid& g, const std::filesystem::path& path);
Grid read_matrix(const std::filesystem::path& path);

// Binary PGM (P5). Samples are 8-bit for maxval < 256, otherwise 16-bit
// big-endian. Pixel values are exchanged as doubles in [0, 1].

struct PgmImage {
    Grid pixels;  // sample / maxval
    std::uint32_t maxval = 255;
};

/// Rounds v * maxval half-to-even. Values outside [0, 1] throw DataError
/// unless `clamp` is set, in which case they saturate.
std::string encode_pgm(const Grid& g, std::uint32_t maxval = 255, bool clamp = true);
PgmImage decode_pgm(std::string_view bytes);

void write_pgm(const Grid& g, const std::filesystem::path& path, std::uint32_t maxval = 255,
               bool clamp = true);
PgmImage read_pgm(const std::filesystem::path& path);

/// True when the file starts with the P5 magic.
bool looks_like_pgm(const std::filesystem::path& path);

/// Reads a matrix file or a PGM (pixels in [0, 1]) based on its contents.
Grid read_grid(const std::filesystem::path& path);

}  // namespace tds
