/**
 * @file font.hpp
 * @brief Built-in 7x5 block font used by the synthetic corpus generator.
 */
#pragma once

#include <array>

#include "lpr/image.hpp"

namespace lpr {

inline constexpr int kFontRows = 7;
inline constexpr int kFontCols = 5;

/// True when the generator can draw this character.
bool font_has(char ch);

/// Row-major 7x5 ink mask. Throws std::invalid_argument for uncovered
/// characters. Every row of every covered character carries ink, so a row of
/// rendered glyphs produces binary transitions on every scanline.
std::array<std::uint8_t, kFontRows * kFontCols> font_bitmap(char ch);

/// Scales the bitmap by an integer factor. Bold widens every stroke by one
/// extra font column before scaling. Throws for uncovered characters or
/// scale < 1.
BinaryImage render_glyph(char ch, int scale, bool bold = false);

}  // namespace lpr
