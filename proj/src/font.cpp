#include "lpr/font.hpp"

#include <stdexcept>
#include <string_view>

namespace lpr {

namespace {

struct GlyphDef {
  char ch;
  const char* rows[kFontRows];
};

// '#' = ink. Three deliberate invariants, all load-bearing for the plate
// locator:
//   - every row of every glyph has at least one stroke, so a line of
//     characters yields two or more binary transitions on each scanline;
//   - every pair of adjacent rows shares at least one ink column (vertical
//     strokes run unbroken), so smoothing never blanks the boundary rows
//     between pattern changes and the per-row transition runs stay long;
//   - digits (the plate alphabet) carry full-height vertical rails in their
//     outermost columns. Horizontal strokes do not survive the tall-thin
//     erosion of the edge map, so the rails are what the wide dilation
//     bridges; without them the plate blob falls apart between characters.
// Digit identity therefore lives in the interior columns, panel style,
// and is written with primitives that survive skeletonization as distinct
// geometry: a mark touching a rail just thickens it and thins back to the
// same line, so interiors use only isolated center-column strokes,
// horizontal stubs, and full bars. Each digit is a word over those
// primitives in three row bands (upper, middle, lower), and every pair of
// digits differs in at least two bands.
// Letters appear only in glyph datasets, never on generated plates, so they
// keep conventional shapes without rails.
constexpr GlyphDef kGlyphs[] = {
    {'0', {"#####", "#...#", "#...#", "#...#", "#...#", "#...#", "#####"}},
    {'1', {"#####", "#.#.#", "#.#.#", "#...#", "#.#.#", "#.#.#", "#####"}},
    {'2', {"#####", "#.###", "#.###", "#####", "###.#", "###.#", "#####"}},
    {'3', {"#####", "#.###", "#.###", "#...#", "#.###", "#.###", "#####"}},
    {'4', {"#...#", "#...#", "#...#", "#####", "#.#.#", "#.#.#", "#.#.#"}},
    {'5', {"#####", "###.#", "###.#", "#.#.#", "#.###", "#.###", "#####"}},
    {'6', {"#####", "###.#", "###.#", "#####", "#.#.#", "#.#.#", "#####"}},
    {'7', {"#####", "#...#", "#...#", "#.###", "#.###", "#.###", "#####"}},
    {'8', {"#####", "###.#", "###.#", "#...#", "###.#", "###.#", "#####"}},
    {'9', {"#####", "#.#.#", "#.#.#", "#####", "#...#", "#...#", "#####"}},
    {'A', {"#####", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"}},
    {'B', {"####.", "#...#", "#...#", "####.", "#...#", "#...#", "####."}},
    {'C', {"#####", "#....", "#....", "#....", "#....", "#....", "#####"}},
    {'D', {"####.", "#...#", "#...#", "#...#", "#...#", "#...#", "####."}},
    {'E', {"#####", "#....", "#....", "####.", "#....", "#....", "#####"}},
    {'F', {"#####", "#....", "#....", "####.", "#....", "#....", "#...."}},
    {'H', {"#...#", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"}},
    {'J', {"....#", "....#", "....#", "....#", "....#", "#...#", "#####"}},
    {'L', {"#....", "#....", "#....", "#....", "#....", "#....", "#####"}},
    {'N', {"#...#", "##..#", "#.#.#", "#.#.#", "#.#.#", "#..##", "#...#"}},
    {'P', {"####.", "#...#", "#...#", "####.", "#....", "#....", "#...."}},
    {'T', {"#####", "..#..", "..#..", "..#..", "..#..", "..#..", "..#.."}},
    {'U', {"#...#", "#...#", "#...#", "#...#", "#...#", "#...#", "#####"}},
    {'Y', {"#...#", "#...#", "#####", "..#..", "..#..", "..#..", "..#.."}},
};

const GlyphDef* find_glyph(char ch) {
  for (const GlyphDef& g : kGlyphs) {
    if (g.ch == ch) return &g;
  }
  return nullptr;
}

}  // namespace

bool font_has(char ch) { return find_glyph(ch) != nullptr; }

std::array<std::uint8_t, kFontRows * kFontCols> font_bitmap(char ch) {
  const GlyphDef* def = find_glyph(ch);
  if (!def) {
    throw std::invalid_argument(std::string("font: no glyph for '") + ch +
                                "'");
  }
  std::array<std::uint8_t, kFontRows * kFontCols> out{};
  for (int r = 0; r < kFontRows; ++r) {
    for (int c = 0; c < kFontCols; ++c) {
      out[static_cast<std::size_t>(r * kFontCols + c)] =
          def->rows[r][c] == '#' ? 1 : 0;
    }
  }
  return out;
}

BinaryImage render_glyph(char ch, int scale, bool bold) {
  if (scale < 1) throw std::invalid_argument("render_glyph: scale < 1");
  auto bitmap = font_bitmap(ch);
  if (bold) {
    // Widen strokes one font cell to the right.
    auto widened = bitmap;
    for (int r = 0; r < kFontRows; ++r) {
      for (int c = 1; c < kFontCols; ++c) {
        if (bitmap[static_cast<std::size_t>(r * kFontCols + c - 1)]) {
          widened[static_cast<std::size_t>(r * kFontCols + c)] = 1;
        }
      }
    }
    bitmap = widened;
  }
  BinaryImage out(kFontCols * scale, kFontRows * scale);
  for (int r = 0; r < out.height(); ++r) {
    for (int c = 0; c < out.width(); ++c) {
      out.at(r, c) =
          bitmap[static_cast<std::size_t>((r / scale) * kFontCols + c / scale)];
    }
  }
  return out;
}

}  // namespace lpr
