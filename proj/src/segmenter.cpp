#include "lpr/segmenter.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace lpr {

BinaryImage prepare_plate(const GrayImage& plate, int noise_area) {
  BinaryImage strokes = complement(adaptive_threshold(plate));
  LabeledRegions regions = label_components(strokes, 8);
  BinaryImage out(strokes.width(), strokes.height());
  for (const Region& region : regions.regions) {
    if (region.area < noise_area) continue;
    int borders = 0;
    if (region.bbox.row0 == 0) ++borders;
    if (region.bbox.row1 == strokes.height() - 1) ++borders;
    if (region.bbox.col0 == 0) ++borders;
    if (region.bbox.col1 == strokes.width() - 1) ++borders;
    if (borders >= 2) continue;
    for (int r = region.bbox.row0; r <= region.bbox.row1; ++r) {
      for (int c = region.bbox.col0; c <= region.bbox.col1; ++c) {
        if (regions.label_at(r, c) == region.label) out.at(r, c) = 1;
      }
    }
  }
  return out;
}

Projection projection(const BinaryImage& bin, ProjectionAxis axis) {
  Projection p;
  p.axis = axis;
  if (axis == ProjectionAxis::Horizontal) {
    p.counts.assign(static_cast<std::size_t>(bin.height()), 0);
    for (int r = 0; r < bin.height(); ++r) {
      int n = 0;
      for (int c = 0; c < bin.width(); ++c) n += bin.at(r, c);
      p.counts[static_cast<std::size_t>(r)] = n;
    }
  } else {
    p.counts.assign(static_cast<std::size_t>(bin.width()), 0);
    for (int c = 0; c < bin.width(); ++c) {
      int n = 0;
      for (int r = 0; r < bin.height(); ++r) n += bin.at(r, c);
      p.counts[static_cast<std::size_t>(c)] = n;
    }
  }
  return p;
}

BinaryImage normalize_glyph(const BinaryImage& crop) {
  if (crop.empty() || crop.count_ones() == 0) {
    throw std::invalid_argument("normalize_glyph: empty crop");
  }
  const int h = crop.height();
  const int w = crop.width();
  const double scale =
      std::min(static_cast<double>(kGlyphRows) / h,
               static_cast<double>(kGlyphCols) / w);
  const int th = std::clamp(static_cast<int>(std::lround(h * scale)), 1,
                            kGlyphRows);
  const int tw = std::clamp(static_cast<int>(std::lround(w * scale)), 1,
                            kGlyphCols);
  const int r0 = (kGlyphRows - th) / 2;
  const int c0 = (kGlyphCols - tw) / 2;

  BinaryImage out(kGlyphCols, kGlyphRows);
  for (int r = 0; r < th; ++r) {
    const int sr = std::min(
        h - 1, static_cast<int>((r + 0.5) * static_cast<double>(h) / th));
    for (int c = 0; c < tw; ++c) {
      const int sc = std::min(
          w - 1, static_cast<int>((c + 0.5) * static_cast<double>(w) / tw));
      // Nearest-neighbor keeps values binary; the 0.5 cut re-asserts it.
      out.at(r0 + r, c0 + c) = crop.at(sr, sc) > 0.5 ? 1 : 0;
    }
  }
  return out;
}

SegmentResult segment_chars(const BinaryImage& bin,
                            const SegmentParams& params) {
  SegmentResult result;
  if (bin.empty()) return result;
  LabeledRegions regions = label_components(bin, 8);

  struct Kept {
    int label;
    Bbox bbox;
  };
  std::vector<Kept> kept;
  const int ref_h =
      params.reference_height > 0 ? params.reference_height : bin.height();
  for (const Region& region : regions.regions) {
    const double h = region.bbox.height();
    const double w = region.bbox.width();
    if (h < params.min_h_frac * ref_h) continue;
    const double aspect = h / w;
    if (aspect < params.aspect_lo || aspect > params.aspect_hi) continue;
    kept.push_back({region.label, region.bbox});
  }
  std::sort(kept.begin(), kept.end(), [](const Kept& a, const Kept& b) {
    return std::tuple(a.bbox.col0, a.bbox.row0, a.label) <
           std::tuple(b.bbox.col0, b.bbox.row0, b.label);
  });

  for (const Kept& k : kept) {
    CharGlyph glyph;
    glyph.pixels = normalize_glyph(regions.region_mask(k.label));
    if (glyph.pixels.count_ones() < params.min_stroke) continue;
    glyph.source_bbox = k.bbox;
    result.glyphs.push_back(std::move(glyph));
  }
  for (std::size_t i = 0; i < result.glyphs.size(); ++i) {
    result.glyphs[i].order_index = static_cast<int>(i);
  }

  if (result.glyphs.size() >= 2) {
    std::vector<int> widths;
    widths.reserve(result.glyphs.size());
    for (const CharGlyph& g : result.glyphs) {
      widths.push_back(g.source_bbox.width());
    }
    std::vector<int> sorted = widths;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t mid = sorted.size() / 2;
    const double median =
        sorted.size() % 2 ? sorted[mid]
                          : 0.5 * (sorted[mid - 1] + sorted[mid]);
    for (std::size_t i = 0; i < widths.size(); ++i) {
      if (widths[i] > params.wide_warn_ratio * median) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "segment: component %zu width %d exceeds %gx the median "
                      "kept width (possible joined characters)",
                      i, widths[i], params.wide_warn_ratio);
        result.warnings.emplace_back(buf);
      }
    }
  }
  return result;
}

}  // namespace lpr
