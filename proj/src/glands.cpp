// SPDX-License-Identifier: Apache-2.0

#include "meibo/glands.hpp"

#include <algorithm>
#include <cmath>

#include "meibo/components.hpp"
#include "meibo/imgproc.hpp"
#include "meibo/log.hpp"

namespace meibo::glands {

using meibo::StructuringElement;

BinaryMask segment_gland_signal(const GrayImage& img, const roi::RoiResult& roi,
                                const GlandParams& params) {
  if (roi.roi_mask.empty()) throw EmptyRoi("segment_gland_signal: empty ROI");

  const GrayImage med =
      imgproc::median_filter(img, StructuringElement::disk(params.median_diameter));
  const GrayImage hd = imgproc::highlight_details(med, params.highlight_size);
  const GrayImage enhanced = imgproc::laplacian_sharpen(hd, params.laplacian_size);
  const GrayImage masked = imgproc::subtract(enhanced, imgproc::invert(roi.roi_mask));

  // The histogram is restricted to the ROI: outside pixels are all zero after
  // masking and would swamp the statistics.
  const BinaryMask binary =
      imgproc::threshold(masked, imgproc::ThresholdMethod::otsu(), &roi.roi_mask);
  const BinaryMask smoothed = imgproc::median_filter(
      binary, StructuringElement::disk(params.binary_median_diameter));

  const auto cs = imgproc::label_components(smoothed, 8);
  std::vector<bool> keep(cs.count());
  for (int i = 0; i < cs.count(); ++i) {
    const double a = cs.stats()[i].angle_deg;
    keep[i] = a >= params.min_angle_deg && a <= params.max_angle_deg;
  }
  return cs.select(keep);
}

SegmentCounts count_segments(const BinaryMask& m) {
  SegmentCounts c;
  for (int y = 0; y < m.height(); ++y) {
    bool in_run = false;
    for (int x = 0; x < m.width(); ++x) {
      const bool fg = m.at(x, y) != 0;
      if (fg && !in_run) ++c.n_h;
      in_run = fg;
    }
  }
  for (int x = 0; x < m.width(); ++x) {
    bool in_run = false;
    for (int y = 0; y < m.height(); ++y) {
      const bool fg = m.at(x, y) != 0;
      if (fg && !in_run) ++c.n_v;
      in_run = fg;
    }
  }
  return c;
}

bool is_connected_gland(const SegmentCounts& c, const GlandParams& params) {
  return c.n_h > params.horizontal_segment_threshold ||
         c.n_v > params.vertical_segment_threshold;
}

namespace {

struct Crop {
  int x0 = 0, y0 = 0;
  BinaryMask mask;
};

// Component bounding box plus a margin, so the inverted image keeps a clear
// background frame around the shape.
Crop crop_with_margin(const BinaryMask& m, int margin) {
  int x0 = m.width(), y0 = m.height(), x1 = -1, y1 = -1;
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      if (!m.at(x, y)) continue;
      x0 = std::min(x0, x);
      y0 = std::min(y0, y);
      x1 = std::max(x1, x);
      y1 = std::max(y1, y);
    }
  }
  Crop c;
  if (x1 < 0) {
    c.mask = BinaryMask(1, 1);
    return c;
  }
  c.x0 = std::max(0, x0 - margin);
  c.y0 = std::max(0, y0 - margin);
  const int cx1 = std::min(m.width() - 1, x1 + margin);
  const int cy1 = std::min(m.height() - 1, y1 + margin);
  c.mask = BinaryMask(cx1 - c.x0 + 1, cy1 - c.y0 + 1);
  for (int y = c.y0; y <= cy1; ++y)
    for (int x = c.x0; x <= cx1; ++x)
      c.mask.at(x - c.x0, y - c.y0) = m.at(x, y);
  return c;
}

BinaryMask uncrop(const Crop& c, int width, int height) {
  BinaryMask out(width, height);
  for (int y = 0; y < c.mask.height(); ++y)
    for (int x = 0; x < c.mask.width(); ++x)
      if (c.mask.at(x, y)) out.at(x + c.x0, y + c.y0) = 1;
  return out;
}

// Close a skeleton-disrupted piece: the dilation ring encloses the piece and
// bridges the cuts, hole filling recovers the interior, and removing the
// inner contour takes the one-pixel expansion back off.
BinaryMask repair_piece(const BinaryMask& piece, const StructuringElement& se) {
  const BinaryMask ring = imgproc::gradient_out(piece, se);
  const BinaryMask filled = imgproc::fill_holes(ring);
  return imgproc::subtract(filled, imgproc::gradient_in(filled, se));
}

std::vector<BinaryMask> fragment_impl(const BinaryMask& connected,
                                      const GlandParams& params,
                                      FragmentStats& stats, int depth) {
  const StructuringElement erode_se = StructuringElement::rectangle(1, 3);
  const StructuringElement repair_se =
      StructuringElement::disk(params.fragment_gradient_diameter);

  Crop crop = crop_with_margin(connected, 6);
  BinaryMask eroded = crop.mask;
  while (true) {
    if (imgproc::label_components(eroded, 8).count() > 1) break;
    if (eroded.empty() || stats.erosion_iterations >= params.max_fragment_iterations) {
      log::warn("fragment: erosion exhausted the mask before it split; "
                "returning the input unsplit");
      stats.diverged = true;
      return {connected};
    }
    eroded = imgproc::erode(eroded, erode_se);
    ++stats.erosion_iterations;
  }

  const BinaryMask separator = imgproc::skeletonize(imgproc::invert(eroded));
  const BinaryMask split = imgproc::subtract(crop.mask, separator);

  std::vector<BinaryMask> out;
  const auto cs = imgproc::label_components(split, 8);
  for (int lb = 1; lb <= cs.count(); ++lb) {
    // Skeleton crumbs well below gland size are noise, not glands.
    if (cs.stat(lb).area < params.min_gland_area) continue;
    const BinaryMask piece = cs.component_mask(lb);
    if (is_connected_gland(count_segments(piece), params) && depth < 16) {
      Crop piece_crop{crop.x0, crop.y0, piece};
      auto sub = fragment_impl(uncrop(piece_crop, connected.width(), connected.height()),
                               params, stats, depth + 1);
      for (auto& m : sub) out.push_back(std::move(m));
      continue;
    }
    const BinaryMask repaired = repair_piece(piece, repair_se);
    Crop repaired_crop{crop.x0, crop.y0, repaired};
    out.push_back(uncrop(repaired_crop, connected.width(), connected.height()));
  }
  if (out.empty()) {
    log::warn("fragment: splitting left no gland-sized piece; "
              "returning the input unsplit");
    stats.diverged = true;
    out.push_back(connected);
  }
  return out;
}

}  // namespace

std::vector<BinaryMask> fragment(const BinaryMask& connected,
                                 const GlandParams& params, FragmentStats* stats) {
  FragmentStats local;
  FragmentStats& st = stats != nullptr ? *stats : local;
  st = FragmentStats{};
  std::vector<BinaryMask> out = fragment_impl(connected, params, st, 0);

  // Repair may reclaim pixels along a shared cut; keep the outputs disjoint
  // deterministically (earlier piece wins).
  for (std::size_t i = 1; i < out.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      out[i] = imgproc::subtract(out[i], out[j]);
  return out;
}

GlandSet extract_glands(const BinaryMask& gland_signal, const GlandParams& params) {
  GlandSet set;
  set.gland_signal = gland_signal;

  const BinaryMask kept = imgproc::remove_small(gland_signal, params.min_gland_area);
  const auto cs = imgproc::label_components(kept, 8);

  std::vector<BinaryMask> pieces;
  for (int lb = 1; lb <= cs.count(); ++lb) {
    BinaryMask comp = cs.component_mask(lb);
    if (is_connected_gland(count_segments(comp), params)) {
      for (auto& piece : fragment(comp, params)) pieces.push_back(std::move(piece));
    } else {
      pieces.push_back(std::move(comp));
    }
  }

  for (auto& piece : pieces) {
    const auto pcs = imgproc::label_components(piece, 8);
    for (int lb = 1; lb <= pcs.count(); ++lb) {
      const auto& st = pcs.stat(lb);
      if (st.area < params.min_gland_area) continue;
      GlandInfo info;
      info.mask = pcs.count() == 1 ? std::move(piece) : pcs.component_mask(lb);
      info.area = st.area;
      info.min_x = st.min_x;
      info.min_y = st.min_y;
      info.max_x = st.max_x;
      info.max_y = st.max_y;
      info.centroid_x = st.centroid_x;
      info.centroid_y = st.centroid_y;
      info.angle_deg = st.angle_deg;
      set.glands.push_back(std::move(info));
    }
  }

  std::sort(set.glands.begin(), set.glands.end(),
            [](const GlandInfo& a, const GlandInfo& b) {
              if (a.centroid_x != b.centroid_x) return a.centroid_x < b.centroid_x;
              if (a.centroid_y != b.centroid_y) return a.centroid_y < b.centroid_y;
              return a.min_x < b.min_x;
            });
  for (std::size_t i = 0; i < set.glands.size(); ++i)
    set.glands[i].label = static_cast<int>(i) + 1;
  return set;
}

}  // namespace meibo::glands
