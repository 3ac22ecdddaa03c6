// SPDX-License-Identifier: Apache-2.0

#include "meibo/roi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "meibo/components.hpp"
#include "meibo/imgproc.hpp"

namespace meibo::roi {

using imgproc::BSplineCurve;
using imgproc::Point2d;
using meibo::StructuringElement;

BinaryMask build_reflection_mask(const GrayImage& img, const RoiParams& params) {
  const GrayImage grad = imgproc::prewitt(img);
  const BinaryMask bin = imgproc::threshold(grad, imgproc::ThresholdMethod::otsu());
  return imgproc::dilate(bin, StructuringElement::disk(params.reflection_dilate_diameter));
}

namespace {

// Per-column crossings of a sampled boundary curve: the topmost crossing for
// an upper boundary, the bottommost for a lower one.
std::vector<double> column_crossings(const BSplineCurve& curve, int width,
                                     bool topmost) {
  std::vector<double> out(width, std::numeric_limits<double>::quiet_NaN());
  const int steps = 8 * width;
  Point2d prev = curve.evaluate(0.0);
  for (int i = 1; i <= steps; ++i) {
    const Point2d p = curve.evaluate(static_cast<double>(i) / steps);
    const double x0 = std::min(prev.x, p.x), x1 = std::max(prev.x, p.x);
    for (int c = static_cast<int>(std::ceil(x0)); c <= static_cast<int>(std::floor(x1)); ++c) {
      if (c < 0 || c >= width) continue;
      const double t = (p.x == prev.x) ? 0.0 : (c - prev.x) / (p.x - prev.x);
      const double y = prev.y + t * (p.y - prev.y);
      if (std::isnan(out[c]) || (topmost ? y < out[c] : y > out[c])) out[c] = y;
    }
    prev = p;
  }
  return out;
}

}  // namespace

RoiResult segment_roi(const GrayImage& img, const RoiParams& params, RoiTrace* trace) {
  if (img.width() < 64 || img.height() < 64)
    throw ImageTooSmall("segment_roi: image must be at least 64x64");

  const auto disk = [](int d) { return StructuringElement::disk(d); };
  const StructuringElement cleanup =
      StructuringElement::rectangle(params.cleanup_size, params.cleanup_size);

  const BinaryMask reflection = build_reflection_mask(img, params);
  const GrayImage masked = imgproc::subtract(img, reflection);
  const GrayImage med = imgproc::median_filter(masked, disk(params.median_diameter));
  const GrayImage hd = imgproc::highlight_details(med, params.highlight_size);
  const GrayImage enhanced = imgproc::laplacian_sharpen(hd, params.laplacian_size);
  const BinaryMask binary = imgproc::threshold(enhanced, imgproc::ThresholdMethod::otsu());
  const BinaryMask binary_inv = imgproc::invert(binary);
  const BinaryMask binary_masked = imgproc::subtract(binary_inv, reflection);
  const BinaryMask eroded = imgproc::erode(binary_masked, cleanup);
  const BinaryMask despeckled = imgproc::remove_small(eroded, params.min_blob_area);
  const BinaryMask dilated = imgproc::dilate(despeckled, cleanup);
  const BinaryMask cleaned = imgproc::reject_border(dilated);

  const std::int64_t image_area = static_cast<std::int64_t>(img.width()) * img.height();
  {
    const auto cs = imgproc::label_components(cleaned, 8);
    std::int64_t largest = 0;
    for (const auto& st : cs.stats()) largest = std::max(largest, st.area);
    if (largest < static_cast<std::int64_t>(params.min_area_fraction *
                                            static_cast<double>(image_area)))
      throw NoEyelidDetected("segment_roi: no plausible eyelid region found");
  }

  const BinaryMask ring = imgproc::gradient_out(cleaned, disk(params.gradient_out_diameter));
  const BinaryMask hull = imgproc::convex_hull(ring);
  const BinaryMask block = imgproc::dilate(
      imgproc::keep_largest(imgproc::erode(hull, cleanup)), cleanup);

  if (trace != nullptr) {
    trace->reflection_mask = reflection;
    trace->masked_input = masked;
    trace->enhanced = enhanced;
    trace->binary_inverted = binary_inv;
    trace->binary_masked = binary_masked;
    trace->cleaned_blocks = cleaned;
    trace->hull = hull;
    trace->eyelid_block = block;
  }

  // First background-to-foreground transition per column, scanned from both
  // ends.
  std::vector<Point2d> upper_pts, lower_pts;
  for (int x = 0; x < img.width(); ++x) {
    for (int y = 0; y < img.height(); ++y) {
      if (block.at(x, y)) {
        upper_pts.push_back({static_cast<double>(x), static_cast<double>(y)});
        break;
      }
    }
    for (int y = img.height() - 1; y >= 0; --y) {
      if (block.at(x, y)) {
        lower_pts.push_back({static_cast<double>(x), static_cast<double>(y)});
        break;
      }
    }
  }
  if (static_cast<int>(upper_pts.size()) < params.bspline_degree + 1)
    throw NoEyelidDetected("segment_roi: too few boundary points");

  RoiResult result;
  result.upper_boundary = imgproc::fit_bspline(upper_pts, params.bspline_degree);
  result.lower_boundary = imgproc::fit_bspline(lower_pts, params.bspline_degree);

  // Closed region between the fitted curves, limited to the column span that
  // produced scan points; the extreme columns close the region vertically.
  const int x_left = static_cast<int>(upper_pts.front().x);
  const int x_right = static_cast<int>(upper_pts.back().x);
  const auto upper_y = column_crossings(result.upper_boundary, img.width(), true);
  const auto lower_y = column_crossings(result.lower_boundary, img.width(), false);

  BinaryMask region(img.width(), img.height());
  for (int x = x_left; x <= x_right; ++x) {
    double yu = upper_y[x], yl = lower_y[x];
    if (std::isnan(yu) || std::isnan(yl)) continue;
    const int y0 = std::max(0L, std::lround(yu));
    const int y1 = std::min(static_cast<long>(img.height() - 1), std::lround(yl));
    for (int y = y0; y <= y1; ++y) region.at(x, y) = 1;
  }
  result.roi_mask = imgproc::keep_largest(region);
  result.area = static_cast<std::int64_t>(result.roi_mask.count());
  if (result.area == 0) throw NoEyelidDetected("segment_roi: empty fitted region");
  return result;
}

}  // namespace meibo::roi
