// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>

#include "meibo/image.hpp"

namespace meibo::imgproc {

/// Per-pixel gradient magnitude |Gx| + |Gy| from the two 3x3 Prewitt kernels,
/// clamped to 0..255. Borders use edge replication.
/// Throws ImageTooSmall if either dimension is < 3.
GrayImage prewitt(const GrayImage& img);

struct ThresholdMethod {
  enum class Kind { Otsu, Fixed };
  Kind kind = Kind::Otsu;
  std::uint8_t level = 0;

  static ThresholdMethod otsu() { return {Kind::Otsu, 0}; }
  static ThresholdMethod fixed(std::uint8_t level) {
    return {Kind::Fixed, level};
  }
};

/// Otsu level maximizing inter-class variance over the 256-bin histogram of
/// `img`, restricted to `domain` foreground when given. Returns nullopt for a
/// degenerate (single-bin) histogram.
std::optional<std::uint8_t> otsu_level(const GrayImage& img,
                                       const BinaryMask* domain = nullptr);

/// Foreground = pixels strictly above the threshold. A degenerate histogram
/// under Otsu yields an all-background mask and a warning.
BinaryMask threshold(const GrayImage& img, ThresholdMethod method,
                     const BinaryMask* domain = nullptr);

BinaryMask erode(const BinaryMask& mask, const StructuringElement& se);
BinaryMask dilate(const BinaryMask& mask, const StructuringElement& se);

/// Rank filter: each pixel becomes the median of the intensities under the SE
/// footprint (edge replication). Even-count footprints take the lower median.
GrayImage median_filter(const GrayImage& img, const StructuringElement& se);

/// Majority vote under the SE footprint on a binary mask (the binary median).
/// Out-of-bounds neighborhood counts as background. Ties break to background.
BinaryMask median_filter(const BinaryMask& mask, const StructuringElement& se);

/// High-boost sharpening: img + gain * (img - boxblur(img, size)), clamped,
/// gain = 1. Throws InvalidKernelSize if size is even or < 3.
GrayImage highlight_details(const GrayImage& img, int size);

/// img + convolution with a size x size kernel of -1 everywhere and
/// size^2 - 1 at the center, clamped. Throws InvalidKernelSize.
GrayImage laplacian_sharpen(const GrayImage& img, int size);

/// Masked pixels forced to 0. Throws DimensionMismatch.
GrayImage subtract(const GrayImage& img, const BinaryMask& mask);

/// Per-pixel a AND NOT b. Throws DimensionMismatch.
BinaryMask subtract(const BinaryMask& a, const BinaryMask& b);

/// Per-pixel complement.
BinaryMask invert(const BinaryMask& mask);

/// dilate(mask, se) minus mask: the outer ring.
BinaryMask gradient_out(const BinaryMask& mask, const StructuringElement& se);

/// mask minus erode(mask, se): the inner ring.
BinaryMask gradient_in(const BinaryMask& mask, const StructuringElement& se);

/// Background regions not 4-connected to the image border become foreground.
BinaryMask fill_holes(const BinaryMask& mask);

/// Iterative two-subiteration thinning to a 1-pixel-wide 8-connected skeleton.
BinaryMask skeletonize(const BinaryMask& mask);

/// Filled convex hull of the foreground pixel centers (Graham scan, exact
/// integer point-in-polygon rasterization). Throws EmptyMask.
BinaryMask convex_hull(const BinaryMask& mask);

}  // namespace meibo::imgproc
