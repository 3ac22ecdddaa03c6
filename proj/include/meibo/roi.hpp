// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>

#include "meibo/bspline.hpp"
#include "meibo/image.hpp"

namespace meibo::roi {

/// Every pipeline constant, with the published defaults.
struct RoiParams {
  int reflection_dilate_diameter = 5;  ///< disk applied to the Prewitt mask
  int median_diameter = 3;             ///< disk
  int highlight_size = 25;
  int laplacian_size = 29;
  int cleanup_size = 5;                ///< square erode/dilate pair
  std::int64_t min_blob_area = 190;
  int gradient_out_diameter = 8;       ///< disk
  int bspline_degree = 2;
  double min_area_fraction = 0.05;     ///< eyelid floor, fraction of image area
};

/// Intermediates retained for debugging / trace dumps.
struct RoiTrace {
  BinaryMask reflection_mask;    // I_M
  GrayImage masked_input;        // I_GM
  GrayImage enhanced;            // I_HD
  BinaryMask binary_inverted;    // I_BI
  BinaryMask binary_masked;      // I_BIM
  BinaryMask cleaned_blocks;     // I_RSO
  BinaryMask hull;               // I_CH
  BinaryMask eyelid_block;       // I_CF
};

struct RoiResult {
  BinaryMask roi_mask;
  imgproc::BSplineCurve upper_boundary;
  imgproc::BSplineCurve lower_boundary;
  std::int64_t area = 0;
};

/// Prewitt -> Otsu -> dilate: mask of eyelash streaks and bright reflections.
BinaryMask build_reflection_mask(const GrayImage& img, const RoiParams& params = {});

/// Full tarsal-conjunctiva segmentation. Throws NoEyelidDetected when the
/// cleaned block image is empty or its largest component is below the area
/// floor. Pass `trace` to retain intermediates.
RoiResult segment_roi(const GrayImage& img, const RoiParams& params = {},
                      RoiTrace* trace = nullptr);

}  // namespace meibo::roi
