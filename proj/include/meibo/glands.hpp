// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "meibo/image.hpp"
#include "meibo/roi.hpp"

namespace meibo::glands {

struct GlandParams {
  int median_diameter = 3;
  int highlight_size = 25;
  int laplacian_size = 29;
  int binary_median_diameter = 5;
  double min_angle_deg = 45.0;   ///< components below this main angle are dropped
  double max_angle_deg = 135.0;  ///< ... and above this one
  std::int64_t min_gland_area = 1400;
  std::int64_t horizontal_segment_threshold = 350;  ///< connected if n_h exceeds this
  std::int64_t vertical_segment_threshold = 200;    ///< ... or n_v this
  int fragment_gradient_diameter = 3;  ///< disk used by the repair stage
  int max_fragment_iterations = 100;
};

/// Maximal foreground runs summed over all rows (n_h) and columns (n_v).
struct SegmentCounts {
  std::int64_t n_h = 0;
  std::int64_t n_v = 0;
};

struct GlandInfo {
  int label = 0;
  BinaryMask mask;
  std::int64_t area = 0;
  int min_x = 0, min_y = 0, max_x = 0, max_y = 0;
  double centroid_x = 0.0, centroid_y = 0.0;
  double angle_deg = 0.0;
};

/// Labeled intact glands plus the raw gland-signal mask.
struct GlandSet {
  BinaryMask gland_signal;        ///< all detected gland pixels, for GA
  std::vector<GlandInfo> glands;  ///< disjoint single glands, labeled left to right
};

/// Iteration counts reported by the fragmentation loop.
struct FragmentStats {
  int erosion_iterations = 0;
  bool diverged = false;
};

/// Enhance, mask by the ROI, binarize and orientation-filter: the gland-signal
/// mask. Throws EmptyRoi when the ROI mask has no foreground.
BinaryMask segment_gland_signal(const GrayImage& img, const roi::RoiResult& roi,
                                const GlandParams& params = {});

SegmentCounts count_segments(const BinaryMask& component);

bool is_connected_gland(const SegmentCounts& c, const GlandParams& params = {});

/// Separates touching glands: erode with a 1x3 element until the component
/// count exceeds one, cut the original along the skeleton of the inverted
/// eroded image, then close up each piece. Pieces still flagged as connected
/// re-enter the loop. If erosion empties the mask first, the input is
/// returned unsplit with a warning.
std::vector<BinaryMask> fragment(const BinaryMask& connected,
                                 const GlandParams& params = {},
                                 FragmentStats* stats = nullptr);

/// Drops sub-threshold objects, fragments connected glands, and labels the
/// result left to right by centroid.
GlandSet extract_glands(const BinaryMask& gland_signal,
                        const GlandParams& params = {});

}  // namespace meibo::glands
