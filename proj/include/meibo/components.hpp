// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "meibo/image.hpp"

namespace meibo::imgproc {

struct ComponentStats {
  int label = 0;
  std::int64_t area = 0;
  int min_x = 0, min_y = 0, max_x = 0, max_y = 0;  // inclusive bounding box
  double centroid_x = 0.0, centroid_y = 0.0;
  /// Principal-axis angle from the horizontal in degrees, [0, 180), computed
  /// from second-order central moments in image coordinates (y down).
  double angle_deg = 0.0;
  bool touches_border = false;
};

/// Connected components with contiguous labels 1..n assigned in raster order
/// of first encounter. Label 0 is background.
class ComponentSet {
 public:
  ComponentSet() = default;
  ComponentSet(int width, int height)
      : width_(width), height_(height),
        labels_(static_cast<std::size_t>(width) * height, 0) {}

  int width() const { return width_; }
  int height() const { return height_; }
  int count() const { return static_cast<int>(stats_.size()); }

  int label_at(int x, int y) const {
    return labels_[static_cast<std::size_t>(y) * width_ + x];
  }

  const std::vector<std::int32_t>& labels() const { return labels_; }
  const std::vector<ComponentStats>& stats() const { return stats_; }

  /// Stats for 1-based label `lb`.
  const ComponentStats& stat(int lb) const { return stats_[lb - 1]; }

  /// Mask of one component.
  BinaryMask component_mask(int lb) const;

  /// Mask of every component whose 1-based label is flagged true.
  BinaryMask select(const std::vector<bool>& keep) const;

  friend ComponentSet label_components(const BinaryMask& mask,
                                       int connectivity);

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::int32_t> labels_;
  std::vector<ComponentStats> stats_;
};

/// Labels foreground components under 4- or 8-connectivity.
ComponentSet label_components(const BinaryMask& mask, int connectivity = 8);

/// Removes every 8-connected component with area < min_area.
BinaryMask remove_small(const BinaryMask& mask, std::int64_t min_area);

/// Removes every 8-connected component touching the image border.
BinaryMask reject_border(const BinaryMask& mask);

/// Keeps only the largest 8-connected component (ties break to the lowest
/// label). Empty input stays empty.
BinaryMask keep_largest(const BinaryMask& mask);

}  // namespace meibo::imgproc
