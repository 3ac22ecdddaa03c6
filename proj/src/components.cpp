// SPDX-License-Identifier: Apache-2.0

#include "meibo/components.hpp"

#include <cmath>
#include <numbers>

namespace meibo::imgproc {

BinaryMask ComponentSet::component_mask(int lb) const {
  BinaryMask out(width_, height_);
  for (int y = 0; y < height_; ++y)
    for (int x = 0; x < width_; ++x)
      if (label_at(x, y) == lb) out.at(x, y) = 1;
  return out;
}

BinaryMask ComponentSet::select(const std::vector<bool>& keep) const {
  BinaryMask out(width_, height_);
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      const int lb = label_at(x, y);
      if (lb > 0 && keep[lb - 1]) out.at(x, y) = 1;
    }
  }
  return out;
}

ComponentSet label_components(const BinaryMask& mask, int connectivity) {
  const int w = mask.width(), h = mask.height();
  ComponentSet cs(w, h);

  static const int dx8[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  static const int dy8[8] = {0, 0, 1, -1, 1, -1, 1, -1};
  const int ndirs = connectivity == 4 ? 4 : 8;

  std::vector<std::pair<int, int>> stack;
  for (int sy = 0; sy < h; ++sy) {
    for (int sx = 0; sx < w; ++sx) {
      if (!mask.at(sx, sy) || cs.labels_[static_cast<std::size_t>(sy) * w + sx])
        continue;
      const int label = static_cast<int>(cs.stats_.size()) + 1;
      ComponentStats st;
      st.label = label;
      st.min_x = st.max_x = sx;
      st.min_y = st.max_y = sy;
      std::int64_t sum_x = 0, sum_y = 0, sum_xx = 0, sum_yy = 0, sum_xy = 0;

      cs.labels_[static_cast<std::size_t>(sy) * w + sx] = label;
      stack.emplace_back(sx, sy);
      while (!stack.empty()) {
        const auto [x, y] = stack.back();
        stack.pop_back();
        ++st.area;
        sum_x += x;
        sum_y += y;
        sum_xx += static_cast<std::int64_t>(x) * x;
        sum_yy += static_cast<std::int64_t>(y) * y;
        sum_xy += static_cast<std::int64_t>(x) * y;
        st.min_x = std::min(st.min_x, x);
        st.max_x = std::max(st.max_x, x);
        st.min_y = std::min(st.min_y, y);
        st.max_y = std::max(st.max_y, y);
        if (x == 0 || y == 0 || x == w - 1 || y == h - 1)
          st.touches_border = true;
        for (int d = 0; d < ndirs; ++d) {
          const int nx = x + dx8[d], ny = y + dy8[d];
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          auto& cell = cs.labels_[static_cast<std::size_t>(ny) * w + nx];
          if (cell || !mask.at(nx, ny)) continue;
          cell = label;
          stack.emplace_back(nx, ny);
        }
      }

      const double n = static_cast<double>(st.area);
      st.centroid_x = static_cast<double>(sum_x) / n;
      st.centroid_y = static_cast<double>(sum_y) / n;
      const double mu20 = static_cast<double>(sum_xx) / n - st.centroid_x * st.centroid_x;
      const double mu02 = static_cast<double>(sum_yy) / n - st.centroid_y * st.centroid_y;
      const double mu11 = static_cast<double>(sum_xy) / n - st.centroid_x * st.centroid_y;
      double deg = 0.5 * std::atan2(2.0 * mu11, mu20 - mu02) * 180.0 / std::numbers::pi;
      if (deg < 0.0) deg += 180.0;
      if (deg >= 180.0) deg -= 180.0;
      st.angle_deg = deg;
      cs.stats_.push_back(st);
    }
  }
  return cs;
}

BinaryMask remove_small(const BinaryMask& mask, std::int64_t min_area) {
  const ComponentSet cs = label_components(mask, 8);
  std::vector<bool> keep(cs.count());
  for (int i = 0; i < cs.count(); ++i)
    keep[i] = cs.stats()[i].area >= min_area;
  return cs.select(keep);
}

BinaryMask reject_border(const BinaryMask& mask) {
  const ComponentSet cs = label_components(mask, 8);
  std::vector<bool> keep(cs.count());
  for (int i = 0; i < cs.count(); ++i)
    keep[i] = !cs.stats()[i].touches_border;
  return cs.select(keep);
}

BinaryMask keep_largest(const BinaryMask& mask) {
  const ComponentSet cs = label_components(mask, 8);
  if (cs.count() == 0) return BinaryMask(mask.width(), mask.height());
  int best = 0;
  for (int i = 1; i < cs.count(); ++i)
    if (cs.stats()[i].area > cs.stats()[best].area) best = i;
  std::vector<bool> keep(cs.count(), false);
  keep[best] = true;
  return cs.select(keep);
}

}  // namespace meibo::imgproc
