// SPDX-License-Identifier: Apache-2.0

#include "meibo/imgproc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "meibo/log.hpp"

namespace meibo::imgproc {

namespace {

inline std::uint8_t clamp_u8(long long v) {
  return static_cast<std::uint8_t>(std::max(0LL, std::min(255LL, v)));
}

void require_same_size(int aw, int ah, int bw, int bh, const char* op) {
  if (aw != bw || ah != bh)
    throw DimensionMismatch(std::string(op) + ": dimension mismatch");
}

// Window sums over [x-r, x+r] x [y-r, y+r] with edge replication, separable.
std::vector<std::int64_t> box_sums(const GrayImage& img, int size) {
  const int w = img.width(), h = img.height();
  const int r = size / 2;
  std::vector<std::int64_t> horiz(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    std::int64_t s = 0;
    for (int i = -r; i <= r; ++i) s += img.at_clamped(i, y);
    horiz[static_cast<std::size_t>(y) * w] = s;
    for (int x = 1; x < w; ++x) {
      s += img.at_clamped(x + r, y);
      s -= img.at_clamped(x - r - 1, y);
      horiz[static_cast<std::size_t>(y) * w + x] = s;
    }
  }
  auto row = [&](int y) {
    y = std::clamp(y, 0, h - 1);
    return horiz.begin() + static_cast<std::size_t>(y) * w;
  };
  std::vector<std::int64_t> out(static_cast<std::size_t>(w) * h);
  for (int x = 0; x < w; ++x) {
    std::int64_t s = 0;
    for (int j = -r; j <= r; ++j) s += *(row(j) + x);
    out[x] = s;
    for (int y = 1; y < h; ++y) {
      s += *(row(y + r) + x);
      s -= *(row(y - r - 1) + x);
      out[static_cast<std::size_t>(y) * w + x] = s;
    }
  }
  return out;
}

}  // namespace

GrayImage prewitt(const GrayImage& img) {
  if (img.width() < 3 || img.height() < 3)
    throw ImageTooSmall("prewitt: image must be at least 3x3");
  const int w = img.width(), h = img.height();
  GrayImage out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int gx = 0, gy = 0;
      for (int j = -1; j <= 1; ++j) {
        for (int i = -1; i <= 1; ++i) {
          const int v = img.at_clamped(x + i, y + j);
          gx += i * v;
          gy += j * v;
        }
      }
      out.at(x, y) = clamp_u8(std::llabs(gx) + std::llabs(gy));
    }
  }
  return out;
}

std::optional<std::uint8_t> otsu_level(const GrayImage& img,
                                       const BinaryMask* domain) {
  if (domain != nullptr)
    require_same_size(img.width(), img.height(), domain->width(),
                      domain->height(), "otsu_level");
  std::array<std::int64_t, 256> hist{};
  std::int64_t total = 0;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (domain != nullptr && !domain->at(x, y)) continue;
      ++hist[img.at(x, y)];
      ++total;
    }
  }
  if (total == 0) return std::nullopt;

  std::int64_t sum_all = 0;
  for (int i = 0; i < 256; ++i) sum_all += static_cast<std::int64_t>(i) * hist[i];

  // Foreground is defined as values > t, so candidate splits leave both
  // classes nonempty for some t in [0, 254].
  double best_var = -1.0;
  int best_t = -1;
  std::int64_t w_b = 0, sum_b = 0;
  for (int t = 0; t <= 254; ++t) {
    w_b += hist[t];
    sum_b += static_cast<std::int64_t>(t) * hist[t];
    const std::int64_t w_f = total - w_b;
    if (w_b == 0 || w_f == 0) continue;
    const double m_b = static_cast<double>(sum_b) / static_cast<double>(w_b);
    const double m_f = static_cast<double>(sum_all - sum_b) / static_cast<double>(w_f);
    const double var = static_cast<double>(w_b) * static_cast<double>(w_f) *
                       (m_b - m_f) * (m_b - m_f);
    if (var > best_var) {
      best_var = var;
      best_t = t;
    }
  }
  if (best_t < 0) return std::nullopt;
  return static_cast<std::uint8_t>(best_t);
}

BinaryMask threshold(const GrayImage& img, ThresholdMethod method,
                     const BinaryMask* domain) {
  std::uint8_t level = 0;
  if (method.kind == ThresholdMethod::Kind::Otsu) {
    const auto t = otsu_level(img, domain);
    if (!t) {
      log::warn("threshold: degenerate histogram, returning all-background");
      return BinaryMask(img.width(), img.height());
    }
    level = *t;
  } else {
    level = method.level;
  }
  BinaryMask out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      out.at(x, y) = img.at(x, y) > level ? 1 : 0;
  return out;
}

BinaryMask erode(const BinaryMask& mask, const StructuringElement& se) {
  const int w = mask.width(), h = mask.height();
  BinaryMask out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask.at(x, y)) continue;
      bool all = true;
      for (const auto& [dx, dy] : se.offsets()) {
        if (!mask.test(x + dx, y + dy)) {
          all = false;
          break;
        }
      }
      out.at(x, y) = all ? 1 : 0;
    }
  }
  return out;
}

BinaryMask dilate(const BinaryMask& mask, const StructuringElement& se) {
  const int w = mask.width(), h = mask.height();
  BinaryMask out(w, h);
  // Minkowski sum: paint the element at every foreground pixel.
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask.at(x, y)) continue;
      for (const auto& [dx, dy] : se.offsets()) {
        const int nx = x + dx, ny = y + dy;
        if (mask.in_bounds(nx, ny)) out.at(nx, ny) = 1;
      }
    }
  }
  return out;
}

GrayImage median_filter(const GrayImage& img, const StructuringElement& se) {
  const int w = img.width(), h = img.height();
  GrayImage out(w, h);
  std::vector<std::uint8_t> window;
  window.reserve(se.offsets().size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      window.clear();
      for (const auto& [dx, dy] : se.offsets())
        window.push_back(img.at_clamped(x + dx, y + dy));
      const std::size_t k = (window.size() - 1) / 2;  // lower median
      std::nth_element(window.begin(), window.begin() + k, window.end());
      out.at(x, y) = window[k];
    }
  }
  return out;
}

BinaryMask median_filter(const BinaryMask& mask, const StructuringElement& se) {
  const int w = mask.width(), h = mask.height();
  BinaryMask out(w, h);
  const std::size_t total = se.offsets().size();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      std::size_t fg = 0;
      for (const auto& [dx, dy] : se.offsets())
        fg += mask.test(x + dx, y + dy) ? 1 : 0;
      out.at(x, y) = (2 * fg > total) ? 1 : 0;
    }
  }
  return out;
}

GrayImage highlight_details(const GrayImage& img, int size) {
  if (size < 3 || size % 2 == 0)
    throw InvalidKernelSize("highlight_details: size must be odd and >= 3");
  const int w = img.width(), h = img.height();
  const auto sums = box_sums(img, size);
  const double area = static_cast<double>(size) * size;
  GrayImage out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double blur = static_cast<double>(sums[static_cast<std::size_t>(y) * w + x]) / area;
      const double v = 2.0 * img.at(x, y) - blur;  // img + 1.0 * (img - blur)
      out.at(x, y) = clamp_u8(std::llround(v));
    }
  }
  return out;
}

GrayImage laplacian_sharpen(const GrayImage& img, int size) {
  if (size < 3 || size % 2 == 0)
    throw InvalidKernelSize("laplacian_sharpen: size must be odd and >= 3");
  const int w = img.width(), h = img.height();
  const auto sums = box_sums(img, size);
  const std::int64_t n2 = static_cast<std::int64_t>(size) * size;
  GrayImage out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      // img + (center-weighted kernel) = (size^2 + 1) * img - window sum
      const std::int64_t v = (n2 + 1) * img.at(x, y) -
                             sums[static_cast<std::size_t>(y) * w + x];
      out.at(x, y) = clamp_u8(v);
    }
  }
  return out;
}

GrayImage subtract(const GrayImage& img, const BinaryMask& mask) {
  require_same_size(img.width(), img.height(), mask.width(), mask.height(),
                    "subtract");
  GrayImage out = img;
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      if (mask.at(x, y)) out.at(x, y) = 0;
  return out;
}

BinaryMask subtract(const BinaryMask& a, const BinaryMask& b) {
  require_same_size(a.width(), a.height(), b.width(), b.height(), "subtract");
  BinaryMask out = a;
  for (int y = 0; y < a.height(); ++y)
    for (int x = 0; x < a.width(); ++x)
      if (b.at(x, y)) out.at(x, y) = 0;
  return out;
}

BinaryMask invert(const BinaryMask& mask) {
  BinaryMask out(mask.width(), mask.height());
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x)
      out.at(x, y) = mask.at(x, y) ? 0 : 1;
  return out;
}

BinaryMask gradient_out(const BinaryMask& mask, const StructuringElement& se) {
  return subtract(dilate(mask, se), mask);
}

BinaryMask gradient_in(const BinaryMask& mask, const StructuringElement& se) {
  return subtract(mask, erode(mask, se));
}

BinaryMask fill_holes(const BinaryMask& mask) {
  const int w = mask.width(), h = mask.height();
  std::vector<std::uint8_t> outside(static_cast<std::size_t>(w) * h, 0);
  std::vector<std::pair<int, int>> stack;
  auto push = [&](int x, int y) {
    const std::size_t i = static_cast<std::size_t>(y) * w + x;
    if (!outside[i] && !mask.at(x, y)) {
      outside[i] = 1;
      stack.emplace_back(x, y);
    }
  };
  for (int x = 0; x < w; ++x) {
    push(x, 0);
    push(x, h - 1);
  }
  for (int y = 0; y < h; ++y) {
    push(0, y);
    push(w - 1, y);
  }
  while (!stack.empty()) {
    const auto [x, y] = stack.back();
    stack.pop_back();
    if (x > 0) push(x - 1, y);
    if (x + 1 < w) push(x + 1, y);
    if (y > 0) push(x, y - 1);
    if (y + 1 < h) push(x, y + 1);
  }
  BinaryMask out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      out.at(x, y) = outside[static_cast<std::size_t>(y) * w + x] ? 0 : 1;
  return out;
}

namespace {

// Zhang-Suen deletion test. Neighbors indexed p2..p9 clockwise from north.
inline bool zs_removable(const BinaryMask& m, int x, int y, bool first_pass) {
  const int p2 = m.test(x, y - 1), p3 = m.test(x + 1, y - 1);
  const int p4 = m.test(x + 1, y), p5 = m.test(x + 1, y + 1);
  const int p6 = m.test(x, y + 1), p7 = m.test(x - 1, y + 1);
  const int p8 = m.test(x - 1, y), p9 = m.test(x - 1, y - 1);
  const int b = p2 + p3 + p4 + p5 + p6 + p7 + p8 + p9;
  if (b < 2 || b > 6) return false;
  int a = 0;
  const int seq[9] = {p2, p3, p4, p5, p6, p7, p8, p9, p2};
  for (int i = 0; i < 8; ++i)
    if (seq[i] == 0 && seq[i + 1] == 1) ++a;
  if (a != 1) return false;
  if (first_pass) return (p2 * p4 * p6 == 0) && (p4 * p6 * p8 == 0);
  return (p2 * p4 * p8 == 0) && (p2 * p6 * p8 == 0);
}

}  // namespace

BinaryMask skeletonize(const BinaryMask& mask) {
  const int w = mask.width(), h = mask.height();
  BinaryMask cur = mask;
  // Foreground bounding box never grows while thinning.
  int x0 = w, y0 = h, x1 = -1, y1 = -1;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!cur.at(x, y)) continue;
      x0 = std::min(x0, x);
      y0 = std::min(y0, y);
      x1 = std::max(x1, x);
      y1 = std::max(y1, y);
    }
  }
  if (x1 < 0) return cur;

  std::vector<std::pair<int, int>> to_delete;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int pass = 0; pass < 2; ++pass) {
      to_delete.clear();
      for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x)
          if (cur.at(x, y) && zs_removable(cur, x, y, pass == 0))
            to_delete.emplace_back(x, y);
      for (const auto& [x, y] : to_delete) cur.at(x, y) = 0;
      if (!to_delete.empty()) changed = true;
    }
  }
  return cur;
}

namespace {

struct Pt {
  std::int64_t x, y;
};

inline std::int64_t cross(const Pt& o, const Pt& a, const Pt& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

inline std::int64_t dist2(const Pt& a, const Pt& b) {
  const std::int64_t dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

// Graham scan. Returns hull vertices in counterclockwise order (mathematical
// orientation of the raw coordinates); collinear inputs give the two extremes.
std::vector<Pt> graham_scan(std::vector<Pt> pts) {
  auto pivot_it = std::min_element(pts.begin(), pts.end(), [](const Pt& a, const Pt& b) {
    return a.y != b.y ? a.y < b.y : a.x < b.x;
  });
  std::swap(*pts.begin(), *pivot_it);
  const Pt pivot = pts[0];
  std::sort(pts.begin() + 1, pts.end(), [&](const Pt& a, const Pt& b) {
    const std::int64_t c = cross(pivot, a, b);
    if (c != 0) return c > 0;
    return dist2(pivot, a) < dist2(pivot, b);
  });
  // Points sharing the maximum polar angle must be visited farthest-first.
  if (pts.size() > 2) {
    std::size_t i = pts.size() - 1;
    while (i > 1 && cross(pivot, pts[i - 1], pts.back()) == 0) --i;
    std::reverse(pts.begin() + i, pts.end());
  }
  std::vector<Pt> hull;
  for (const Pt& p : pts) {
    while (hull.size() >= 2 &&
           cross(hull[hull.size() - 2], hull.back(), p) <= 0)
      hull.pop_back();
    hull.push_back(p);
  }
  return hull;
}

void draw_segment(BinaryMask& out, Pt a, Pt b) {
  // Bresenham.
  std::int64_t dx = std::llabs(b.x - a.x), dy = -std::llabs(b.y - a.y);
  const std::int64_t sx = a.x < b.x ? 1 : -1, sy = a.y < b.y ? 1 : -1;
  std::int64_t err = dx + dy;
  Pt p = a;
  while (true) {
    out.at(static_cast<int>(p.x), static_cast<int>(p.y)) = 1;
    if (p.x == b.x && p.y == b.y) break;
    const std::int64_t e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      p.x += sx;
    }
    if (e2 <= dx) {
      err += dx;
      p.y += sy;
    }
  }
}

}  // namespace

BinaryMask convex_hull(const BinaryMask& mask) {
  std::vector<Pt> pts;
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x)
      if (mask.at(x, y)) pts.push_back({x, y});
  if (pts.empty()) throw EmptyMask("convex_hull: empty mask");

  BinaryMask out(mask.width(), mask.height());
  const auto hull = graham_scan(std::move(pts));
  if (hull.size() == 1) {
    out.at(static_cast<int>(hull[0].x), static_cast<int>(hull[0].y)) = 1;
    return out;
  }
  if (hull.size() == 2) {
    draw_segment(out, hull[0], hull[1]);
    return out;
  }

  std::int64_t bx0 = hull[0].x, bx1 = hull[0].x, by0 = hull[0].y, by1 = hull[0].y;
  for (const Pt& p : hull) {
    bx0 = std::min(bx0, p.x);
    bx1 = std::max(bx1, p.x);
    by0 = std::min(by0, p.y);
    by1 = std::max(by1, p.y);
  }
  // Exact inclusive point-in-convex-polygon over the bounding box; boundary
  // pixels (cross = 0) are foreground, which also makes the raster idempotent
  // under re-hulling.
  const std::size_t n = hull.size();
  for (std::int64_t y = by0; y <= by1; ++y) {
    for (std::int64_t x = bx0; x <= bx1; ++x) {
      const Pt p{x, y};
      bool inside = true;
      for (std::size_t i = 0; i < n; ++i) {
        if (cross(hull[i], hull[(i + 1) % n], p) < 0) {
          inside = false;
          break;
        }
      }
      if (inside) out.at(static_cast<int>(x), static_cast<int>(y)) = 1;
    }
  }
  return out;
}

}  // namespace meibo::imgproc
