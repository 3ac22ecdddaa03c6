// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "meibo/errors.hpp"

namespace meibo {

/// 8-bit single-channel raster, row-major.
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(int width, int height, std::uint8_t fill = 0)
      : width_(width), height_(height),
        data_(static_cast<std::size_t>(width) * height, fill) {
    if (width < 1 || height < 1)
      throw Error("GrayImage: dimensions must be >= 1");
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }

  std::uint8_t& at(int x, int y) { return data_[idx(x, y)]; }
  std::uint8_t at(int x, int y) const { return data_[idx(x, y)]; }

  bool in_bounds(int x, int y) const {
    return x >= 0 && x < width_ && y >= 0 && y < height_;
  }

  /// Value at the nearest in-bounds pixel (edge replication).
  std::uint8_t at_clamped(int x, int y) const {
    if (x < 0) x = 0;
    if (x >= width_) x = width_ - 1;
    if (y < 0) y = 0;
    if (y >= height_) y = height_ - 1;
    return data_[idx(x, y)];
  }

  std::vector<std::uint8_t>& data() { return data_; }
  const std::vector<std::uint8_t>& data() const { return data_; }

  bool operator==(const GrayImage& o) const {
    return width_ == o.width_ && height_ == o.height_ && data_ == o.data_;
  }

 private:
  std::size_t idx(int x, int y) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Per-pixel foreground/background raster. Foreground is any nonzero entry;
/// operations write 0/1.
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height, std::uint8_t fill = 0)
      : width_(width), height_(height),
        bits_(static_cast<std::size_t>(width) * height, fill ? 1 : 0) {
    if (width < 1 || height < 1)
      throw Error("BinaryMask: dimensions must be >= 1");
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return bits_.size(); }

  std::uint8_t& at(int x, int y) { return bits_[idx(x, y)]; }
  std::uint8_t at(int x, int y) const { return bits_[idx(x, y)]; }

  bool in_bounds(int x, int y) const {
    return x >= 0 && x < width_ && y >= 0 && y < height_;
  }

  /// Out-of-bounds reads as background.
  bool test(int x, int y) const { return in_bounds(x, y) && bits_[idx(x, y)]; }

  std::size_t count() const {
    std::size_t n = 0;
    for (std::uint8_t b : bits_) n += (b != 0);
    return n;
  }

  bool empty() const {
    for (std::uint8_t b : bits_)
      if (b) return false;
    return true;
  }

  bool same_size(const BinaryMask& o) const {
    return width_ == o.width_ && height_ == o.height_;
  }

  std::vector<std::uint8_t>& bits() { return bits_; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  bool operator==(const BinaryMask& o) const {
    return width_ == o.width_ && height_ == o.height_ && bits_ == o.bits_;
  }

 private:
  std::size_t idx(int x, int y) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Neighborhood footprint for morphology and rank filters.
///
/// A disk of diameter d covers the pixels of a d x d grid whose centers lie
/// within d/2 of the grid center (d-1)/2. The anchor is (width/2, height/2).
class StructuringElement {
 public:
  enum class Shape { Disk, Rectangle };

  static StructuringElement disk(int diameter) {
    return StructuringElement(Shape::Disk, diameter, diameter);
  }

  static StructuringElement rectangle(int width, int height) {
    return StructuringElement(Shape::Rectangle, width, height);
  }

  Shape shape() const { return shape_; }
  int width() const { return width_; }
  int height() const { return height_; }

  /// Offsets relative to the anchor.
  const std::vector<std::pair<int, int>>& offsets() const { return offsets_; }

  /// Element with every offset negated (point reflection about the anchor).
  StructuringElement reflected() const {
    StructuringElement se(*this);
    for (auto& [dx, dy] : se.offsets_) {
      dx = -dx;
      dy = -dy;
    }
    return se;
  }

 private:
  StructuringElement(Shape shape, int width, int height)
      : shape_(shape), width_(width), height_(height) {
    if (width < 1 || height < 1)
      throw Error("StructuringElement: size must be >= 1");
    const int ax = width / 2;
    const int ay = height / 2;
    for (int j = 0; j < height; ++j) {
      for (int i = 0; i < width; ++i) {
        if (shape == Shape::Disk) {
          // Pixel center within diameter/2 of the element center, scaled by 2
          // to stay in integers: (2i-(d-1))^2 + (2j-(d-1))^2 <= d^2.
          const long long dx = 2LL * i - (width - 1);
          const long long dy = 2LL * j - (height - 1);
          if (dx * dx + dy * dy > 1LL * width * width) continue;
        }
        offsets_.emplace_back(i - ax, j - ay);
      }
    }
  }

  Shape shape_;
  int width_;
  int height_;
  std::vector<std::pair<int, int>> offsets_;
};

}  // namespace meibo
