// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <string>
#include <vector>

#include "meibo/image.hpp"

namespace meibo::io {

/// Loads a PNG or BMP file as 8-bit grayscale. Color inputs are converted by
/// Rec. 601 luminance. Throws IoError on unreadable or unsupported files.
GrayImage read_gray(const std::string& path);

/// Nonzero pixels of an 8-bit image file read as mask foreground.
BinaryMask read_mask(const std::string& path);

void write_gray_png(const std::string& path, const GrayImage& img);
void write_gray_bmp(const std::string& path, const GrayImage& img);

/// Writes by extension: .png or .bmp.
void write_gray(const std::string& path, const GrayImage& img);

/// Mask written as 0/255 grayscale, format by extension.
void write_mask(const std::string& path, const BinaryMask& mask);

/// Interleaved RGB rows, written as an 8-bit color PNG.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // 3 bytes per pixel, row-major

  RgbImage() = default;
  RgbImage(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, 0) {}

  void set(int x, int y, std::array<std::uint8_t, 3> rgb) {
    const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
    data[i] = rgb[0];
    data[i + 1] = rgb[1];
    data[i + 2] = rgb[2];
  }
};

void write_rgb_png(const std::string& path, const RgbImage& img);

}  // namespace meibo::io
