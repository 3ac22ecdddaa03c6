// SPDX-License-Identifier: Apache-2.0

#include "meibo/imageio.hpp"

#include <png.h>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

namespace meibo::io {

namespace {

std::uint8_t luminance(unsigned r, unsigned g, unsigned b) {
  // Rec. 601, integer rounding.
  return static_cast<std::uint8_t>((299u * r + 587u * g + 114u * b + 500u) / 1000u);
}

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

bool has_suffix(const std::string& s, const std::string& suf) {
  if (s.size() < suf.size()) return false;
  for (std::size_t i = 0; i < suf.size(); ++i) {
    const char a = s[s.size() - suf.size() + i];
    const char b = suf[i];
    if (std::tolower(static_cast<unsigned char>(a)) != b) return false;
  }
  return true;
}

GrayImage read_png(const std::string& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw IoError("cannot open " + path);

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("failed to decode PNG " + path);
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);

  const png_uint_32 w = png_get_image_width(png, info);
  const png_uint_32 h = png_get_image_height(png, info);
  const int color_type = png_get_color_type(png, info);
  const int bit_depth = png_get_bit_depth(png, info);

  if (bit_depth == 16) png_set_strip_16(png);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
    png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_read_update_info(png, info);

  const int channels = png_get_channels(png, info);
  std::vector<std::uint8_t> row(static_cast<std::size_t>(w) * channels);
  GrayImage img(static_cast<int>(w), static_cast<int>(h));
  for (png_uint_32 y = 0; y < h; ++y) {
    png_read_row(png, row.data(), nullptr);
    for (png_uint_32 x = 0; x < w; ++x) {
      if (channels >= 3) {
        img.at(static_cast<int>(x), static_cast<int>(y)) =
            luminance(row[x * channels], row[x * channels + 1], row[x * channels + 2]);
      } else {
        img.at(static_cast<int>(x), static_cast<int>(y)) = row[x * channels];
      }
    }
  }
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

std::uint32_t rd_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (p[1] << 8) | (p[2] << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}
std::int32_t rd_i32(const std::uint8_t* p) {
  return static_cast<std::int32_t>(rd_u32(p));
}
std::uint16_t rd_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

GrayImage read_bmp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  std::vector<std::uint8_t> buf((std::istreambuf_iterator<char>(f)),
                                std::istreambuf_iterator<char>());
  if (buf.size() < 54 || buf[0] != 'B' || buf[1] != 'M')
    throw IoError("not a BMP file: " + path);

  const std::uint32_t data_offset = rd_u32(&buf[10]);
  const std::uint32_t header_size = rd_u32(&buf[14]);
  if (header_size < 40) throw IoError("unsupported BMP header in " + path);
  const std::int32_t w = rd_i32(&buf[18]);
  std::int32_t h = rd_i32(&buf[22]);
  const std::uint16_t bpp = rd_u16(&buf[28]);
  const std::uint32_t compression = rd_u32(&buf[30]);
  if (compression != 0) throw IoError("compressed BMP not supported: " + path);
  if (bpp != 8 && bpp != 24) throw IoError("only 8/24-bit BMP supported: " + path);
  if (w < 1 || h == 0) throw IoError("bad BMP dimensions in " + path);

  const bool top_down = h < 0;
  if (top_down) h = -h;

  std::vector<std::uint8_t> palette_lum(256, 0);
  if (bpp == 8) {
    std::uint32_t colors = rd_u32(&buf[46]);
    if (colors == 0 || colors > 256) colors = 256;
    const std::size_t pal_off = 14 + header_size;
    if (pal_off + colors * 4 > buf.size()) throw IoError("truncated BMP palette: " + path);
    for (std::uint32_t i = 0; i < colors; ++i) {
      const std::uint8_t* e = &buf[pal_off + i * 4];  // BGRX
      palette_lum[i] = luminance(e[2], e[1], e[0]);
    }
  }

  const std::size_t row_bytes = ((static_cast<std::size_t>(w) * bpp / 8) + 3) & ~std::size_t{3};
  if (data_offset + row_bytes * h > buf.size()) throw IoError("truncated BMP data: " + path);

  GrayImage img(w, h);
  for (int y = 0; y < h; ++y) {
    const int src_y = top_down ? y : h - 1 - y;
    const std::uint8_t* row = &buf[data_offset + row_bytes * src_y];
    for (int x = 0; x < w; ++x) {
      if (bpp == 8)
        img.at(x, y) = palette_lum[row[x]];
      else
        img.at(x, y) = luminance(row[x * 3 + 2], row[x * 3 + 1], row[x * 3]);
    }
  }
  return img;
}

void wr_u32(std::vector<std::uint8_t>& b, std::uint32_t v) {
  b.push_back(v & 0xff);
  b.push_back((v >> 8) & 0xff);
  b.push_back((v >> 16) & 0xff);
  b.push_back((v >> 24) & 0xff);
}
void wr_u16(std::vector<std::uint8_t>& b, std::uint16_t v) {
  b.push_back(v & 0xff);
  b.push_back((v >> 8) & 0xff);
}

void write_png_impl(const std::string& path, int width, int height, int color_type,
                    const std::uint8_t* data, std::size_t row_stride) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw IoError("cannot write " + path);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("failed to encode PNG " + path);
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, width, height, 8, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < height; ++y)
    png_write_row(png, const_cast<png_bytep>(data + row_stride * y));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

GrayImage read_gray(const std::string& path) {
  if (has_suffix(path, ".png")) return read_png(path);
  if (has_suffix(path, ".bmp")) return read_bmp(path);
  // Sniff the magic when the extension is unhelpful.
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  char magic[2] = {0, 0};
  f.read(magic, 2);
  f.close();
  if (magic[0] == 'B' && magic[1] == 'M') return read_bmp(path);
  return read_png(path);
}

BinaryMask read_mask(const std::string& path) {
  const GrayImage img = read_gray(path);
  BinaryMask out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      out.at(x, y) = img.at(x, y) != 0 ? 1 : 0;
  return out;
}

void write_gray_png(const std::string& path, const GrayImage& img) {
  write_png_impl(path, img.width(), img.height(), PNG_COLOR_TYPE_GRAY,
                 img.data().data(), static_cast<std::size_t>(img.width()));
}

void write_gray_bmp(const std::string& path, const GrayImage& img) {
  const int w = img.width(), h = img.height();
  const std::size_t row_bytes = (static_cast<std::size_t>(w) + 3) & ~std::size_t{3};
  const std::uint32_t data_offset = 14 + 40 + 256 * 4;
  const std::uint32_t file_size = data_offset + static_cast<std::uint32_t>(row_bytes * h);

  std::vector<std::uint8_t> b;
  b.reserve(file_size);
  b.push_back('B');
  b.push_back('M');
  wr_u32(b, file_size);
  wr_u32(b, 0);
  wr_u32(b, data_offset);
  wr_u32(b, 40);  // BITMAPINFOHEADER
  wr_u32(b, static_cast<std::uint32_t>(w));
  wr_u32(b, static_cast<std::uint32_t>(h));
  wr_u16(b, 1);
  wr_u16(b, 8);
  wr_u32(b, 0);  // BI_RGB
  wr_u32(b, static_cast<std::uint32_t>(row_bytes * h));
  wr_u32(b, 2835);  // 72 dpi
  wr_u32(b, 2835);
  wr_u32(b, 256);
  wr_u32(b, 0);
  for (int i = 0; i < 256; ++i) {
    b.push_back(static_cast<std::uint8_t>(i));
    b.push_back(static_cast<std::uint8_t>(i));
    b.push_back(static_cast<std::uint8_t>(i));
    b.push_back(0);
  }
  for (int y = h - 1; y >= 0; --y) {
    for (int x = 0; x < w; ++x) b.push_back(img.at(x, y));
    for (std::size_t p = w; p < row_bytes; ++p) b.push_back(0);
  }

  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path);
  f.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
  if (!f) throw IoError("short write to " + path);
}

void write_gray(const std::string& path, const GrayImage& img) {
  if (has_suffix(path, ".bmp"))
    write_gray_bmp(path, img);
  else
    write_gray_png(path, img);
}

void write_mask(const std::string& path, const BinaryMask& mask) {
  GrayImage img(mask.width(), mask.height());
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x)
      img.at(x, y) = mask.at(x, y) ? 255 : 0;
  write_gray(path, img);
}

void write_rgb_png(const std::string& path, const RgbImage& img) {
  write_png_impl(path, img.width, img.height, PNG_COLOR_TYPE_RGB, img.data.data(),
                 static_cast<std::size_t>(img.width) * 3);
}

}  // namespace meibo::io
