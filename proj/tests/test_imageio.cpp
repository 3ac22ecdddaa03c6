// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cstdio>
#include <filesystem>

#include "meibo/imageio.hpp"
#include "testutil.hpp"

using namespace meibo;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("meibo_io_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("PNG grayscale round trip") {
  TempDir dir;
  const GrayImage img = testutil::random_image(37, 23, 1);
  const std::string p = (dir.path / "a.png").string();
  io::write_gray_png(p, img);
  CHECK(io::read_gray(p) == img);
}

TEST_CASE("BMP grayscale round trip, including odd widths") {
  TempDir dir;
  for (int w : {16, 37}) {
    const GrayImage img = testutil::random_image(w, 9, 2);
    const std::string p = (dir.path / "b.bmp").string();
    io::write_gray_bmp(p, img);
    CHECK(io::read_gray(p) == img);
  }
}

TEST_CASE("mask round trip preserves foreground") {
  TempDir dir;
  const BinaryMask m = testutil::random_mask(21, 14, 3);
  const std::string p = (dir.path / "m.png").string();
  io::write_mask(p, m);
  CHECK(io::read_mask(p) == m);
}

TEST_CASE("RGB PNG reads back as Rec. 601 luminance") {
  TempDir dir;
  io::RgbImage rgb(4, 1);
  rgb.set(0, 0, {255, 0, 0});
  rgb.set(1, 0, {0, 255, 0});
  rgb.set(2, 0, {0, 0, 255});
  rgb.set(3, 0, {200, 200, 200});
  const std::string p = (dir.path / "c.png").string();
  io::write_rgb_png(p, rgb);
  const GrayImage g = io::read_gray(p);
  CHECK(g.at(0, 0) == 76);   // 0.299 * 255
  CHECK(g.at(1, 0) == 150);  // 0.587 * 255
  CHECK(g.at(2, 0) == 29);   // 0.114 * 255
  CHECK(g.at(3, 0) == 200);
}

TEST_CASE("missing and malformed files raise IoError") {
  TempDir dir;
  CHECK_THROWS_AS(io::read_gray((dir.path / "missing.png").string()), IoError);
  const std::string junk = (dir.path / "junk.bmp").string();
  FILE* f = std::fopen(junk.c_str(), "wb");
  std::fputs("definitely not a bitmap", f);
  std::fclose(f);
  CHECK_THROWS_AS(io::read_gray(junk), IoError);
}
