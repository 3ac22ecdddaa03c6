// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "meibo/components.hpp"
#include "oracles.hpp"
#include "testutil.hpp"

using namespace meibo;
using imgproc::label_components;
using testutil::mask_from;
using testutil::random_mask;

TEST_CASE("label: empty mask has no components") {
  CHECK(label_components(BinaryMask(8, 8), 8).count() == 0);
}

TEST_CASE("label: two disjoint blocks") {
  const BinaryMask m = mask_from({
      "##....",
      "##....",
      "....##",
      "....##",
  });
  const auto cs = label_components(m, 8);
  REQUIRE(cs.count() == 2);
  CHECK(cs.stat(1).area == 4);
  CHECK(cs.stat(2).area == 4);
  CHECK(cs.stat(1).centroid_x == doctest::Approx(0.5));
  CHECK(cs.stat(1).centroid_y == doctest::Approx(0.5));
  CHECK(cs.stat(2).centroid_x == doctest::Approx(4.5));
}

TEST_CASE("label: diagonal pair joins under 8-connectivity only") {
  BinaryMask m(4, 4);
  m.at(1, 1) = 1;
  m.at(2, 2) = 1;
  CHECK(label_components(m, 8).count() == 1);
  CHECK(label_components(m, 4).count() == 2);
}

TEST_CASE("label: principal angle of oriented stripes") {
  const BinaryMask vertical = testutil::filled_rect(12, 30, 5, 2, 7, 27);
  const auto vc = label_components(vertical, 8);
  REQUIRE(vc.count() == 1);
  CHECK(vc.stat(1).angle_deg == doctest::Approx(90.0));

  const BinaryMask horizontal = testutil::filled_rect(30, 12, 2, 5, 27, 7);
  const auto hc = label_components(horizontal, 8);
  REQUIRE(hc.count() == 1);
  CHECK(hc.stat(1).angle_deg == doctest::Approx(0.0));

  BinaryMask diag(20, 20);
  for (int i = 2; i < 18; ++i) diag.at(i, i) = 1;  // "\" on screen
  const auto dc = label_components(diag, 8);
  REQUIRE(dc.count() == 1);
  CHECK(dc.stat(1).angle_deg == doctest::Approx(45.0));
}

TEST_CASE("label: border flag and bounding boxes") {
  const BinaryMask m = mask_from({
      "#.....",
      "#..##.",
      "...##.",
      "......",
  });
  const auto cs = label_components(m, 8);
  REQUIRE(cs.count() == 2);
  CHECK(cs.stat(1).touches_border);
  CHECK(!cs.stat(2).touches_border);
  CHECK(cs.stat(2).min_x == 3);
  CHECK(cs.stat(2).max_x == 4);
  CHECK(cs.stat(2).min_y == 1);
  CHECK(cs.stat(2).max_y == 2);
}

TEST_CASE("label: agrees with union-find oracle up to label renaming") {
  for (std::uint32_t seed = 0; seed < 5; ++seed) {
    const BinaryMask m = random_mask(24, 24, 1000 + seed, 0.4);
    for (int conn : {4, 8}) {
      const auto cs = label_components(m, conn);
      const auto oc = oracle::label(m, conn);
      REQUIRE(cs.count() == oc.count);
      std::map<int, int> mapping;
      for (int y = 0; y < 24; ++y) {
        for (int x = 0; x < 24; ++x) {
          const int a = cs.label_at(x, y);
          const int b = oc.label[y * 24 + x];
          CHECK((a == 0) == (b == 0));
          if (a == 0) continue;
          auto [it, inserted] = mapping.emplace(a, b);
          CHECK(it->second == b);
        }
      }
      // Areas agree through the mapping; they also sum to the foreground count.
      std::int64_t total = 0;
      for (const auto& [a, b] : mapping) {
        CHECK(cs.stat(a).area == oc.area[b - 1]);
        total += cs.stat(a).area;
      }
      CHECK(total == static_cast<std::int64_t>(m.count()));
    }
  }
}

TEST_CASE("remove_small: the published 190-px boundary") {
  // 189 = 27*7 rectangle is cleared at min_area 190; 190 = 19*10 survives.
  const BinaryMask small = testutil::filled_rect(40, 20, 2, 2, 28, 8);
  REQUIRE(small.count() == 189);
  CHECK(imgproc::remove_small(small, 190).empty());

  const BinaryMask big = testutil::filled_rect(40, 20, 2, 2, 20, 11);
  REQUIRE(big.count() == 190);
  CHECK(imgproc::remove_small(big, 190) == big);
}

TEST_CASE("remove_small: survivors exactly those at or above the area floor") {
  for (std::uint32_t seed = 0; seed < 4; ++seed) {
    const BinaryMask m = random_mask(32, 32, 1100 + seed, 0.35);
    const BinaryMask out = imgproc::remove_small(m, 6);
    const auto oc = oracle::label(m, 8);
    for (int y = 0; y < 32; ++y) {
      for (int x = 0; x < 32; ++x) {
        const int lb = oc.label[y * 32 + x];
        const bool expect = lb > 0 && oc.area[lb - 1] >= 6;
        CHECK(out.at(x, y) == (expect ? 1 : 0));
      }
    }
    CHECK(imgproc::remove_small(out, 6) == out);  // idempotent
  }
}

TEST_CASE("reject_border: edge components go, interior stays") {
  const BinaryMask m = mask_from({
      "##....",
      "#..##.",
      "...##.",
      "......",
  });
  const BinaryMask out = imgproc::reject_border(m);
  CHECK(out == mask_from({
            "......",
            "...##.",
            "...##.",
            "......",
        }));
}

TEST_CASE("reject_border: equals the flood-from-border oracle") {
  for (std::uint32_t seed = 0; seed < 4; ++seed) {
    const BinaryMask m = random_mask(24, 24, 1200 + seed, 0.4);
    const auto oc = oracle::label(m, 8);
    std::vector<bool> border_comp(oc.count + 1, false);
    for (int x = 0; x < 24; ++x) {
      if (oc.label[x]) border_comp[oc.label[x]] = true;
      if (oc.label[23 * 24 + x]) border_comp[oc.label[23 * 24 + x]] = true;
    }
    for (int y = 0; y < 24; ++y) {
      if (oc.label[y * 24]) border_comp[oc.label[y * 24]] = true;
      if (oc.label[y * 24 + 23]) border_comp[oc.label[y * 24 + 23]] = true;
    }
    const BinaryMask out = imgproc::reject_border(m);
    for (int y = 0; y < 24; ++y)
      for (int x = 0; x < 24; ++x) {
        const int lb = oc.label[y * 24 + x];
        CHECK(out.at(x, y) == ((lb > 0 && !border_comp[lb]) ? 1 : 0));
      }
  }
}

TEST_CASE("keep_largest") {
  const BinaryMask m = mask_from({
      "##..###",
      "##..###",
      ".......",
      "#......",
  });
  const BinaryMask out = imgproc::keep_largest(m);
  CHECK(out.count() == 6);
  CHECK(out.at(4, 0) == 1);
  CHECK(out.at(0, 0) == 0);
  CHECK(imgproc::keep_largest(BinaryMask(4, 4)).empty());
}
