// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "meibo/evalseg.hpp"
#include "oracles.hpp"
#include "testutil.hpp"

using namespace meibo;
using evalseg::score;
using testutil::filled_rect;
using testutil::random_mask;

TEST_CASE("identical masks score perfectly") {
  const BinaryMask m = random_mask(32, 32, 1);
  const auto s = score(m, m);
  CHECK(s.k == 1.0);
  CHECK(s.r_p == 0.0);
  CHECK(s.r_n == 0.0);
}

TEST_CASE("80 of 100 overlapping") {
  // manual: columns 0..9 of 10 rows; auto shifted right by 2 columns.
  const BinaryMask manual = filled_rect(20, 10, 0, 0, 9, 9);
  const BinaryMask autom = filled_rect(20, 10, 2, 0, 11, 9);
  const auto s = score(manual, autom);
  CHECK(s.area_manual == 100);
  CHECK(s.area_auto == 100);
  CHECK(s.area_intersection == 80);
  CHECK(s.k == doctest::Approx(0.8));
  CHECK(s.r_p == doctest::Approx(20.0));
  CHECK(s.r_n == doctest::Approx(20.0));
}

TEST_CASE("disjoint masks") {
  const BinaryMask manual = filled_rect(30, 10, 0, 0, 9, 9);   // 100 px
  const BinaryMask autom = filled_rect(30, 10, 15, 0, 19, 9);  // 50 px
  const auto s = score(manual, autom);
  CHECK(s.k == 0.0);
  CHECK(s.r_p == doctest::Approx(50.0));
  CHECK(s.r_n == doctest::Approx(100.0));
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(score(BinaryMask(4, 4), BinaryMask(5, 4)), DimensionMismatch);
  CHECK_THROWS_AS(score(BinaryMask(4, 4), random_mask(4, 4, 2)), EmptyReference);
}

TEST_CASE("symmetry of k; containment identities") {
  for (std::uint32_t seed = 0; seed < 6; ++seed) {
    const BinaryMask a = random_mask(24, 24, 2000 + seed, 0.5);
    const BinaryMask b = random_mask(24, 24, 3000 + seed, 0.5);
    if (a.empty() || b.empty()) continue;
    CHECK(score(a, b).k == score(b, a).k);
  }

  // r_n = 0 iff manual is a subset of auto; r_p = 0 iff auto subset of manual.
  const BinaryMask inner = filled_rect(16, 16, 4, 4, 8, 8);
  const BinaryMask outer = filled_rect(16, 16, 2, 2, 10, 10);
  CHECK(score(inner, outer).r_n == 0.0);
  CHECK(score(inner, outer).r_p > 0.0);
  CHECK(score(outer, inner).r_p == 0.0);
  CHECK(score(outer, inner).r_n > 0.0);
}

TEST_CASE("exact agreement with the counting oracle") {
  for (std::uint32_t seed = 0; seed < 10; ++seed) {
    const BinaryMask manual = random_mask(64, 64, 4000 + seed, 0.5);
    const BinaryMask autom = random_mask(64, 64, 5000 + seed, 0.5);
    const auto c = oracle::dice_counts(manual, autom);
    if (c.nm == 0) continue;
    const auto s = score(manual, autom);
    CHECK(s.area_manual == c.nm);
    CHECK(s.area_auto == c.na);
    CHECK(s.area_intersection == c.ni);
    // Same integers through the same formulas: bitwise-equal doubles.
    CHECK(s.k == 2.0 * static_cast<double>(c.ni) / static_cast<double>(c.nm + c.na));
    CHECK(s.r_p == static_cast<double>(c.na - c.ni) / static_cast<double>(c.nm) * 100.0);
    CHECK(s.r_n == static_cast<double>(c.nm - c.ni) / static_cast<double>(c.nm) * 100.0);
  }
}
