// SPDX-License-Identifier: Apache-2.0

#include "meibo/evalseg.hpp"

namespace meibo::evalseg {

SegScore score(const BinaryMask& s_manual, const BinaryMask& s_auto) {
  if (!s_manual.same_size(s_auto))
    throw DimensionMismatch("score: mask dimensions differ");

  SegScore s;
  for (int y = 0; y < s_manual.height(); ++y) {
    for (int x = 0; x < s_manual.width(); ++x) {
      const bool m = s_manual.at(x, y) != 0;
      const bool a = s_auto.at(x, y) != 0;
      s.area_manual += m;
      s.area_auto += a;
      s.area_intersection += (m && a);
    }
  }
  if (s.area_manual == 0)
    throw EmptyReference("score: reference mask is empty");

  s.k = 2.0 * static_cast<double>(s.area_intersection) /
        static_cast<double>(s.area_manual + s.area_auto);
  s.r_p = static_cast<double>(s.area_auto - s.area_intersection) /
          static_cast<double>(s.area_manual) * 100.0;
  s.r_n = static_cast<double>(s.area_manual - s.area_intersection) /
          static_cast<double>(s.area_manual) * 100.0;
  return s;
}

}  // namespace meibo::evalseg
