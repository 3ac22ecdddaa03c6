// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "meibo/image.hpp"

namespace meibo::evalseg {

/// Overlap scores between a reference mask and a candidate mask.
struct SegScore {
  double k = 0.0;    ///< similarity index (Dice), in [0, 1]
  double r_p = 0.0;  ///< false positive rate, percent
  double r_n = 0.0;  ///< false negative rate, percent
  std::int64_t area_manual = 0;
  std::int64_t area_auto = 0;
  std::int64_t area_intersection = 0;
};

/// k = 2|Sm n Sa| / (|Sm| + |Sa|), r_p = (|Sa| - |n|) / |Sm| * 100,
/// r_n = (|Sm| - |n|) / |Sm| * 100.
/// Throws DimensionMismatch on size mismatch, EmptyReference if |Sm| = 0.
SegScore score(const BinaryMask& s_manual, const BinaryMask& s_auto);

}  // namespace meibo::evalseg
