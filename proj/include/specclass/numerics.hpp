#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>

namespace specclass {

// Pairwise (tree) summation. The reduction tree depends only on the number of
// terms, so a given term sequence always sums to the same double, no matter
// how callers are threaded. Error grows as O(log n) in ulps instead of O(n)
// for plain left-to-right accumulation.
inline double pairwise_sum(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n <= 32) {
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

// Round half to even, the one rounding rule used for count arithmetic
// (duration * rate, train split sizes). Unbiased over regular duration grids.
inline std::int64_t round_half_even(double x) {
  return static_cast<std::int64_t>(std::nearbyint(x));
}

// Guard for double -> int64 draw-count conversions: the cast is undefined
// once the product leaves the int64 range.
inline constexpr double kMaxDrawCount = 4.0e18;

}  // namespace specclass
