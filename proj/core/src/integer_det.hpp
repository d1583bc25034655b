#pragma once

#include "epstein/rational.hpp"

#include <cstdint>
#include <vector>

namespace epstein::detail {

// Exact determinant of an n x n integer matrix (row-major), fraction-free
// Gaussian elimination.
inline BigInt bareiss_determinant(int n, const std::vector<std::int64_t>& rows) {
  std::vector<BigInt> m(rows.begin(), rows.end());
  auto at = [&](int i, int j) -> BigInt& { return m[static_cast<std::size_t>(i * n + j)]; };
  BigInt prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (at(k, k) == 0) {
      int swap_row = -1;
      for (int i = k + 1; i < n; ++i)
        if (at(i, k) != 0) {
          swap_row = i;
          break;
        }
      if (swap_row < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(at(k, j), at(swap_row, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
    prev = at(k, k);
  }
  return sign * at(n - 1, n - 1);
}

}  // namespace epstein::detail
