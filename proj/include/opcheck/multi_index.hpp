#pragma once

#include <vector>

namespace opcheck::detail {

// Big-endian multi-index helpers shared by the tensor-space code: the
// composite index of digits (d_0, .., d_{k-1}) in base b is
// d_0 b^{k-1} + .. + d_{k-1}.

inline std::vector<int> to_digits(long idx, int base, int len) {
  std::vector<int> d(len, 0);
  for (int k = len - 1; k >= 0; --k) {
    d[k] = static_cast<int>(idx % base);
    idx /= base;
  }
  return d;
}

inline long from_digits(const std::vector<int>& d, int base) {
  long idx = 0;
  for (int v : d) idx = idx * base + v;
  return idx;
}

inline long ipow(int base, int e) {
  long r = 1;
  while (e-- > 0) r *= base;
  return r;
}

}  // namespace opcheck::detail
