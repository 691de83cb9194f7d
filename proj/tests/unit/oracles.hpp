#pragma once

// Small reference implementations used as test oracles.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace oracle {

// Catalan numbers by the convolution recurrence C_{n+1} = sum C_i C_{n-i}.
inline std::vector<std::uint64_t> catalan(std::size_t n) {
  std::vector<std::uint64_t> c(n + 1, 0);
  c[0] = 1;
  for (std::size_t m = 1; m <= n; ++m)
    for (std::size_t i = 0; i < m; ++i) c[m] += c[i] * c[m - 1 - i];
  return c;
}

inline std::uint64_t pow3(std::size_t n) {
  std::uint64_t p = 1;
  while (n--) p *= 3;
  return p;
}

}  // namespace oracle
