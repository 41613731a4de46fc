#pragma once

#include <cstddef>
#include <vector>

namespace atrahasis {

/// Calls fn(subset) for every r-subset of [0, n) in lexicographic order until
/// fn returns false. Returns false iff stopped early.
template <class Fn>
bool for_each_subset(std::size_t n, std::size_t r, Fn&& fn) {
  if (r > n) return true;
  std::vector<std::size_t> s(r);
  for (std::size_t i = 0; i < r; ++i) s[i] = i;
  while (true) {
    if (!fn(static_cast<const std::vector<std::size_t>&>(s))) return false;
    std::size_t j = r;
    while (j > 0 && s[j - 1] == n - r + j - 1) --j;
    if (j == 0) return true;
    ++s[j - 1];
    for (std::size_t l = j; l < r; ++l) s[l] = s[l - 1] + 1;
  }
}

/// Like for_each_subset over [0, n) but only subsets containing `must`.
template <class Fn>
bool for_each_subset_with(std::size_t n, std::size_t r, std::size_t must, Fn&& fn) {
  if (r == 0 || must >= n) return true;
  std::vector<std::size_t> full(r);
  return for_each_subset(n - 1, r - 1, [&](const std::vector<std::size_t>& rest) {
    std::size_t out = 0;
    bool placed = false;
    for (std::size_t v : rest) {
      const std::size_t real = v >= must ? v + 1 : v;
      if (!placed && real > must) {
        full[out++] = must;
        placed = true;
      }
      full[out++] = real;
    }
    if (!placed) full[out++] = must;
    return fn(static_cast<const std::vector<std::size_t>&>(full));
  });
}

}  // namespace atrahasis
