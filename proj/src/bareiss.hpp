#pragma once

// Fraction-free Gaussian elimination over an integral domain. Ring needs
// exact division; `divide(a, b)` must return a / b when b divides a.

#include <cstddef>
#include <utility>
#include <vector>

namespace blackwell::detail {

template <class Ring>
using Matrix = std::vector<std::vector<Ring>>;

/// Determinant via Bareiss elimination. `is_zero`, `divide` adapt the ring.
template <class Ring, class IsZero, class Divide>
Ring bareiss_determinant(Matrix<Ring> a, const Ring& one, IsZero is_zero, Divide divide) {
  const std::size_t n = a.size();
  if (n == 0) return one;
  Ring prev = one;
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (is_zero(a[k][k])) {
      std::size_t p = k + 1;
      while (p < n && is_zero(a[p][k])) ++p;
      if (p == n) return Ring{};
      std::swap(a[k], a[p]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = divide(a[k][k] * a[i][j] - a[i][k] * a[k][j], prev);
      a[i][k] = Ring{};
    }
    prev = a[k][k];
  }
  Ring det = a[n - 1][n - 1];
  return negate ? Ring(-det) : det;
}

}  // namespace blackwell::detail
