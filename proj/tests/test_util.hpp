#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "lqhv/tensor_core.hpp"

namespace tu {

using lqhv::ComplexMatrix;
using lqhv::cplx;

inline ComplexMatrix sx() { return {{0.0, 1.0}, {1.0, 0.0}}; }
inline ComplexMatrix sy() { return {{0.0, cplx(0, -1)}, {cplx(0, 1), 0.0}}; }
inline ComplexMatrix sz() { return {{1.0, 0.0}, {0.0, -1.0}}; }
inline ComplexMatrix id(std::size_t n) { return ComplexMatrix::identity(n); }

inline std::vector<cplx> ket(std::size_t d, std::size_t j) {
  std::vector<cplx> v(d, 0.0);
  v[j] = 1.0;
  return v;
}

// Swap operator on C^d (x) C^d.
inline ComplexMatrix swap_op(std::size_t d) {
  ComplexMatrix v(d * d, d * d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) v(a * d + b, b * d + a) = 1.0;
  return v;
}

}  // namespace tu
