#pragma once

#include <cstddef>

namespace zfr::solver {

/// C (m x n) = A (m x k) * Bt (k x n), all row-major; adds into C when
/// `accumulate`. Each entry sums over k in increasing order, so results do not
/// depend on how rows are split into blocks.
template <class T>
void gemm(const T* A, std::size_t m, std::size_t k, const double* Bt, std::size_t n, T* C, bool accumulate) {
  for (std::size_t i = 0; i < m; ++i) {
    T* c = C + i * n;
    if (!accumulate)
      for (std::size_t j = 0; j < n; ++j) c[j] = T(0.0);
    const T* a = A + i * k;
    for (std::size_t kk = 0; kk < k; ++kk) {
      const T aik = a[kk];
      const double* b = Bt + kk * n;
      for (std::size_t j = 0; j < n; ++j) c[j] = c[j] + aik * b[j];
    }
  }
}

}  // namespace zfr::solver
