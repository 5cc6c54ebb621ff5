#pragma once

#include <cstddef>
#include <vector>

namespace zfr::fr {

/// Dense row-major matrix.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

  double& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

  Matrix transposed() const {
    Matrix t(cols, rows);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) t(c, r) = (*this)(r, c);
    }
    return t;
  }
};

}  // namespace zfr::fr
