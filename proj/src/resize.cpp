#include <algorithm>
#include <cmath>
#include <cstddef>

#include "prnuforge/errors.hpp"
#include "prnuforge/transform.hpp"

namespace prnuforge {
namespace {

// Catmull-Rom cubic (a = -0.5). Interpolating: kernel(0) = 1, kernel(k) = 0
// at other integers, and the four taps sum to 1 for any offset.
double cubic(double t) {
  constexpr double a = -0.5;
  const double at = std::abs(t);
  if (at <= 1.0) return ((a + 2.0) * at - (a + 3.0)) * at * at + 1.0;
  if (at < 2.0) return (((at - 5.0) * at + 8.0) * at - 4.0) * a;
  return 0.0;
}

// Resample along the row axis; columns pass through.
Matrix resample_rows(const Matrix& in, std::size_t new_rows) {
  const std::size_t rows = in.rows();
  const std::size_t cols = in.cols();
  Matrix out(new_rows, cols);
  const double scale = double(rows) / double(new_rows);
  const long last = long(rows) - 1;
  for (std::size_t i = 0; i < new_rows; ++i) {
    const double src = (double(i) + 0.5) * scale - 0.5;  // center-aligned grid
    const double base = std::floor(src);
    const double frac = src - base;
    double weight[4];
    std::size_t tap[4];
    for (int m = 0; m < 4; ++m) {
      weight[m] = cubic(frac + 1.0 - double(m));
      tap[m] = std::size_t(std::clamp(long(base) - 1 + m, 0L, last));
    }
    for (std::size_t j = 0; j < cols; ++j) {
      out(i, j) = weight[0] * in(tap[0], j) + weight[1] * in(tap[1], j) +
                  weight[2] * in(tap[2], j) + weight[3] * in(tap[3], j);
    }
  }
  return out;
}

Matrix transpose(const Matrix& m) {
  Matrix out(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = m(i, j);
  return out;
}

}  // namespace

Matrix bicubic_resize(const Matrix& img, std::size_t new_height, std::size_t new_width) {
  if (img.empty()) throw ShapeError("bicubic_resize: empty input");
  if (new_height == 0 || new_width == 0)
    throw ParamError("bicubic_resize: target dimensions must be >= 1");
  const Matrix vertical = resample_rows(img, new_height);
  return transpose(resample_rows(transpose(vertical), new_width));
}

}  // namespace prnuforge
