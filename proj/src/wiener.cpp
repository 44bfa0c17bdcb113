#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "prnuforge/errors.hpp"
#include "prnuforge/transform.hpp"

namespace prnuforge {
namespace {

// Summed-area table of x^2; (rows+1) x (cols+1), zero top/left border.
std::vector<double> square_integral(const Matrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::vector<double> integ((rows + 1) * (cols + 1), 0.0);
  const std::size_t stride = cols + 1;
  for (std::size_t i = 0; i < rows; ++i) {
    double rowsum = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
      const double v = m(i, j);
      rowsum += v * v;
      integ[(i + 1) * stride + (j + 1)] = integ[i * stride + (j + 1)] + rowsum;
    }
  }
  return integ;
}

}  // namespace

Matrix wiener_local(const Matrix& subband, double noise_variance) {
  if (noise_variance <= 0.0) throw ParamError("wiener_local: noise_variance must be > 0");
  if (subband.empty()) return subband;
  const std::size_t rows = subband.rows();
  const std::size_t cols = subband.cols();
  const std::vector<double> integ = square_integral(subband);
  const std::size_t stride = cols + 1;

  Matrix var(rows, cols, std::numeric_limits<double>::infinity());
  for (int w : {3, 5, 7, 9}) {
    const std::size_t rad = std::size_t(w) / 2;
    for (std::size_t i = 0; i < rows; ++i) {
      const std::size_t r0 = i > rad ? i - rad : 0;
      const std::size_t r1 = std::min(rows - 1, i + rad);
      for (std::size_t j = 0; j < cols; ++j) {
        const std::size_t c0 = j > rad ? j - rad : 0;
        const std::size_t c1 = std::min(cols - 1, j + rad);
        const double s = integ[(r1 + 1) * stride + (c1 + 1)] - integ[r0 * stride + (c1 + 1)] -
                         integ[(r1 + 1) * stride + c0] + integ[r0 * stride + c0];
        const double count = double((r1 - r0 + 1) * (c1 - c0 + 1));
        const double local = std::max(0.0, s / count - noise_variance);
        var(i, j) = std::min(var(i, j), local);
      }
    }
  }

  Matrix out(rows, cols);
  for (std::size_t i = 0; i < subband.size(); ++i) {
    const double v = var.values()[i];
    out.values()[i] = subband.values()[i] * (v / (v + noise_variance));
  }
  return out;
}

Matrix wiener_fourier(const Matrix& m) {
  if (m.empty()) throw ShapeError("wiener_fourier: empty input");
  const double n = double(m.size());
  const double noise_var = sum_squares(m) / n;  // overall spectral variance
  if (noise_var == 0.0) return m;
  CMatrix spec = fft2(m);
  for (auto& coeff : spec.values()) {
    const double power = std::norm(coeff) / n;
    const double signal = std::max(0.0, power - noise_var);
    coeff *= signal / (signal + noise_var);
  }
  return ifft2(spec).real();
}

}  // namespace prnuforge
