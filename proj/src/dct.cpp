#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "fft_core.hpp"
#include "prnuforge/errors.hpp"
#include "prnuforge/transform.hpp"

namespace prnuforge {
namespace {

using cd = std::complex<double>;

constexpr double kPi = std::numbers::pi;

// Orthonormal DCT-II of one sequence via a single length-n FFT: permute to
// v = [x0, x2, ..., x5, x3, x1], take V = FFT(v), then
// X[k] = Re(exp(-i*pi*k/(2n)) * V[k]) scaled by sqrt(1/n) (k=0) or sqrt(2/n).
void dct1d(std::vector<double>& x, std::vector<cd>& work) {
  const std::size_t n = x.size();
  if (n == 1) return;
  work.resize(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) work[i] = cd(x[2 * i], 0.0);
  for (std::size_t i = 0; 2 * i + 1 < n; ++i) work[n - 1 - i] = cd(x[2 * i + 1], 0.0);
  detail::fft_inplace(work, false);
  const double s0 = std::sqrt(1.0 / double(n));
  const double s = std::sqrt(2.0 / double(n));
  x[0] = s0 * work[0].real();
  for (std::size_t k = 1; k < n; ++k) {
    const double ang = -kPi * double(k) / (2.0 * double(n));
    const cd w(std::cos(ang), std::sin(ang));
    x[k] = s * (w * work[k]).real();
  }
}

// Inverse of dct1d: rebuild V from the unscaled coefficients using
// V[k] = exp(i*pi*k/(2n)) * (X[k] - i*X[n-k]), inverse FFT, un-permute.
void idct1d(std::vector<double>& x, std::vector<cd>& work) {
  const std::size_t n = x.size();
  if (n == 1) return;
  work.resize(n);
  const double u0 = std::sqrt(double(n));
  const double u = std::sqrt(double(n) / 2.0);
  work[0] = cd(x[0] * u0, 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    const double ang = kPi * double(k) / (2.0 * double(n));
    const cd w(std::cos(ang), std::sin(ang));
    work[k] = w * cd(x[k] * u, -x[n - k] * u);
  }
  detail::fft_inplace(work, true);
  const double inv_n = 1.0 / double(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) x[2 * i] = work[i].real() * inv_n;
  for (std::size_t i = 0; 2 * i + 1 < n; ++i) x[2 * i + 1] = work[n - 1 - i].real() * inv_n;
}

template <typename F>
Matrix separable_pass(const Matrix& in, F&& transform) {
  Matrix out = in;
  const std::size_t rows = out.rows();
  const std::size_t cols = out.cols();
  std::vector<double> buf;
  std::vector<cd> work;
  buf.resize(cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) buf[c] = out(r, c);
    transform(buf, work);
    for (std::size_t c = 0; c < cols; ++c) out(r, c) = buf[c];
  }
  buf.resize(rows);
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t r = 0; r < rows; ++r) buf[r] = out(r, c);
    transform(buf, work);
    for (std::size_t r = 0; r < rows; ++r) out(r, c) = buf[r];
  }
  return out;
}

}  // namespace

Matrix dct2(const Matrix& img) {
  if (img.empty()) throw ShapeError("dct2: empty input");
  return separable_pass(img, [](std::vector<double>& b, std::vector<cd>& w) { dct1d(b, w); });
}

Matrix idct2(const Matrix& coeffs) {
  if (coeffs.empty()) throw ShapeError("idct2: empty input");
  return separable_pass(coeffs, [](std::vector<double>& b, std::vector<cd>& w) { idct1d(b, w); });
}

std::size_t compute_alpha(std::size_t height, std::size_t width, double eta) {
  if (height == 0 || width == 0) throw ShapeError("compute_alpha: zero dimension");
  if (!(eta >= 0.0 && eta <= 1.0)) throw ParamError("compute_alpha: eta must be in [0, 1]");
  return static_cast<std::size_t>(std::llround(eta * double(std::min(height, width))));
}

FreqSplit high_select(const Matrix& plane, std::size_t alpha, MaskMode mode) {
  if (plane.empty()) throw ShapeError("high_select: empty plane");
  if (alpha > std::min(plane.rows(), plane.cols()))
    throw ParamError("high_select: alpha exceeds min(height, width)");
  FreqSplit split{Matrix(plane.rows(), plane.cols()), Matrix(plane.rows(), plane.cols()), alpha};
  for (std::size_t i = 0; i < plane.rows(); ++i) {
    for (std::size_t j = 0; j < plane.cols(); ++j) {
      const bool in_high = mode == MaskMode::kAntiDiagonal ? i + j >= alpha
                                                           : i >= alpha && j >= alpha;
      (in_high ? split.high : split.low)(i, j) = plane(i, j);
    }
  }
  return split;
}

}  // namespace prnuforge
