#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

#include "fft_core.hpp"
#include "prnuforge/transform.hpp"

namespace prnuforge {
namespace detail {
namespace {

using cd = std::complex<double>;

constexpr double kPi = std::numbers::pi;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fft_pow2(std::vector<cd>& a, bool inverse) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * kPi / double(len);
    const cd wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      cd w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const cd u = a[i + j];
        const cd v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

// Bluestein's chirp-z algorithm; k^2 is reduced mod 2n in integers so the
// twiddle angles stay exact for large n.
void fft_bluestein(std::vector<cd>& a, bool inverse) {
  const std::size_t n = a.size();
  const std::uint64_t two_n = 2 * static_cast<std::uint64_t>(n);
  std::vector<cd> chirp(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::uint64_t k2 = (static_cast<std::uint64_t>(k) * k) % two_n;
    const double ang = (inverse ? 1.0 : -1.0) * kPi * double(k2) / double(n);
    chirp[k] = cd(std::cos(ang), std::sin(ang));
  }
  const std::size_t m = next_pow2(2 * n - 1);
  std::vector<cd> fa(m, cd(0.0, 0.0));
  std::vector<cd> fb(m, cd(0.0, 0.0));
  for (std::size_t k = 0; k < n; ++k) fa[k] = a[k] * chirp[k];
  fb[0] = std::conj(chirp[0]);
  for (std::size_t k = 1; k < n; ++k) fb[k] = fb[m - k] = std::conj(chirp[k]);
  fft_pow2(fa, false);
  fft_pow2(fb, false);
  for (std::size_t i = 0; i < m; ++i) fa[i] *= fb[i];
  fft_pow2(fa, true);
  const double inv_m = 1.0 / double(m);
  for (std::size_t k = 0; k < n; ++k) a[k] = fa[k] * chirp[k] * inv_m;
}

}  // namespace

void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n <= 1) return;
  if (is_pow2(n)) {
    fft_pow2(a, inverse);
  } else {
    fft_bluestein(a, inverse);
  }
}

}  // namespace detail

namespace {

using cd = std::complex<double>;

// Transform every row, then every column.
void fft2_inplace(CMatrix& m, bool inverse) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::vector<cd> buf;
  buf.resize(cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) buf[c] = m(r, c);
    detail::fft_inplace(buf, inverse);
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = buf[c];
  }
  buf.resize(rows);
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t r = 0; r < rows; ++r) buf[r] = m(r, c);
    detail::fft_inplace(buf, inverse);
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = buf[r];
  }
}

}  // namespace

CMatrix fft2(const CMatrix& in) {
  CMatrix out = in;
  fft2_inplace(out, false);
  return out;
}

CMatrix fft2(const Matrix& in) {
  CMatrix c(in.rows(), in.cols());
  for (std::size_t i = 0; i < in.size(); ++i) c.values()[i] = cd(in.values()[i], 0.0);
  return fft2(c);
}

CMatrix ifft2(const CMatrix& in) {
  CMatrix out = in;
  fft2_inplace(out, true);
  const double scale = 1.0 / double(out.rows() * out.cols());
  for (auto& v : out.values()) v *= scale;
  return out;
}

}  // namespace prnuforge
