#include <array>
#include <cstddef>

#include "prnuforge/errors.hpp"
#include "prnuforge/transform.hpp"

namespace prnuforge {
namespace {

// Daubechies 8-tap scaling filter (sum = sqrt(2)) and its quadrature mirror.
// Periodized over even lengths this pair is exactly orthogonal, which keeps
// pyramid energy equal to image energy on even-sized inputs.
constexpr std::array<double, 8> kScaling = {
    0.23037781330885523,   0.7148465705525415,   0.6308807679295904,
    -0.02798376941698385,  -0.18703481171888114, 0.030841381835986965,
    0.032883011666982945,  -0.010597401784997278};

constexpr std::array<double, 8> make_wavelet() {
  std::array<double, 8> g{};
  for (int m = 0; m < 8; ++m) g[m] = (m % 2 == 0 ? 1.0 : -1.0) * kScaling[7 - m];
  return g;
}

constexpr std::array<double, 8> kWavelet = make_wavelet();

std::size_t wrap(std::size_t idx, std::size_t n) {
  while (idx >= n) idx -= n;
  return idx;
}

// Replicate the last row/column when a side is odd (one-sample symmetric
// extension); the inverse trims it back, so reconstruction stays exact.
Matrix pad_to_even(const Matrix& m) {
  const std::size_t rows = m.rows() + m.rows() % 2;
  const std::size_t cols = m.cols() + m.cols() % 2;
  if (rows == m.rows() && cols == m.cols()) return m;
  Matrix out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::size_t si = i < m.rows() ? i : m.rows() - 1;
    for (std::size_t j = 0; j < cols; ++j) {
      const std::size_t sj = j < m.cols() ? j : m.cols() - 1;
      out(i, j) = m(si, sj);
    }
  }
  return out;
}

// One analysis level on an even-sized matrix: rows then columns, packed as
// [approx | detail] halves along each axis.
Matrix analyze(const Matrix& in) {
  const std::size_t rows = in.rows();
  const std::size_t cols = in.cols();
  Matrix byrow(rows, cols);
  const std::size_t hc = cols / 2;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t k = 0; k < hc; ++k) {
      double a = 0.0, d = 0.0;
      for (std::size_t m = 0; m < 8; ++m) {
        const double v = in(r, wrap(2 * k + m, cols));
        a += kScaling[m] * v;
        d += kWavelet[m] * v;
      }
      byrow(r, k) = a;
      byrow(r, hc + k) = d;
    }
  }
  Matrix out(rows, cols);
  const std::size_t hr = rows / 2;
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t k = 0; k < hr; ++k) {
      double a = 0.0, d = 0.0;
      for (std::size_t m = 0; m < 8; ++m) {
        const double v = byrow(wrap(2 * k + m, rows), c);
        a += kScaling[m] * v;
        d += kWavelet[m] * v;
      }
      out(k, c) = a;
      out(hr + k, c) = d;
    }
  }
  return out;
}

// Transpose of analyze: columns then rows.
Matrix synthesize(const Matrix& in) {
  const std::size_t rows = in.rows();
  const std::size_t cols = in.cols();
  Matrix bycol(rows, cols, 0.0);
  const std::size_t hr = rows / 2;
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t k = 0; k < hr; ++k) {
      const double a = in(k, c);
      const double d = in(hr + k, c);
      for (std::size_t m = 0; m < 8; ++m)
        bycol(wrap(2 * k + m, rows), c) += a * kScaling[m] + d * kWavelet[m];
    }
  }
  Matrix out(rows, cols, 0.0);
  const std::size_t hc = cols / 2;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t k = 0; k < hc; ++k) {
      const double a = bycol(r, k);
      const double d = bycol(r, hc + k);
      for (std::size_t m = 0; m < 8; ++m)
        out(r, wrap(2 * k + m, cols)) += a * kScaling[m] + d * kWavelet[m];
    }
  }
  return out;
}

Matrix block(const Matrix& m, std::size_t r0, std::size_t c0, std::size_t rows,
             std::size_t cols) {
  Matrix out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) out(i, j) = m(r0 + i, c0 + j);
  return out;
}

}  // namespace

WaveletPyramid dwt2(const Matrix& img, int levels) {
  if (levels < 1) throw ParamError("dwt2: levels must be >= 1");
  if (img.rows() < kScaling.size() || img.cols() < kScaling.size())
    throw ParamError("dwt2: image sides must be >= the filter length (8)");
  WaveletPyramid pyr;
  Matrix cur = img;
  for (int lev = 0; lev < levels; ++lev) {
    pyr.level_dims.push_back({cur.rows(), cur.cols()});
    const Matrix packed = analyze(pad_to_even(cur));
    const std::size_t hr = packed.rows() / 2;
    const std::size_t hc = packed.cols() / 2;
    pyr.details.push_back({block(packed, 0, hc, hr, hc), block(packed, hr, 0, hr, hc),
                           block(packed, hr, hc, hr, hc)});
    cur = block(packed, 0, 0, hr, hc);
  }
  pyr.approx = std::move(cur);
  return pyr;
}

Matrix idwt2(const WaveletPyramid& pyramid) {
  if (pyramid.details.empty() || pyramid.details.size() != pyramid.level_dims.size())
    throw ParamError("idwt2: malformed pyramid");
  Matrix cur = pyramid.approx;
  for (std::size_t lev = pyramid.details.size(); lev-- > 0;) {
    const auto [orig_rows, orig_cols] = pyramid.level_dims[lev];
    const std::size_t rows = orig_rows + orig_rows % 2;
    const std::size_t cols = orig_cols + orig_cols % 2;
    const DetailBands& bands = pyramid.details[lev];
    const std::size_t hr = rows / 2;
    const std::size_t hc = cols / 2;
    if (cur.rows() != hr || cur.cols() != hc || !bands.lh.same_shape(cur) ||
        !bands.hl.same_shape(cur) || !bands.hh.same_shape(cur))
      throw ShapeError("idwt2: subband dimensions do not match level dimensions");
    Matrix packed(rows, cols);
    for (std::size_t i = 0; i < hr; ++i) {
      for (std::size_t j = 0; j < hc; ++j) {
        packed(i, j) = cur(i, j);
        packed(i, hc + j) = bands.lh(i, j);
        packed(hr + i, j) = bands.hl(i, j);
        packed(hr + i, hc + j) = bands.hh(i, j);
      }
    }
    cur = block(synthesize(packed), 0, 0, orig_rows, orig_cols);
  }
  return cur;
}

}  // namespace prnuforge
