#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "prnuforge/matrix.hpp"

namespace prnuforge {

// 2-D FFT, unnormalized forward; ifft2 applies the 1/(rows*cols) factor.
// Arbitrary dimensions (Bluestein for non powers of two).
CMatrix fft2(const CMatrix& in);
CMatrix fft2(const Matrix& in);
CMatrix ifft2(const CMatrix& in);

// Orthonormal separable 2-D DCT-II and its inverse (DCT-III).
Matrix dct2(const Matrix& img);
Matrix idct2(const Matrix& coeffs);

// alpha = round(eta * min(height, width)), half away from zero.
std::size_t compute_alpha(std::size_t height, std::size_t width, double eta);

// Geometry of the low/high coefficient split. The anti-diagonal triangle
// {(i,j) : i+j >= alpha} is the default; the rectangle {i >= alpha and
// j >= alpha} is kept for reproduction studies.
enum class MaskMode { kAntiDiagonal, kRectangle };

struct FreqSplit {
  Matrix low;         // high support zeroed
  Matrix high;        // low support zeroed
  std::size_t alpha;  // threshold used
};

// Partition a coefficient plane: low + high == plane exactly, disjoint
// supports. Requires 0 <= alpha <= min(rows, cols).
FreqSplit high_select(const Matrix& plane, std::size_t alpha,
                      MaskMode mode = MaskMode::kAntiDiagonal);

// Catmull-Rom bicubic (a = -0.5), border replication, center-aligned grid.
Matrix bicubic_resize(const Matrix& img, std::size_t new_height, std::size_t new_width);

// Periodized orthogonal Daubechies 8-tap wavelet. Odd-sized axes are
// symmetrically extended by one sample before a level and trimmed on
// reconstruction, so round trips are exact for every size.
struct DetailBands {
  Matrix lh;  // rows highpass, columns lowpass
  Matrix hl;  // rows lowpass, columns highpass
  Matrix hh;  // both highpass
};

struct WaveletPyramid {
  Matrix approx;                                       // coarsest approximation
  std::vector<DetailBands> details;                    // [0] = finest level
  std::vector<std::array<std::size_t, 2>> level_dims;  // input size entering each level
};

WaveletPyramid dwt2(const Matrix& img, int levels);
Matrix idwt2(const WaveletPyramid& pyramid);

// Local adaptive Wiener shrinkage: variance estimated as the minimum over
// square windows {3,5,7,9} of max(0, local mean of x^2 - noise_variance).
Matrix wiener_local(const Matrix& subband, double noise_variance);

// Wiener shrinkage of Fourier magnitudes with the overall spectral variance
// as the noise floor; phase preserved, real part returned. Removes periodic
// artifacts from an estimated pattern.
Matrix wiener_fourier(const Matrix& m);

}  // namespace prnuforge
