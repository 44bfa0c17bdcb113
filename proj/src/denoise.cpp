#include "prnuforge/denoise.hpp"

#include <cmath>

#include "prnuforge/errors.hpp"
#include "prnuforge/transform.hpp"

namespace prnuforge {

Matrix denoise_wavelet(const GrayImage& img, double noise_variance) {
  WaveletPyramid pyr = dwt2(img, kWaveletLevels);
  for (DetailBands& bands : pyr.details) {
    bands.lh = wiener_local(bands.lh, noise_variance);
    bands.hl = wiener_local(bands.hl, noise_variance);
    bands.hh = wiener_local(bands.hh, noise_variance);
  }
  return idwt2(pyr);
}

NoiseResidual extract_residual(const GrayImage& img, double noise_variance) {
  return img - denoise_wavelet(img, noise_variance);
}

double enhance_map(double x, double threshold) {
  return x * std::exp(-(x * x) / (2.0 * threshold * threshold));
}

NoiseResidual enhance_residual(const NoiseResidual& residual, double threshold) {
  if (threshold <= 0.0) throw ParamError("enhance_residual: threshold must be > 0");
  WaveletPyramid pyr = dwt2(residual, kWaveletLevels);
  const auto apply = [threshold](Matrix& m) {
    for (double& v : m.values()) v = enhance_map(v, threshold);
  };
  apply(pyr.approx);
  for (DetailBands& bands : pyr.details) {
    apply(bands.lh);
    apply(bands.hl);
    apply(bands.hh);
  }
  return idwt2(pyr);
}

}  // namespace prnuforge
