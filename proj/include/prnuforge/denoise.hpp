#pragma once

#include "prnuforge/matrix.hpp"

namespace prnuforge {

// sigma = 3 on the 0-255 scale, the customary residual-extraction setting.
inline constexpr double kDefaultNoiseVariance = 9.0;
inline constexpr double kDefaultEnhanceThreshold = 6.0;
inline constexpr int kWaveletLevels = 4;

// Wavelet-domain denoiser: wiener_local on every detail subband of a 4-level
// decomposition, approximation untouched.
Matrix denoise_wavelet(const GrayImage& img, double noise_variance = kDefaultNoiseVariance);

// residual = img - denoise_wavelet(img)
NoiseResidual extract_residual(const GrayImage& img,
                               double noise_variance = kDefaultNoiseVariance);

// The odd, magnitude-attenuating map applied per wavelet coefficient:
// e(x) = x * exp(-x^2 / (2 * threshold^2)). Peaks at |x| = threshold and
// damps stronger (scene-driven) coefficients exponentially.
double enhance_map(double x, double threshold);

// Apply enhance_map to every coefficient of the residual's wavelet
// decomposition and reconstruct.
NoiseResidual enhance_residual(const NoiseResidual& residual,
                               double threshold = kDefaultEnhanceThreshold);

}  // namespace prnuforge
