#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "prnuforge/denoise.hpp"
#include "prnuforge/manifest.hpp"
#include "prnuforge/matrix.hpp"

namespace prnuforge {

enum class Scheme : std::uint8_t { kEnhanced = 0, kMle = 1, kPhase = 2 };

std::string scheme_name(Scheme scheme);
Scheme parse_scheme(const std::string& name);  // "enhanced" | "mle" | "phase"

struct ReferencePattern {
  std::string sensor_id;
  Scheme scheme = Scheme::kEnhanced;
  Matrix values;
  std::uint32_t training_count = 0;
};

// Subtract each row's mean, then each resulting column's mean; afterwards all
// row and column means are zero.
Matrix zero_mean(const Matrix& m);

// Mean of (already enhanced) residuals.
ReferencePattern estimate_enhanced(const std::vector<NoiseResidual>& residuals);

// The raw MLE field sum(W_i * I_i) / sum(I_i^2), elementwise, before any
// cleanup; cells whose denominator is 0 yield 0.
Matrix mle_quotient(const std::vector<GrayImage>& images,
                    const std::vector<NoiseResidual>& residuals);

// mle_quotient, then zero_mean, then wiener_fourier.
ReferencePattern estimate_mle(const std::vector<GrayImage>& images,
                              const std::vector<NoiseResidual>& residuals);

// Average of magnitude-whitened residual spectra (F/|F|, zeros kept zero),
// inverse transformed, real part.
ReferencePattern estimate_phase(const std::vector<NoiseResidual>& residuals);

struct BuildOptions {
  double noise_variance = kDefaultNoiseVariance;
  double enhance_threshold = kDefaultEnhanceThreshold;
};

// Load the sensor's training images and dispatch to the scheme's estimator
// (Enhanced works on enhanced residuals, MLE and Phase on plain ones).
ReferencePattern build_reference(const SensorManifest& sensor, Scheme scheme,
                                 const BuildOptions& options = {});

// Binary reference-pattern file: magic "PRNUREF1", scheme tag, dimensions,
// training count, sensor id, then row-major little-endian doubles.
void save_reference(const ReferencePattern& ref, const std::string& path);
ReferencePattern load_reference(const std::string& path);

}  // namespace prnuforge
