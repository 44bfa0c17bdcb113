#pragma once

#include <string>
#include <utility>
#include <vector>

#include "prnuforge/manifest.hpp"
#include "prnuforge/matrix.hpp"
#include "prnuforge/prnu.hpp"
#include "prnuforge/transform.hpp"

namespace prnuforge {

struct ExperimentOptions {
  double noise_variance = kDefaultNoiseVariance;
  double enhance_threshold = kDefaultEnhanceThreshold;
  bool enhanced_test_residual = false;  // enhance test residuals too
  bool multiplicative_score = false;    // correlate against image .* reference
  MaskMode mask_mode = MaskMode::kAntiDiagonal;
};

struct SensorAnonStats {
  double original_acc = 0.0;
  double after_acc = 0.0;         // on quantized (saved-and-reloaded) outputs
  double after_acc_unquantized = 0.0;
  double change = 0.0;            // original_acc - after_acc
};

struct UtilityStats {
  double median_psnr_db = 0.0;
  double median_low_freq_ncc = 0.0;
  double min_low_freq_ncc = 0.0;
};

struct AnonymizationReport {
  Scheme scheme = Scheme::kEnhanced;
  double eta = 0.0;
  std::vector<std::pair<std::string, SensorAnonStats>> per_sensor;  // manifest order
  double average_change = 0.0;
  UtilityStats utility;
};

struct SpoofPairStat {
  std::string source;
  std::string target;
  double ssr = 0.0;
  double ssr_unquantized = 0.0;
};

struct SpoofReport {
  Scheme scheme = Scheme::kEnhanced;
  double eta = 0.0;
  std::vector<SpoofPairStat> per_pair;
  double average_ssr = 0.0;
};

// Full anonymization protocol: build references, attribute every test image
// before and after anonymize(eta). Residual extraction is shared across
// schemes, so the multi-scheme overload is much cheaper than separate runs.
std::vector<AnonymizationReport> run_anonymization_experiment(
    const DatasetManifest& manifest, const std::vector<Scheme>& schemes, double eta,
    const ExperimentOptions& options = {});
AnonymizationReport run_anonymization_experiment(const DatasetManifest& manifest,
                                                 Scheme scheme, double eta,
                                                 const ExperimentOptions& options = {});

// Spoof every source test image toward the target (candidates = the target's
// test set); SSR = fraction attributed to the target among all references.
std::vector<SpoofReport> run_spoof_experiment(
    const DatasetManifest& manifest, const std::vector<Scheme>& schemes, double eta,
    const std::vector<std::pair<std::string, std::string>>& pairs,
    const ExperimentOptions& options = {});
SpoofReport run_spoof_experiment(const DatasetManifest& manifest, Scheme scheme,
                                 double eta,
                                 const std::vector<std::pair<std::string, std::string>>& pairs,
                                 const ExperimentOptions& options = {});

// Every ordered (source, target) pair of distinct sensors.
std::vector<std::pair<std::string, std::string>> all_ordered_pairs(
    const DatasetManifest& manifest);

struct UtilityProxy {
  double psnr_db = 0.0;       // +inf when the images are identical
  double low_freq_ncc = 0.0;  // ncc of the eta = 0.9 low bands; 0 if degenerate
};

UtilityProxy utility_proxy(const GrayImage& original, const GrayImage& modified);
double psnr(const GrayImage& a, const GrayImage& b);

// Grid for tuning the baseline perturbations' gamma/beta.
std::vector<double> default_gamma_grid();  // {0.25, 0.5, ..., 2.0}

// Pick the grid value that maximizes the attribution-accuracy drop when
// baseline_remove(gamma) is applied to the sensor's test images.
double grid_search_remove_gamma(const DatasetManifest& manifest,
                                const std::string& sensor_id, Scheme scheme,
                                const std::vector<double>& grid,
                                const ExperimentOptions& options = {});

}  // namespace prnuforge
