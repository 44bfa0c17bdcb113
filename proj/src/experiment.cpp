#include "prnuforge/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <mutex>

#include "prnuforge/deident.hpp"
#include "prnuforge/denoise.hpp"
#include "prnuforge/errors.hpp"
#include "prnuforge/identify.hpp"
#include "prnuforge/image.hpp"
#include "prnuforge/parallel.hpp"
#include "prnuforge/synthetic.hpp"

namespace prnuforge {
namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

double fraction(const std::vector<char>& hits) {
  std::size_t count = 0;
  for (char h : hits) count += h != 0;
  return double(count) / double(hits.size());
}

NoiseResidual test_residual(const GrayImage& img, const ExperimentOptions& options) {
  NoiseResidual r = extract_residual(img, options.noise_variance);
  if (options.enhanced_test_residual) r = enhance_residual(r, options.enhance_threshold);
  return r;
}

bool attributed_to(const NoiseResidual& residual, const std::vector<ReferencePattern>& refs,
                   const GrayImage& img, const ExperimentOptions& options,
                   const std::string& sensor_id) {
  const GrayImage* image = options.multiplicative_score ? &img : nullptr;
  return attribute(residual, refs, image).predicted_sensor == sensor_id;
}

// References for every sensor under each scheme. The plain residuals are
// computed once per training image and reused by all schemes.
std::vector<std::vector<ReferencePattern>> build_refs_shared(
    const DatasetManifest& manifest, const std::vector<Scheme>& schemes,
    const ExperimentOptions& options) {
  if (schemes.empty()) throw ParamError("experiment: no schemes given");
  if (manifest.sensors.size() < 2)
    throw ValidationError("experiment: need at least 2 sensors, manifest has " +
                          std::to_string(manifest.sensors.size()));
  std::vector<std::vector<ReferencePattern>> refs(schemes.size());
  for (auto& per_scheme : refs) per_scheme.resize(manifest.sensors.size());

  for (std::size_t s = 0; s < manifest.sensors.size(); ++s) {
    const SensorManifest& sensor = manifest.sensors[s];
    const std::size_t n = sensor.training_paths.size();
    if (n == 0) throw ParamError("sensor " + sensor.sensor_id + " has no training images");
    std::vector<GrayImage> images(n);
    parallel_for(n, [&](std::size_t i) { images[i] = load_image(sensor.training_paths[i]); });
    for (std::size_t i = 1; i < n; ++i) {
      if (!images[i].same_shape(images[0]))
        throw ShapeError("training image " + sensor.training_paths[i] + " is " +
                         std::to_string(images[i].rows()) + "x" +
                         std::to_string(images[i].cols()) + ", expected " +
                         std::to_string(images[0].rows()) + "x" +
                         std::to_string(images[0].cols()));
    }
    std::vector<NoiseResidual> residuals(n);
    parallel_for(n, [&](std::size_t i) {
      residuals[i] = extract_residual(images[i], options.noise_variance);
    });
    for (std::size_t si = 0; si < schemes.size(); ++si) {
      ReferencePattern ref;
      switch (schemes[si]) {
        case Scheme::kEnhanced: {
          std::vector<NoiseResidual> enhanced(n);
          parallel_for(n, [&](std::size_t i) {
            enhanced[i] = enhance_residual(residuals[i], options.enhance_threshold);
          });
          ref = estimate_enhanced(enhanced);
          break;
        }
        case Scheme::kMle:
          ref = estimate_mle(images, residuals);
          break;
        case Scheme::kPhase:
          ref = estimate_phase(residuals);
          break;
      }
      ref.sensor_id = sensor.sensor_id;
      ref.training_count = static_cast<std::uint32_t>(n);
      refs[si][s] = std::move(ref);
    }
  }
  return refs;
}

}  // namespace

std::vector<AnonymizationReport> run_anonymization_experiment(
    const DatasetManifest& manifest, const std::vector<Scheme>& schemes, double eta,
    const ExperimentOptions& options) {
  const auto refs = build_refs_shared(manifest, schemes, options);

  std::vector<AnonymizationReport> reports(schemes.size());
  for (std::size_t si = 0; si < schemes.size(); ++si) {
    reports[si].scheme = schemes[si];
    reports[si].eta = eta;
  }

  std::vector<double> psnrs;
  std::vector<double> nccs;
  for (const SensorManifest& sensor : manifest.sensors) {
    const std::size_t n = sensor.test_paths.size();
    if (n == 0) throw ParamError("sensor " + sensor.sensor_id + " has no test images");
    std::vector<std::vector<char>> orig_ok(schemes.size(), std::vector<char>(n, 0));
    std::vector<std::vector<char>> after_q_ok(schemes.size(), std::vector<char>(n, 0));
    std::vector<std::vector<char>> after_u_ok(schemes.size(), std::vector<char>(n, 0));
    std::vector<double> img_psnr(n, 0.0);
    std::vector<double> img_ncc(n, 0.0);

    parallel_for(n, [&](std::size_t i) {
      const GrayImage img = load_image(sensor.test_paths[i]);
      const NoiseResidual residual = test_residual(img, options);
      const GrayImage anon = anonymize(img, eta, options.mask_mode);
      const GrayImage anon_q = quantize(anon);  // what save + reload yields
      const NoiseResidual residual_u = test_residual(anon, options);
      const NoiseResidual residual_q = test_residual(anon_q, options);
      for (std::size_t si = 0; si < schemes.size(); ++si) {
        orig_ok[si][i] = attributed_to(residual, refs[si], img, options, sensor.sensor_id);
        after_u_ok[si][i] = attributed_to(residual_u, refs[si], anon, options, sensor.sensor_id);
        after_q_ok[si][i] = attributed_to(residual_q, refs[si], anon_q, options, sensor.sensor_id);
      }
      const UtilityProxy u = utility_proxy(img, anon);
      img_psnr[i] = u.psnr_db;
      img_ncc[i] = u.low_freq_ncc;
    });

    psnrs.insert(psnrs.end(), img_psnr.begin(), img_psnr.end());
    nccs.insert(nccs.end(), img_ncc.begin(), img_ncc.end());
    for (std::size_t si = 0; si < schemes.size(); ++si) {
      SensorAnonStats stats;
      stats.original_acc = fraction(orig_ok[si]);
      stats.after_acc = fraction(after_q_ok[si]);
      stats.after_acc_unquantized = fraction(after_u_ok[si]);
      stats.change = stats.original_acc - stats.after_acc;
      reports[si].per_sensor.emplace_back(sensor.sensor_id, stats);
    }
  }

  UtilityStats utility;
  utility.median_psnr_db = median(psnrs);
  utility.median_low_freq_ncc = median(nccs);
  utility.min_low_freq_ncc = nccs.empty() ? 0.0 : *std::min_element(nccs.begin(), nccs.end());
  for (AnonymizationReport& report : reports) {
    double total_change = 0.0;
    for (const auto& [id, stats] : report.per_sensor) total_change += stats.change;
    report.average_change = total_change / double(report.per_sensor.size());
    report.utility = utility;
  }
  return reports;
}

AnonymizationReport run_anonymization_experiment(const DatasetManifest& manifest,
                                                 Scheme scheme, double eta,
                                                 const ExperimentOptions& options) {
  return run_anonymization_experiment(manifest, std::vector<Scheme>{scheme}, eta,
                                      options)[0];
}

std::vector<SpoofReport> run_spoof_experiment(
    const DatasetManifest& manifest, const std::vector<Scheme>& schemes, double eta,
    const std::vector<std::pair<std::string, std::string>>& pairs,
    const ExperimentOptions& options) {
  if (pairs.empty()) throw ParamError("run_spoof_experiment: no pairs given");
  for (const auto& [src, tgt] : pairs) {
    find_sensor(manifest, src);
    find_sensor(manifest, tgt);
  }
  const auto refs = build_refs_shared(manifest, schemes, options);

  std::vector<SpoofReport> reports(schemes.size());
  for (std::size_t si = 0; si < schemes.size(); ++si) {
    reports[si].scheme = schemes[si];
    reports[si].eta = eta;
    reports[si].per_pair.resize(pairs.size());
  }

  // Group by target so the candidate images and T_high spectra are shared.
  std::map<std::string, std::vector<std::size_t>> by_target;
  for (std::size_t p = 0; p < pairs.size(); ++p) by_target[pairs[p].second].push_back(p);

  for (const auto& [target_id, pair_indices] : by_target) {
    const SensorManifest& target = find_sensor(manifest, target_id);
    if (target.test_paths.empty())
      throw ParamError("sensor " + target_id + " has no test images to use as candidates");
    std::vector<GrayImage> candidates(target.test_paths.size());
    parallel_for(candidates.size(),
                 [&](std::size_t i) { candidates[i] = load_image(target.test_paths[i]); });

    // DCT of the target's averaged high field, keyed by source dimensions.
    std::map<std::pair<std::size_t, std::size_t>, Matrix> field_cache;
    std::mutex cache_mutex;
    const auto field_dct = [&](std::size_t h, std::size_t w) {
      std::lock_guard<std::mutex> lock(cache_mutex);
      const auto key = std::make_pair(h, w);
      auto it = field_cache.find(key);
      if (it == field_cache.end()) {
        const Matrix field = target_high_field(candidates, eta, h, w, options.mask_mode);
        it = field_cache.emplace(key, dct2(field)).first;
      }
      return it->second;
    };

    for (std::size_t p : pair_indices) {
      const SensorManifest& source = find_sensor(manifest, pairs[p].first);
      const std::size_t n = source.test_paths.size();
      if (n == 0)
        throw ParamError("sensor " + source.sensor_id + " has no test images");
      std::vector<std::vector<char>> hit_q(schemes.size(), std::vector<char>(n, 0));
      std::vector<std::vector<char>> hit_u(schemes.size(), std::vector<char>(n, 0));
      parallel_for(n, [&](std::size_t i) {
        const GrayImage img = load_image(source.test_paths[i]);
        const std::size_t alpha = compute_alpha(img.rows(), img.cols(), eta);
        Matrix mixed = field_dct(img.rows(), img.cols());
        mixed += high_select(dct2(img), alpha, options.mask_mode).low;
        const GrayImage spoofed = idct2(mixed);
        const GrayImage spoofed_q = quantize(spoofed);
        const NoiseResidual residual_u = test_residual(spoofed, options);
        const NoiseResidual residual_q = test_residual(spoofed_q, options);
        for (std::size_t si = 0; si < schemes.size(); ++si) {
          hit_u[si][i] = attributed_to(residual_u, refs[si], spoofed, options, target_id);
          hit_q[si][i] = attributed_to(residual_q, refs[si], spoofed_q, options, target_id);
        }
      });
      for (std::size_t si = 0; si < schemes.size(); ++si) {
        SpoofPairStat& stat = reports[si].per_pair[p];
        stat.source = pairs[p].first;
        stat.target = target_id;
        stat.ssr = fraction(hit_q[si]);
        stat.ssr_unquantized = fraction(hit_u[si]);
      }
    }
  }

  for (SpoofReport& report : reports) {
    double total = 0.0;
    for (const SpoofPairStat& stat : report.per_pair) total += stat.ssr;
    report.average_ssr = total / double(report.per_pair.size());
  }
  return reports;
}

SpoofReport run_spoof_experiment(const DatasetManifest& manifest, Scheme scheme, double eta,
                                 const std::vector<std::pair<std::string, std::string>>& pairs,
                                 const ExperimentOptions& options) {
  return run_spoof_experiment(manifest, std::vector<Scheme>{scheme}, eta, pairs, options)[0];
}

std::vector<std::pair<std::string, std::string>> all_ordered_pairs(
    const DatasetManifest& manifest) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const SensorManifest& src : manifest.sensors)
    for (const SensorManifest& tgt : manifest.sensors)
      if (src.sensor_id != tgt.sensor_id) pairs.emplace_back(src.sensor_id, tgt.sensor_id);
  return pairs;
}

double psnr(const GrayImage& a, const GrayImage& b) {
  if (a.empty() || b.empty()) throw ParamError("psnr: empty image");
  if (!a.same_shape(b)) throw ShapeError("psnr: dimension mismatch");
  double mse = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a.values()[i] - b.values()[i];
    mse += d * d;
  }
  mse /= double(a.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

UtilityProxy utility_proxy(const GrayImage& original, const GrayImage& modified) {
  if (original.empty() || modified.empty()) throw ParamError("utility_proxy: empty image");
  const std::size_t h = std::min(original.rows(), modified.rows());
  const std::size_t w = std::min(original.cols(), modified.cols());
  const GrayImage a = center_crop(original, h, w);
  const GrayImage b = center_crop(modified, h, w);
  UtilityProxy proxy;
  proxy.psnr_db = psnr(a, b);
  const std::size_t alpha = compute_alpha(h, w, kDefaultAnonEta);
  const Matrix low_a = high_select(dct2(a), alpha).low;
  const Matrix low_b = high_select(dct2(b), alpha).low;
  try {
    proxy.low_freq_ncc = ncc(low_a, low_b);
  } catch (const ValidationError&) {
    proxy.low_freq_ncc = 0.0;
  }
  return proxy;
}

std::vector<double> default_gamma_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 8; ++i) grid.push_back(0.25 * i);
  return grid;
}

double grid_search_remove_gamma(const DatasetManifest& manifest,
                                const std::string& sensor_id, Scheme scheme,
                                const std::vector<double>& grid,
                                const ExperimentOptions& options) {
  if (grid.empty()) throw ParamError("grid_search_remove_gamma: empty grid");
  const SensorManifest& sensor = find_sensor(manifest, sensor_id);
  const std::size_t n = sensor.test_paths.size();
  if (n == 0) throw ParamError("sensor " + sensor_id + " has no test images");
  const auto refs = build_refs_shared(manifest, {scheme}, options)[0];
  const ReferencePattern* own = nullptr;
  for (const ReferencePattern& ref : refs)
    if (ref.sensor_id == sensor_id) own = &ref;

  std::vector<GrayImage> tests(n);
  parallel_for(n, [&](std::size_t i) { tests[i] = load_image(sensor.test_paths[i]); });

  double best_gamma = grid.front();
  double best_acc = std::numeric_limits<double>::infinity();
  for (double gamma : grid) {
    std::vector<char> hits(n, 0);
    parallel_for(n, [&](std::size_t i) {
      const GrayImage removed = quantize(baseline_remove(tests[i], *own, gamma));
      const NoiseResidual residual = test_residual(removed, options);
      hits[i] = attributed_to(residual, refs, removed, options, sensor_id);
    });
    const double acc = fraction(hits);
    if (acc < best_acc) {
      best_acc = acc;
      best_gamma = gamma;
    }
  }
  return best_gamma;
}

}  // namespace prnuforge
