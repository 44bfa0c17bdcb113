#include "prnuforge/deident.hpp"

#include <algorithm>
#include <utility>

#include "prnuforge/errors.hpp"
#include "prnuforge/image.hpp"

namespace prnuforge {
namespace {

// Crop policy shared with the classifier: both operands meet at their
// elementwise-minimum dimensions.
std::pair<Matrix, Matrix> reconcile(const Matrix& a, const Matrix& b) {
  const std::size_t h = std::min(a.rows(), b.rows());
  const std::size_t w = std::min(a.cols(), b.cols());
  return {center_crop(a, h, w), center_crop(b, h, w)};
}

}  // namespace

GrayImage anonymize(const GrayImage& img, double eta, MaskMode mode) {
  const std::size_t alpha = compute_alpha(img.rows(), img.cols(), eta);
  return idct2(high_select(dct2(img), alpha, mode).low);
}

Matrix target_high_field(const std::vector<GrayImage>& candidates, double eta,
                         std::size_t out_height, std::size_t out_width, MaskMode mode) {
  if (candidates.empty()) throw ParamError("target_high_field: no candidate images");
  for (const auto& c : candidates) {
    if (!c.same_shape(candidates.front()))
      throw ShapeError("target_high_field: mixed candidate sizes " +
                       std::to_string(candidates.front().rows()) + "x" +
                       std::to_string(candidates.front().cols()) + " vs " +
                       std::to_string(c.rows()) + "x" + std::to_string(c.cols()));
  }
  const std::size_t alpha =
      compute_alpha(candidates.front().rows(), candidates.front().cols(), eta);
  Matrix sum(candidates.front().rows(), candidates.front().cols());
  for (const auto& candidate : candidates)
    sum += idct2(high_select(dct2(candidate), alpha, mode).high);
  sum *= 1.0 / double(candidates.size());
  return bicubic_resize(sum, out_height, out_width);
}

GrayImage spoof_with_candidates(const GrayImage& img,
                                const std::vector<GrayImage>& candidates, double eta,
                                MaskMode mode) {
  const Matrix field = target_high_field(candidates, eta, img.rows(), img.cols(), mode);
  const std::size_t alpha = compute_alpha(img.rows(), img.cols(), eta);
  const Matrix low = high_select(dct2(img), alpha, mode).low;
  return idct2(dct2(field) + low);
}

GrayImage spoof(const GrayImage& img, const SpoofConfig& config) {
  if (config.candidate_paths.empty())
    throw ValidationError("spoof: candidate image list is empty");
  std::vector<GrayImage> candidates;
  candidates.reserve(config.candidate_paths.size());
  for (const auto& path : config.candidate_paths) candidates.push_back(load_image(path));
  return spoof_with_candidates(img, candidates, config.eta);
}

GrayImage baseline_remove(const GrayImage& img, const ReferencePattern& ref, double gamma) {
  auto [i, k] = reconcile(img, ref.values);
  k *= gamma;
  return i - k;
}

GrayImage baseline_inject(const GrayImage& img, const ReferencePattern& ref, double gamma) {
  auto [i, k] = reconcile(img, ref.values);
  return i + gamma * hadamard(i, k);
}

GrayImage baseline_substitute(const GrayImage& img, const ReferencePattern& source_ref,
                              const ReferencePattern& target_ref, double gamma,
                              double beta) {
  const std::size_t h = std::min({img.rows(), source_ref.values.rows(),
                                  target_ref.values.rows()});
  const std::size_t w = std::min({img.cols(), source_ref.values.cols(),
                                  target_ref.values.cols()});
  return center_crop(img, h, w) - gamma * center_crop(source_ref.values, h, w) +
         beta * center_crop(target_ref.values, h, w);
}

}  // namespace prnuforge
