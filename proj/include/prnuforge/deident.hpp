#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "prnuforge/matrix.hpp"
#include "prnuforge/prnu.hpp"
#include "prnuforge/transform.hpp"

namespace prnuforge {

inline constexpr double kDefaultAnonEta = 0.9;
inline constexpr double kDefaultSpoofEta = 0.7;

// Zero the high band of the DCT plane and invert: only the low-frequency
// coefficients (scene content) survive. Output intentionally unclamped.
GrayImage anonymize(const GrayImage& img, double eta = kDefaultAnonEta,
                    MaskMode mode = MaskMode::kAntiDiagonal);

// Average of the candidates' high-band reconstructions (alpha from the
// candidate dimensions), bicubic-resized to out_height x out_width.
Matrix target_high_field(const std::vector<GrayImage>& candidates, double eta,
                         std::size_t out_height, std::size_t out_width,
                         MaskMode mode = MaskMode::kAntiDiagonal);

struct SpoofConfig {
  double eta = kDefaultSpoofEta;
  std::vector<std::string> candidate_paths;
};

// I' = idct2(dct2(T_high) + I_low): the source keeps its low band (alpha from
// its own dimensions), the target's averaged high field is added on top.
GrayImage spoof_with_candidates(const GrayImage& img,
                                const std::vector<GrayImage>& candidates, double eta,
                                MaskMode mode = MaskMode::kAntiDiagonal);

// Convenience wrapper that loads config.candidate_paths first.
GrayImage spoof(const GrayImage& img, const SpoofConfig& config);

// The three classical reference-pattern perturbations. Operands are
// center-cropped to common dimensions first.
GrayImage baseline_remove(const GrayImage& img, const ReferencePattern& ref, double gamma);
GrayImage baseline_inject(const GrayImage& img, const ReferencePattern& ref, double gamma);
GrayImage baseline_substitute(const GrayImage& img, const ReferencePattern& source_ref,
                              const ReferencePattern& target_ref, double gamma, double beta);

}  // namespace prnuforge
