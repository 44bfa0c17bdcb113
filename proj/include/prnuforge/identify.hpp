#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "prnuforge/matrix.hpp"
#include "prnuforge/prnu.hpp"

namespace prnuforge {

struct AttributionResult {
  std::string predicted_sensor;          // argmax of scores, lexicographic tiebreak
  std::map<std::string, double> scores;  // sensor_id -> ncc
};

// Pearson correlation of the flattened matrices, in [-1, 1]. Throws
// ValidationError when either input has zero variance; the classifier maps
// that case to a score of 0.
double ncc(const Matrix& a, const Matrix& b);

// Score the residual against every reference (center-cropping both operands
// to their common dimensions) and pick the best. When `image` is non-null the
// score is ncc(residual, image .* reference) — the multiplicative variant.
AttributionResult attribute(const NoiseResidual& residual,
                            const std::vector<ReferencePattern>& refs,
                            const GrayImage* image = nullptr);

double accuracy(const std::vector<std::pair<AttributionResult, std::string>>& results);

}  // namespace prnuforge
