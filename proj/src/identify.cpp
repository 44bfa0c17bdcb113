#include "prnuforge/identify.hpp"

#include <algorithm>
#include <cmath>

#include "prnuforge/errors.hpp"

namespace prnuforge {

double ncc(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) throw ShapeError("ncc: dimension mismatch");
  if (a.empty()) throw ShapeError("ncc: empty input");
  const double mean_a = a.mean();
  const double mean_b = b.mean();
  double dot = 0.0, norm_a = 0.0, norm_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a.values()[i] - mean_a;
    const double db = b.values()[i] - mean_b;
    dot += da * db;
    norm_a += da * da;
    norm_b += db * db;
  }
  if (norm_a == 0.0 || norm_b == 0.0)
    throw ValidationError("ncc: zero-variance (constant) input");
  return std::clamp(dot / std::sqrt(norm_a * norm_b), -1.0, 1.0);
}

AttributionResult attribute(const NoiseResidual& residual,
                            const std::vector<ReferencePattern>& refs,
                            const GrayImage* image) {
  if (refs.empty()) throw ParamError("attribute: no reference patterns");
  if (image && !image->same_shape(residual))
    throw ShapeError("attribute: image/residual dimension mismatch");
  AttributionResult result;
  for (const auto& ref : refs) {
    const std::size_t h = std::min(residual.rows(), ref.values.rows());
    const std::size_t w = std::min(residual.cols(), ref.values.cols());
    const Matrix res_c = center_crop(residual, h, w);
    Matrix ref_c = center_crop(ref.values, h, w);
    if (image) ref_c = hadamard(center_crop(*image, h, w), ref_c);
    double score = 0.0;
    try {
      score = ncc(res_c, ref_c);
    } catch (const ValidationError&) {
      score = 0.0;  // degenerate pair
    }
    result.scores[ref.sensor_id] = score;
  }
  for (const auto& [id, score] : result.scores) {
    if (result.predicted_sensor.empty() || score > result.scores[result.predicted_sensor])
      result.predicted_sensor = id;  // map order gives the lexicographic tiebreak
  }
  return result;
}

double accuracy(const std::vector<std::pair<AttributionResult, std::string>>& results) {
  if (results.empty()) throw ParamError("accuracy: empty result list");
  std::size_t correct = 0;
  for (const auto& [result, truth] : results)
    if (result.predicted_sensor == truth) ++correct;
  return double(correct) / double(results.size());
}

}  // namespace prnuforge
