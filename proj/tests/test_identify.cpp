#include "prnuforge/identify.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "oracle_helpers.hpp"
#include "prnuforge/errors.hpp"

using namespace prnuforge;
using testutil::TestRng;

namespace {

ReferencePattern make_ref(std::string id, Matrix values) {
  ReferencePattern ref;
  ref.sensor_id = std::move(id);
  ref.values = std::move(values);
  return ref;
}

}  // namespace

TEST_CASE("ncc hand values") {
  const Matrix a = Matrix::from_rows({{1, 2}, {3, 4}});
  CHECK(ncc(a, a) == doctest::Approx(1.0).epsilon(1e-15));
  // b = 5 - a reverses the ordering exactly.
  CHECK(ncc(a, Matrix::from_rows({{4, 3}, {2, 1}})) == doctest::Approx(-1.0).epsilon(1e-15));
  // Swapping the bottom row's entries: dot = 4, both norms 5 -> 0.8.
  CHECK(ncc(a, Matrix::from_rows({{1, 2}, {4, 3}})) == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("ncc is invariant to affine rescaling and never leaves [-1, 1]") {
  TestRng rng(41);
  const Matrix a = testutil::random_matrix(9, 7, rng, -5.0, 5.0);
  Matrix b = a;
  b *= 3.0;
  for (double& v : b.values()) v += 11.0;
  CHECK(ncc(a, b) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ncc(a, b) <= 1.0);  // the clamp guards rounding above unity
  b *= -1.0;
  CHECK(ncc(a, b) >= -1.0);
  CHECK(ncc(a, b) == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("ncc validation") {
  const Matrix a = Matrix::from_rows({{1, 2}, {3, 4}});
  CHECK_THROWS_AS(ncc(a, Matrix(2, 3, 1.0)), ShapeError);
  CHECK_THROWS_AS(ncc(Matrix(), Matrix()), ShapeError);
  CHECK_THROWS_AS(ncc(a, Matrix(2, 2, 7.0)), ValidationError);
  CHECK_THROWS_AS(ncc(Matrix(2, 2, 7.0), a), ValidationError);
}

TEST_CASE("attribute picks the matching reference") {
  TestRng rng(42);
  const NoiseResidual residual = testutil::random_matrix(16, 16, rng, -1.0, 1.0);
  const std::vector<ReferencePattern> refs = {
      make_ref("cam0", testutil::random_matrix(16, 16, rng, -1.0, 1.0)),
      make_ref("cam1", residual),
      make_ref("cam2", testutil::random_matrix(16, 16, rng, -1.0, 1.0))};
  const AttributionResult result = attribute(residual, refs);
  CHECK(result.predicted_sensor == "cam1");
  CHECK(result.scores.at("cam1") == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(result.scores.size() == 3);
  for (const auto& [id, score] : result.scores)
    if (id != "cam1") CHECK(score < 0.9);
}

TEST_CASE("attribute breaks score ties lexicographically") {
  TestRng rng(43);
  const NoiseResidual residual = testutil::random_matrix(8, 8, rng, -1.0, 1.0);
  const std::vector<ReferencePattern> refs = {make_ref("zeta", residual),
                                              make_ref("alpha", residual)};
  const AttributionResult result = attribute(residual, refs);
  CHECK(result.scores.at("alpha") == result.scores.at("zeta"));
  CHECK(result.predicted_sensor == "alpha");
}

TEST_CASE("attribute maps degenerate pairs to score 0") {
  TestRng rng(44);
  const NoiseResidual residual = testutil::random_matrix(8, 8, rng, -1.0, 1.0);
  const std::vector<ReferencePattern> refs = {make_ref("flat", Matrix(8, 8, 3.0)),
                                              make_ref("live", residual)};
  const AttributionResult result = attribute(residual, refs);
  CHECK(result.scores.at("flat") == 0.0);
  CHECK(result.predicted_sensor == "live");
}

TEST_CASE("attribute center-crops mismatched sizes to the shared center") {
  TestRng rng(45);
  const NoiseResidual residual = testutil::random_matrix(6, 8, rng, -1.0, 1.0);
  const Matrix ref_values = testutil::random_matrix(4, 4, rng, -1.0, 1.0);
  const AttributionResult result = attribute(residual, {make_ref("small", ref_values)});
  // Shared window is 4x4; the residual's crop starts at row (6-4)/2, col (8-4)/2.
  Matrix window(4, 4);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) window(r, c) = residual(r + 1, c + 2);
  CHECK(result.scores.at("small") == doctest::Approx(ncc(window, ref_values)).epsilon(1e-15));
}

TEST_CASE("attribute multiplicative variant correlates against image .* reference") {
  TestRng rng(46);
  const GrayImage image = testutil::random_matrix(8, 8, rng, 1.0, 255.0);
  const Matrix ref_values = testutil::random_matrix(8, 8, rng, -1.0, 1.0);
  const NoiseResidual residual = testutil::random_matrix(8, 8, rng, -1.0, 1.0);
  const AttributionResult result = attribute(residual, {make_ref("m", ref_values)}, &image);
  CHECK(result.scores.at("m") ==
        doctest::Approx(ncc(residual, hadamard(image, ref_values))).epsilon(1e-15));
  // The modulated self-match: residual proportional to image .* ref scores 1.
  const AttributionResult self = attribute(hadamard(image, ref_values), {make_ref("m", ref_values)}, &image);
  CHECK(self.scores.at("m") == doctest::Approx(1.0).epsilon(1e-14));
  const GrayImage wrong_size(4, 4, 1.0);
  CHECK_THROWS_AS(attribute(residual, {make_ref("m", ref_values)}, &wrong_size), ShapeError);
}

TEST_CASE("attribute argmax is invariant to positive reference rescaling") {
  TestRng rng(47);
  const NoiseResidual residual = testutil::random_matrix(12, 12, rng, -1.0, 1.0);
  std::vector<ReferencePattern> refs;
  for (int k = 0; k < 4; ++k)
    refs.push_back(make_ref("s" + std::to_string(k), testutil::random_matrix(12, 12, rng, -1.0, 1.0)));
  const std::string baseline = attribute(residual, refs).predicted_sensor;
  for (auto& ref : refs) ref.values *= 250.0;
  CHECK(attribute(residual, refs).predicted_sensor == baseline);
}

TEST_CASE("attribute requires at least one reference") {
  CHECK_THROWS_AS(attribute(Matrix(4, 4, 1.0), {}), ParamError);
}

TEST_CASE("accuracy is the correct fraction") {
  AttributionResult r1;
  r1.predicted_sensor = "a";
  AttributionResult r2;
  r2.predicted_sensor = "b";
  AttributionResult r3;
  r3.predicted_sensor = "a";
  CHECK(accuracy({{r1, "a"}, {r2, "b"}, {r3, "c"}}) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(accuracy({{r1, "x"}}) == 0.0);
  CHECK_THROWS_AS(accuracy({}), ParamError);
}
