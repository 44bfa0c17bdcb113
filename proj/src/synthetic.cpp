#include "prnuforge/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "prnuforge/errors.hpp"
#include "prnuforge/image.hpp"
#include "prnuforge/transform.hpp"

namespace prnuforge {
namespace {

namespace fs = std::filesystem;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Box blur with clipped windows (mean over the in-bounds part), separable.
Matrix box_blur(const Matrix& in, std::size_t radius) {
  const std::size_t rows = in.rows();
  const std::size_t cols = in.cols();
  Matrix tmp(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    double prefix = 0.0;
    std::vector<double> sums(cols + 1, 0.0);
    for (std::size_t j = 0; j < cols; ++j) {
      prefix += in(i, j);
      sums[j + 1] = prefix;
    }
    for (std::size_t j = 0; j < cols; ++j) {
      const std::size_t c0 = j > radius ? j - radius : 0;
      const std::size_t c1 = std::min(cols - 1, j + radius);
      tmp(i, j) = (sums[c1 + 1] - sums[c0]) / double(c1 - c0 + 1);
    }
  }
  Matrix out(rows, cols);
  for (std::size_t j = 0; j < cols; ++j) {
    double prefix = 0.0;
    std::vector<double> sums(rows + 1, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
      prefix += tmp(i, j);
      sums[i + 1] = prefix;
    }
    for (std::size_t i = 0; i < rows; ++i) {
      const std::size_t r0 = i > radius ? i - radius : 0;
      const std::size_t r1 = std::min(rows - 1, i + radius);
      out(i, j) = (sums[r1 + 1] - sums[r0]) / double(r1 - r0 + 1);
    }
  }
  return out;
}

std::string image_name(const std::string& sensor_id, const char* split, std::size_t index) {
  std::ostringstream name;
  name << sensor_id << "_" << split << "_" << std::setw(3) << std::setfill('0') << index
       << ".pgm";
  return name.str();
}

}  // namespace

double Rng::uniform() {
  return double(gen_() >> 11) * 0x1.0p-53;  // 53-bit mantissa in [0, 1)
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b,
                       std::uint64_t c) {
  std::uint64_t x = splitmix64(base);
  for (std::uint64_t v : {a, b, c}) x = splitmix64(x ^ splitmix64(v));
  return x;
}

Matrix make_fingerprint(std::size_t height, std::size_t width, double band_eta,
                        std::uint64_t seed) {
  if (height < 2 || width < 2) throw ParamError("make_fingerprint: need at least 2x2");
  Rng rng(seed);
  Matrix noise(height, width);
  for (double& v : noise.values()) v = rng.normal();
  const std::size_t alpha = compute_alpha(height, width, band_eta);
  Matrix k = idct2(high_select(dct2(noise), alpha).high);
  // The high band excludes DC, so the mean is already zero; normalize std.
  const double sd = std::sqrt(k.variance());
  if (sd == 0.0) throw ValidationError("make_fingerprint: degenerate band");
  const double mean = k.mean();
  for (double& v : k.values()) v = (v - mean) / sd;
  return k;
}

GrayImage make_scene(std::size_t height, std::size_t width, std::uint64_t seed) {
  Rng rng(seed);
  Matrix scene(height, width);
  for (double& v : scene.values()) v = rng.normal();
  for (int pass = 0; pass < 3; ++pass) scene = box_blur(scene, 4);
  const double mean = scene.mean();
  const double sd = std::sqrt(scene.variance());
  const double scale = sd > 0.0 ? 30.0 / sd : 0.0;
  for (double& v : scene.values())
    v = std::clamp(128.0 + (v - mean) * scale, 0.0, 255.0);
  return scene;
}

GrayImage simulate_capture(const SyntheticSensor& sensor, const GrayImage& scene,
                           std::uint64_t seed) {
  if (!sensor.fingerprint.same_shape(scene))
    throw ShapeError("simulate_capture: scene/fingerprint dimension mismatch");
  Rng rng(seed);
  GrayImage out(scene.rows(), scene.cols());
  for (std::size_t i = 0; i < scene.size(); ++i) {
    double v = scene.values()[i] * (1.0 + sensor.strength * sensor.fingerprint.values()[i]);
    if (sensor.read_noise_std > 0.0) v += sensor.read_noise_std * rng.normal();
    out.values()[i] = std::clamp(v, 0.0, 255.0);
  }
  return out;
}

GrayImage quantize(const GrayImage& img) {
  GrayImage out(img.rows(), img.cols());
  for (std::size_t i = 0; i < img.size(); ++i)
    out.values()[i] = double(std::clamp<long long>(std::llround(img.values()[i]), 0, 255));
  return out;
}

std::vector<SyntheticSensor> make_sensors(const SimulationConfig& config) {
  if (config.sensor_count == 0) throw ParamError("make_sensors: sensor_count must be >= 1");
  std::vector<SyntheticSensor> sensors;
  sensors.reserve(config.sensor_count);
  for (std::size_t i = 0; i < config.sensor_count; ++i) {
    SyntheticSensor sensor;
    sensor.sensor_id = "cam" + std::to_string(i);
    sensor.fingerprint = make_fingerprint(config.height, config.width,
                                          config.fingerprint_band_eta,
                                          mix_seed(config.seed, 0xF1, i));
    sensor.strength = config.strength;
    sensor.read_noise_std = config.read_noise_std;
    sensors.push_back(std::move(sensor));
  }
  return sensors;
}

DatasetManifest write_synthetic_dataset(const SimulationConfig& config,
                                        const std::string& out_dir) {
  if (config.train_per_sensor == 0) throw ParamError("write_synthetic_dataset: no training images");
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create directory " + out_dir + ": " + ec.message());

  const std::vector<SyntheticSensor> sensors = make_sensors(config);
  DatasetManifest manifest;
  DatasetManifest stored;  // same layout, file names relative to out_dir
  for (std::size_t i = 0; i < sensors.size(); ++i) {
    SensorManifest sm;
    SensorManifest sm_rel;
    sm.sensor_id = sm_rel.sensor_id = sensors[i].sensor_id;
    sm.native_height = sm_rel.native_height = config.height;
    sm.native_width = sm_rel.native_width = config.width;
    const auto render = [&](const char* split, std::uint64_t tag, std::size_t count,
                            std::vector<std::string>& abs_paths,
                            std::vector<std::string>& rel_paths) {
      for (std::size_t j = 0; j < count; ++j) {
        const GrayImage scene =
            make_scene(config.height, config.width, mix_seed(config.seed, tag, i, j));
        const GrayImage shot =
            simulate_capture(sensors[i], scene, mix_seed(config.seed, tag + 1, i, j));
        const std::string name = image_name(sensors[i].sensor_id, split, j);
        const std::string path = (fs::path(out_dir) / name).string();
        save_image(shot, path);
        abs_paths.push_back(path);
        rel_paths.push_back(name);
      }
    };
    render("train", 0x10, config.train_per_sensor, sm.training_paths, sm_rel.training_paths);
    render("test", 0x20, config.test_per_sensor, sm.test_paths, sm_rel.test_paths);
    manifest.sensors.push_back(std::move(sm));
    stored.sensors.push_back(std::move(sm_rel));
  }
  save_manifest(stored, (fs::path(out_dir) / "manifest.json").string());
  return manifest;
}

}  // namespace prnuforge
