#include "prnuforge/prnu.hpp"

#include <algorithm>
#include <bit>
#include <complex>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "prnuforge/errors.hpp"
#include "prnuforge/image.hpp"
#include "prnuforge/parallel.hpp"
#include "prnuforge/transform.hpp"

namespace prnuforge {
namespace {

void check_same_shapes(const std::vector<Matrix>& mats, const char* what) {
  if (mats.empty()) throw ParamError(std::string(what) + ": empty input list");
  for (const auto& m : mats) {
    if (!m.same_shape(mats.front()))
      throw ShapeError(std::string(what) + ": dimension mismatch, " +
                       std::to_string(mats.front().rows()) + "x" +
                       std::to_string(mats.front().cols()) + " vs " +
                       std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

std::string size_of(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

// ---- little-endian binary helpers ----

constexpr char kRefMagic[8] = {'P', 'R', 'N', 'U', 'R', 'E', 'F', '1'};

void write_u32(std::ostream& out, std::uint32_t v) {
  const unsigned char bytes[4] = {static_cast<unsigned char>(v),
                                  static_cast<unsigned char>(v >> 8),
                                  static_cast<unsigned char>(v >> 16),
                                  static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(bytes), 4);
}

std::uint32_t read_u32(std::istream& in, const std::string& path) {
  unsigned char bytes[4];
  in.read(reinterpret_cast<char*>(bytes), 4);
  if (in.gcount() != 4) throw IoError("truncated reference file: " + path);
  return std::uint32_t(bytes[0]) | std::uint32_t(bytes[1]) << 8 |
         std::uint32_t(bytes[2]) << 16 | std::uint32_t(bytes[3]) << 24;
}

void write_f64(std::ostream& out, double v) {
  const auto u = std::bit_cast<std::uint64_t>(v);
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(u >> (8 * i));
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

double read_f64(std::istream& in, const std::string& path) {
  unsigned char bytes[8];
  in.read(reinterpret_cast<char*>(bytes), 8);
  if (in.gcount() != 8) throw IoError("truncated reference file: " + path);
  std::uint64_t u = 0;
  for (int i = 0; i < 8; ++i) u |= std::uint64_t(bytes[i]) << (8 * i);
  return std::bit_cast<double>(u);
}

}  // namespace

std::string scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::kEnhanced: return "enhanced";
    case Scheme::kMle: return "mle";
    case Scheme::kPhase: return "phase";
  }
  throw ParamError("unknown scheme tag");
}

Scheme parse_scheme(const std::string& name) {
  std::string lower = name;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return char(std::tolower(c)); });
  if (lower == "enhanced") return Scheme::kEnhanced;
  if (lower == "mle") return Scheme::kMle;
  if (lower == "phase") return Scheme::kPhase;
  throw ParamError("unknown scheme '" + name + "' (expected enhanced, mle, or phase)");
}

Matrix zero_mean(const Matrix& m) {
  if (m.empty()) throw ShapeError("zero_mean: empty input");
  Matrix out = m;
  const std::size_t rows = out.rows();
  const std::size_t cols = out.cols();
  for (std::size_t r = 0; r < rows; ++r) {
    double mean = 0.0;
    for (std::size_t c = 0; c < cols; ++c) mean += out(r, c);
    mean /= double(cols);
    for (std::size_t c = 0; c < cols; ++c) out(r, c) -= mean;
  }
  for (std::size_t c = 0; c < cols; ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < rows; ++r) mean += out(r, c);
    mean /= double(rows);
    for (std::size_t r = 0; r < rows; ++r) out(r, c) -= mean;
  }
  return out;
}

ReferencePattern estimate_enhanced(const std::vector<NoiseResidual>& residuals) {
  check_same_shapes(residuals, "estimate_enhanced");
  Matrix sum(residuals.front().rows(), residuals.front().cols());
  for (const auto& r : residuals) sum += r;
  sum *= 1.0 / double(residuals.size());
  return {"", Scheme::kEnhanced, std::move(sum), std::uint32_t(residuals.size())};
}

Matrix mle_quotient(const std::vector<GrayImage>& images,
                    const std::vector<NoiseResidual>& residuals) {
  if (images.size() != residuals.size())
    throw ParamError("mle_quotient: images and residuals differ in length");
  check_same_shapes(images, "mle_quotient");
  check_same_shapes(residuals, "mle_quotient");
  if (!images.front().same_shape(residuals.front()))
    throw ShapeError("mle_quotient: image/residual dimension mismatch");
  const std::size_t n = images.front().size();
  Matrix num(images.front().rows(), images.front().cols());
  Matrix den(images.front().rows(), images.front().cols());
  for (std::size_t k = 0; k < images.size(); ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const double pix = images[k].values()[i];
      num.values()[i] += residuals[k].values()[i] * pix;
      den.values()[i] += pix * pix;
    }
  }
  Matrix out(num.rows(), num.cols());
  for (std::size_t i = 0; i < n; ++i)
    out.values()[i] = den.values()[i] > 0.0 ? num.values()[i] / den.values()[i] : 0.0;
  return out;
}

ReferencePattern estimate_mle(const std::vector<GrayImage>& images,
                              const std::vector<NoiseResidual>& residuals) {
  Matrix cleaned = wiener_fourier(zero_mean(mle_quotient(images, residuals)));
  return {"", Scheme::kMle, std::move(cleaned), std::uint32_t(residuals.size())};
}

ReferencePattern estimate_phase(const std::vector<NoiseResidual>& residuals) {
  check_same_shapes(residuals, "estimate_phase");
  const std::size_t rows = residuals.front().rows();
  const std::size_t cols = residuals.front().cols();
  CMatrix sum(rows, cols);
  for (const auto& r : residuals) {
    const CMatrix spec = fft2(r);
    for (std::size_t i = 0; i < spec.size(); ++i) {
      const std::complex<double> c = spec.values()[i];
      const double mag = std::abs(c);
      if (mag > 0.0) sum.values()[i] += c / mag;  // zeros keep zero phase weight
    }
  }
  const double inv_n = 1.0 / double(residuals.size());
  for (auto& v : sum.values()) v *= inv_n;
  return {"", Scheme::kPhase, ifft2(sum).real(), std::uint32_t(residuals.size())};
}

ReferencePattern build_reference(const SensorManifest& sensor, Scheme scheme,
                                 const BuildOptions& options) {
  if (sensor.training_paths.empty())
    throw ParamError("build_reference: sensor '" + sensor.sensor_id +
                     "' has no training images");
  const std::size_t n = sensor.training_paths.size();
  std::vector<GrayImage> images(n);
  parallel_for(n, [&](std::size_t i) { images[i] = load_image(sensor.training_paths[i]); });
  for (std::size_t i = 0; i < n; ++i) {
    if (!images[i].same_shape(images.front()))
      throw ShapeError("build_reference: training image size mismatch for sensor '" +
                       sensor.sensor_id + "': " + size_of(images.front()) + " vs " +
                       size_of(images[i]) + " (" + sensor.training_paths[i] + ")");
  }
  std::vector<NoiseResidual> residuals(n);
  parallel_for(n, [&](std::size_t i) {
    residuals[i] = extract_residual(images[i], options.noise_variance);
    if (scheme == Scheme::kEnhanced)
      residuals[i] = enhance_residual(residuals[i], options.enhance_threshold);
  });

  ReferencePattern ref;
  switch (scheme) {
    case Scheme::kEnhanced: ref = estimate_enhanced(residuals); break;
    case Scheme::kMle: ref = estimate_mle(images, residuals); break;
    case Scheme::kPhase: ref = estimate_phase(residuals); break;
  }
  ref.sensor_id = sensor.sensor_id;
  return ref;
}

void save_reference(const ReferencePattern& ref, const std::string& path) {
  if (ref.values.empty()) throw ParamError("save_reference: empty pattern");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out.write(kRefMagic, sizeof(kRefMagic));
  const char tag = char(static_cast<std::uint8_t>(ref.scheme));
  out.write(&tag, 1);
  write_u32(out, std::uint32_t(ref.values.rows()));
  write_u32(out, std::uint32_t(ref.values.cols()));
  write_u32(out, ref.training_count);
  write_u32(out, std::uint32_t(ref.sensor_id.size()));
  out.write(ref.sensor_id.data(), std::streamsize(ref.sensor_id.size()));
  for (double v : ref.values.values()) write_f64(out, v);
  if (!out) throw IoError("failed writing " + path);
}

ReferencePattern load_reference(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  char magic[8];
  in.read(magic, 8);
  if (in.gcount() != 8) throw IoError("truncated reference file: " + path);
  if (!std::equal(magic, magic + 8, kRefMagic))
    throw FormatError("not a reference-pattern file: " + path);
  char tag = 0;
  in.read(&tag, 1);
  if (in.gcount() != 1) throw IoError("truncated reference file: " + path);
  if (tag < 0 || tag > 2) throw FormatError("unknown scheme tag in " + path);
  ReferencePattern ref;
  ref.scheme = static_cast<Scheme>(tag);
  const std::uint32_t rows = read_u32(in, path);
  const std::uint32_t cols = read_u32(in, path);
  ref.training_count = read_u32(in, path);
  if (rows == 0 || cols == 0) throw FormatError("bad dimensions in " + path);
  const std::uint32_t id_len = read_u32(in, path);
  if (id_len > (1u << 20)) throw FormatError("implausible sensor_id length in " + path);
  std::string id(id_len, '\0');
  in.read(id.data(), id_len);
  if (std::size_t(in.gcount()) != id_len) throw IoError("truncated reference file: " + path);
  ref.sensor_id = std::move(id);
  ref.values = Matrix(rows, cols);
  for (double& v : ref.values.values()) v = read_f64(in, path);
  return ref;
}

}  // namespace prnuforge
