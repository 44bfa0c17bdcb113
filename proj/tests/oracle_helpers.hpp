#pragma once

// Slow, obviously-correct reference implementations the tests compare the
// library against, plus a tiny deterministic RNG that shares no code with the
// library's generator.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <unistd.h>

#include "prnuforge/matrix.hpp"
#include "prnuforge/transform.hpp"

namespace testutil {

struct TestRng {
  std::uint64_t state;
  explicit TestRng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  double uniform(double lo = 0.0, double hi = 1.0) {
    return lo + (hi - lo) * (double(next() >> 11) * 0x1.0p-53);
  }
  std::size_t index(std::size_t n) { return std::size_t(next() % n); }
};

inline prnuforge::Matrix random_matrix(std::size_t rows, std::size_t cols, TestRng& rng,
                                       double lo = 0.0, double hi = 255.0) {
  prnuforge::Matrix m(rows, cols);
  for (double& v : m.values()) v = rng.uniform(lo, hi);
  return m;
}

// Direct-sum orthonormal DCT-II.
inline prnuforge::Matrix naive_dct2(const prnuforge::Matrix& x) {
  const std::size_t m = x.rows(), n = x.cols();
  const double pi = std::numbers::pi;
  prnuforge::Matrix out(m, n);
  for (std::size_t u = 0; u < m; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      double acc = 0.0;
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
          acc += x(i, j) * std::cos(pi * (2.0 * i + 1.0) * u / (2.0 * m)) *
                 std::cos(pi * (2.0 * j + 1.0) * v / (2.0 * n));
      const double su = u == 0 ? std::sqrt(1.0 / m) : std::sqrt(2.0 / m);
      const double sv = v == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
      out(u, v) = su * sv * acc;
    }
  }
  return out;
}

// Direct-sum orthonormal DCT-III (inverse of naive_dct2).
inline prnuforge::Matrix naive_idct2(const prnuforge::Matrix& c) {
  const std::size_t m = c.rows(), n = c.cols();
  const double pi = std::numbers::pi;
  prnuforge::Matrix out(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t u = 0; u < m; ++u) {
        for (std::size_t v = 0; v < n; ++v) {
          const double su = u == 0 ? std::sqrt(1.0 / m) : std::sqrt(2.0 / m);
          const double sv = v == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
          acc += su * sv * c(u, v) * std::cos(pi * (2.0 * i + 1.0) * u / (2.0 * m)) *
                 std::cos(pi * (2.0 * j + 1.0) * v / (2.0 * n));
        }
      }
      out(i, j) = acc;
    }
  }
  return out;
}

// Direct-sum unnormalized 2-D DFT.
inline prnuforge::CMatrix naive_dft2(const prnuforge::Matrix& x) {
  const std::size_t m = x.rows(), n = x.cols();
  const double pi = std::numbers::pi;
  prnuforge::CMatrix out(m, n);
  for (std::size_t u = 0; u < m; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      std::complex<double> acc = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          const double angle =
              -2.0 * pi * (double(u * i) / double(m) + double(v * j) / double(n));
          acc += x(i, j) * std::complex<double>(std::cos(angle), std::sin(angle));
        }
      }
      out(u, v) = acc;
    }
  }
  return out;
}

// Number of lattice points selected as "high band" by each mask shape.
inline std::size_t brute_high_count(std::size_t rows, std::size_t cols, std::size_t alpha,
                                    prnuforge::MaskMode mode) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      const bool high = mode == prnuforge::MaskMode::kAntiDiagonal
                            ? i + j >= alpha
                            : (i >= alpha && j >= alpha);
      count += high;
    }
  return count;
}

// Catmull-Rom kernel (a = -0.5).
inline double cubic_weight(double t) {
  t = std::abs(t);
  if (t <= 1.0) return 1.5 * t * t * t - 2.5 * t * t + 1.0;
  if (t < 2.0) return -0.5 * (t * t * t - 5.0 * t * t + 8.0 * t - 4.0);
  return 0.0;
}

// Direct 4x4 tap accumulation with per-axis index clamping.
inline prnuforge::Matrix naive_bicubic(const prnuforge::Matrix& in, std::size_t out_rows,
                                       std::size_t out_cols) {
  prnuforge::Matrix out(out_rows, out_cols);
  const double row_scale = double(in.rows()) / double(out_rows);
  const double col_scale = double(in.cols()) / double(out_cols);
  for (std::size_t r = 0; r < out_rows; ++r) {
    const double sr = (r + 0.5) * row_scale - 0.5;
    const long br = long(std::floor(sr));
    for (std::size_t c = 0; c < out_cols; ++c) {
      const double sc = (c + 0.5) * col_scale - 0.5;
      const long bc = long(std::floor(sc));
      double acc = 0.0;
      for (long i = br - 1; i <= br + 2; ++i) {
        for (long j = bc - 1; j <= bc + 2; ++j) {
          const long ci = std::clamp(i, 0L, long(in.rows()) - 1);
          const long cj = std::clamp(j, 0L, long(in.cols()) - 1);
          acc += cubic_weight(sr - double(i)) * cubic_weight(sc - double(j)) *
                 in(std::size_t(ci), std::size_t(cj));
        }
      }
      out(r, c) = acc;
    }
  }
  return out;
}

// Per-pixel window loops, no summed-area tables.
inline prnuforge::Matrix naive_wiener_local(const prnuforge::Matrix& x, double nv) {
  prnuforge::Matrix out(x.rows(), x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t c = 0; c < x.cols(); ++c) {
      double best = std::numeric_limits<double>::infinity();
      for (int w : {3, 5, 7, 9}) {
        const int radius = w / 2;
        double sum = 0.0;
        std::size_t count = 0;
        for (long i = long(r) - radius; i <= long(r) + radius; ++i) {
          for (long j = long(c) - radius; j <= long(c) + radius; ++j) {
            if (i < 0 || j < 0 || i >= long(x.rows()) || j >= long(x.cols())) continue;
            const double v = x(std::size_t(i), std::size_t(j));
            sum += v * v;
            ++count;
          }
        }
        best = std::min(best, std::max(0.0, sum / double(count) - nv));
      }
      out(r, c) = x(r, c) * best / (best + nv);
    }
  }
  return out;
}

// Scratch directory removed on scope exit.
struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    path = std::filesystem::temp_directory_path() /
           ("prnuforge_test_" + tag + "_" + std::to_string(++counter) + "_" +
            std::to_string(std::uint64_t(::getpid())));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

inline void write_bytes(const std::string& path, const void* data, std::size_t size) {
  std::ofstream out(path, std::ios::binary);
  out.write(static_cast<const char*>(data), std::streamsize(size));
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline double max_abs(const prnuforge::Matrix& m) {
  double mx = 0.0;
  for (double v : m.values()) mx = std::max(mx, std::abs(v));
  return mx;
}

inline double max_cabs_diff(const prnuforge::CMatrix& a, const prnuforge::CMatrix& b) {
  double mx = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) mx = std::max(mx, std::abs(a.values()[i] - b.values()[i]));
  return mx;
}

}  // namespace testutil
