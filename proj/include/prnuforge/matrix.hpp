#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace prnuforge {

// Row-major dense matrix of doubles. The one pixel/coefficient container used
// throughout: images, residuals, reference patterns, DCT planes.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);

  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::vector<double>& values() { return data_; }
  const std::vector<double>& values() const { return data_; }

  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  double sum() const;
  double mean() const;
  double min_value() const;
  double max_value() const;
  double variance() const;
  bool all_finite() const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double scalar);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix lhs, const Matrix& rhs);
Matrix operator-(Matrix lhs, const Matrix& rhs);
Matrix operator*(double scalar, Matrix m);

Matrix hadamard(const Matrix& a, const Matrix& b);
double sum_squares(const Matrix& m);
double max_abs_diff(const Matrix& a, const Matrix& b);
Matrix center_crop(const Matrix& m, std::size_t height, std::size_t width);

// Complex companion, only as wide as the Fourier code needs.
class CMatrix {
 public:
  using value_type = std::complex<double>;

  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols, value_type fill = {});

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  value_type& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  value_type operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::vector<value_type>& values() { return data_; }
  const std::vector<value_type>& values() const { return data_; }

  Matrix real() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<value_type> data_;
};

// Luminance raster on the 0-255 scale; values are clamped only when encoded.
using GrayImage = Matrix;
// Signed noise field extracted from one image.
using NoiseResidual = Matrix;

}  // namespace prnuforge
