#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace markov {

// Default absolute tolerance for entrywise/row-sum classification decisions.
inline constexpr double kDefaultTol = 1e-9;
// Default relative tolerance for merging nearby eigenvalues into one cluster.
inline constexpr double kDefaultClusterTol = 1e-7;

/// Dense square real matrix, row-major.  The universal carrier for Markov
/// matrices, rate matrices (generators), and their differences.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(int dim, double fill = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(int dim);
  static Matrix zero(int dim);
  /// All-ones matrix scaled by `value`.
  static Matrix constant(int dim, double value);

  int dim() const { return dim_; }
  double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * dim_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * dim_ + j]; }

  Matrix& operator+=(const Matrix& rhs);
  Matrix& operator-=(const Matrix& rhs);
  Matrix& operator*=(double s);

  Matrix transposed() const;

  double trace() const;
  std::vector<double> row_sums() const;
  std::vector<double> col_sums() const;

  /// Largest absolute entry.
  double max_abs() const;
  /// Operator infinity norm (max absolute row sum).
  double norm_inf() const;
  /// Operator 1-norm (max absolute column sum).
  double norm_one() const;

  bool all_finite() const;

  bool operator==(const Matrix& rhs) const = default;

 private:
  int dim_ = 0;
  std::vector<double> a_;
};

Matrix operator+(Matrix lhs, const Matrix& rhs);
Matrix operator-(Matrix lhs, const Matrix& rhs);
Matrix operator*(double s, Matrix m);
Matrix operator*(Matrix m, double s);
Matrix operator*(const Matrix& lhs, const Matrix& rhs);

/// Row vector times matrix.
std::vector<double> operator*(const std::vector<double>& x, const Matrix& m);

/// max_i |a_i - b_i| for equally sized vectors.
double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace markov
