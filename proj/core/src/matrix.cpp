#include "markov/matrix.hpp"

#include <cmath>
#include <cstdlib>

#include "markov/errors.hpp"

namespace markov {

Matrix::Matrix(int dim, double fill)
    : dim_(dim), a_(static_cast<std::size_t>(dim) * dim, fill) {
  if (dim < 0) throw InvalidMatrix("negative dimension");
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  dim_ = static_cast<int>(rows.size());
  a_.reserve(static_cast<std::size_t>(dim_) * dim_);
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != dim_) throw InvalidMatrix("ragged rows");
    for (double v : row) a_.push_back(v);
  }
}

Matrix Matrix::identity(int dim) {
  Matrix m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::zero(int dim) { return Matrix(dim); }

Matrix Matrix::constant(int dim, double value) { return Matrix(dim, value); }

Matrix& Matrix::operator+=(const Matrix& rhs) {
  if (rhs.dim_ != dim_) throw DimMismatch();
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += rhs.a_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
  if (rhs.dim_ != dim_) throw DimMismatch();
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= rhs.a_[k];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& v : a_) v *= s;
  return *this;
}

Matrix Matrix::transposed() const {
  Matrix t(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double Matrix::trace() const {
  double t = 0.0;
  for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

std::vector<double> Matrix::row_sums() const {
  std::vector<double> s(dim_, 0.0);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) s[i] += (*this)(i, j);
  return s;
}

std::vector<double> Matrix::col_sums() const {
  std::vector<double> s(dim_, 0.0);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) s[j] += (*this)(i, j);
  return s;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : a_) m = std::max(m, std::abs(v));
  return m;
}

double Matrix::norm_inf() const {
  double m = 0.0;
  for (int i = 0; i < dim_; ++i) {
    double s = 0.0;
    for (int j = 0; j < dim_; ++j) s += std::abs((*this)(i, j));
    m = std::max(m, s);
  }
  return m;
}

double Matrix::norm_one() const {
  double m = 0.0;
  for (int j = 0; j < dim_; ++j) {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) s += std::abs((*this)(i, j));
    m = std::max(m, s);
  }
  return m;
}

bool Matrix::all_finite() const {
  for (double v : a_)
    if (!std::isfinite(v)) return false;
  return true;
}

Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }
Matrix operator*(double s, Matrix m) { return m *= s; }
Matrix operator*(Matrix m, double s) { return m *= s; }

Matrix operator*(const Matrix& lhs, const Matrix& rhs) {
  if (lhs.dim() != rhs.dim()) throw DimMismatch();
  const int d = lhs.dim();
  Matrix out(d);
  for (int i = 0; i < d; ++i) {
    for (int k = 0; k < d; ++k) {
      const double v = lhs(i, k);
      if (v == 0.0) continue;
      for (int j = 0; j < d; ++j) out(i, j) += v * rhs(k, j);
    }
  }
  return out;
}

std::vector<double> operator*(const std::vector<double>& x, const Matrix& m) {
  if (static_cast<int>(x.size()) != m.dim()) throw DimMismatch();
  std::vector<double> out(x.size(), 0.0);
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) out[j] += x[i] * m(i, j);
  return out;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw DimMismatch();
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace markov
