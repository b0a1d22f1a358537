#pragma once

#include <vector>

#include "markov/matrix.hpp"

namespace markov {

/// LU factorization with partial pivoting.  Singular inputs are allowed;
/// det() is then 0 and solve()/inverse() refuse to run.
class LuDecomposition {
 public:
  explicit LuDecomposition(Matrix m);

  bool singular() const { return singular_; }
  double det() const;

  std::vector<double> solve(std::vector<double> rhs) const;
  Matrix solve(Matrix rhs) const;
  Matrix inverse() const;

 private:
  Matrix lu_;
  std::vector<int> perm_;
  int sign_ = 1;
  bool singular_ = false;
};

double determinant(const Matrix& m);

/// 1-norm condition number ||B||_1 ||B^-1||_1; +inf when singular.
double condition_one(const Matrix& m);

/// Singular values of the matrix whose columns are given (each column the
/// same length), in descending order.  One-sided Jacobi, so small singular
/// values are resolved to about machine precision times the largest one.
std::vector<double> singular_values_of_columns(std::vector<std::vector<double>> cols);

std::vector<double> singular_values(const Matrix& m);

/// Number of singular values above threshold * max(singular values).
int numerical_rank(const std::vector<double>& sv, double threshold);

}  // namespace markov
