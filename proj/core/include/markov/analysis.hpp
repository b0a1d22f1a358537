#pragma once

#include <optional>
#include <vector>

#include "markov/matrix.hpp"
#include "markov/spectrum.hpp"

namespace markov {

struct ClassificationReport {
  bool is_markov = false;
  bool is_generator = false;
  bool is_idempotent = false;
  bool is_doubly_stochastic = false;
  double det = 0.0;
  double trace = 0.0;
};

struct StructureInfo {
  int min_poly_degree = 1;
  bool cyclic = false;
  bool simple = false;
  bool diagonalizable = false;
  // Set when a rank decision fell within a factor of 10 of its threshold.
  bool low_confidence = false;
};

ClassificationReport classify(const Matrix& m, double tol = kDefaultTol);

/// Minimal-polynomial degree from the rank of span{A, A^2, ..., A^{d-1}}
/// with A = M - I, plus spectral flags (cyclic, simple, diagonalizable).
StructureInfo structure(const Matrix& m, double tol = kDefaultTol);

/// Extremal stationary vectors, one per closed communicating class.  They
/// span the fixed-point eigenspace intersected with the simplex.
std::vector<std::vector<double>> stationary_vectors(const Matrix& m, double tol = kDefaultTol);

/// Limit of M^n by repeated squaring, when the power sequence converges;
/// the returned matrix is idempotent to tol.
std::optional<Matrix> power_limit(const Matrix& m, double tol = kDefaultTol,
                                  int max_squarings = 64);

/// Permutation matrix with entries delta_{i, pi(j)}.  `pi` is 0-based.
Matrix permutation_matrix(const std::vector<int>& pi);

/// P_pi * M * P_pi^{-1}.
Matrix perm_conjugate(const Matrix& m, const std::vector<int>& pi);

}  // namespace markov
