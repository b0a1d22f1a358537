#pragma once

#include <optional>
#include <vector>

#include "markov/matrix.hpp"
#include "markov/verdict.hpp"

namespace markov::equal_input {

enum class Kind { matrix, generator };

/// Compressed form of an equal-input matrix or generator: the common row
/// (c_1, ..., c_d) of C.  The summatory parameter c is always recomputed
/// from the vector, never cached.
struct Params {
  Kind kind = Kind::matrix;
  std::vector<double> c_vec;

  int dim() const { return static_cast<int>(c_vec.size()); }
  double sum() const;
};

/// sgn(1 - c): the C2-grading of the non-singular equal-input monoid,
/// with 0 for the singular (c = 1) case.
int grade_sign(const Params& p);

/// M_C = (1-c) I + C for matrices, Q_C = C - c I for generators.
/// Validates non-negativity and, for matrices, c <= 1 + min_i c_i.
Matrix make(const Params& p);

/// Inverse of make: recognizes equal-input structure within tol per entry.
std::optional<Params> detect(const Matrix& m, double tol = kDefaultTol);

/// Parameters of M_C * M_C': C'' = (1-c') C + C', c'' = c + c' - c c'.
Params product(const Params& p, const Params& q);

/// Parameters of M_C^n; the summatory parameter becomes 1 - (1-c)^n.
Params power(const Params& p, long long n);

/// lim_n M_C^n: I for c = 0, (1/c) C for 0 < c < 2, absent for c = 2.
std::optional<Matrix> limit(const Params& p);

/// Parameters of exp(Q_C); the summatory parameter becomes 1 - e^{-c}.
Params exp(const Params& p);

/// Embeddability of an equal-input Markov matrix: embeddable with the unique
/// equal-input generator -log(1-c)/c (M - I) iff 0 <= c < 1; for c = 1 the
/// matrix is a singular idempotent; for c > 1 it is non-embeddable when d is
/// even and undecided otherwise.
EmbedVerdict embed(const Matrix& m, double tol = kDefaultTol);

/// Equal-input BCH combination: generator parameters with e^Q e^Q' = e^Q''
/// and summatory parameter c + c'.  Commuting inputs reduce to Q + Q'.
Params bch(const Params& p, const Params& q);

/// Equal-input monotone Markov n-th root, for c in [0,1) or c = 1
/// (idempotent, which is its own root).
Matrix root(const Matrix& m, long long n, double tol = kDefaultTol);

/// Convex decomposition over the extremals {I, G_d, E_1, ..., E_d}.
struct Decomposition {
  double identity_weight = 0.0;
  double g_weight = 0.0;
  std::vector<double> column_weights;  // weight of E_i per column

  Matrix recombine() const;
};

Decomposition decompose(const Matrix& m, double tol = kDefaultTol);

/// G_d, the unique equal-input matrix with maximal summatory parameter
/// d/(d-1): off-diagonal entries 1/(d-1), zero diagonal.
Matrix g_matrix(int dim);

/// E_i: every row equals the standard basis vector e_i (0-based column).
Matrix column_idempotent(int dim, int column);

}  // namespace markov::equal_input
