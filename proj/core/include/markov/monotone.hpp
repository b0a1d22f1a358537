#pragma once

#include <vector>

#include "markov/matrix.hpp"

namespace markov::monotone {

/// Index tuple (l_1, ..., l_d) of the {0,1} Markov matrix whose row i is the
/// basis vector e_{l_i}.  Entries are 1-based as in the usual notation.
struct ExtremalIndex {
  std::vector<int> indices;

  int dim() const { return static_cast<int>(indices.size()); }
  bool is_monotone() const;  // non-decreasing tuple
  Matrix to_matrix() const;

  bool operator==(const ExtremalIndex&) const = default;
  bool operator<(const ExtremalIndex& rhs) const { return indices < rhs.indices; }
};

/// Stochastic dominance x <= y: every tail sum of x is at most the one of y.
/// Requires both vectors in the same level set (equal sums within tol).
bool dominates(const std::vector<double>& x, const std::vector<double>& y,
               double tol = kDefaultTol);

/// Monotonicity via non-negativity of T^{-1} B T (T lower-triangular ones).
/// Defined for non-negative matrices with equal row sums.
bool is_monotone(const Matrix& b, double tol = kDefaultTol);

/// Equivalent monotonicity test through pairwise row dominance.
bool is_monotone_by_rows(const Matrix& b, double tol = kDefaultTol);

/// Generator monotonicity: off-diagonal entries of T^{-1} Q T non-negative.
bool is_monotone_generator(const Matrix& q, double tol = kDefaultTol);

/// All non-decreasing index tuples for dimension d, lexicographically
/// ordered; there are binom(2d-1, d) of them.
std::vector<ExtremalIndex> monotone_extremals(int d);

/// E_k E_l = E_{l_{k_1}, ..., l_{k_d}}.
ExtremalIndex extremal_mul(const ExtremalIndex& k, const ExtremalIndex& l);

struct Decomposition {
  struct Term {
    double weight;
    ExtremalIndex index;
  };
  std::vector<Term> terms;

  double weight_sum() const;
  Matrix recombine(int dim) const;
};

/// Greedy extremal decomposition of a monotone non-negative matrix with
/// equal row sums b: peels one monotone {0,1} matrix per step along the
/// row-echelon structure, terminating within d^2 steps.
Decomposition decompose(const Matrix& b, double tol = kDefaultTol);

/// The lower-triangular all-ones matrix T and its inverse.
Matrix t_matrix(int d);
Matrix t_inverse(int d);

}  // namespace markov::monotone
