#pragma once

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "markov/matrix.hpp"
#include "markov/verdict.hpp"

namespace markov::embedding {

/// Kendall's theorem for 2x2 Markov matrices: embeddable iff a + b < 1
/// (equivalently det > 0), with the unique generator
/// Q = -log(1-a-b)/(a+b) (M - I).
EmbedVerdict embed2(const Matrix& m, double tol = kDefaultTol);

/// Monotone Markov n-th root of a monotone 2x2 Markov matrix:
/// [[1-ea, ea], [eb, 1-eb]] with e = (1 - (1-a-b)^{1/n}) / (a+b).
Matrix root2(const Matrix& m, long long n);

/// All Markov square roots of a 2x2 Markov matrix, in closed form via the
/// two sign choices for the square root of the second eigenvalue.
std::vector<Matrix> all_markov_sqrt2(const Matrix& m, double tol = kDefaultTol);

/// Discriminant of the non-trivial eigenvalue pair of a 3x3 Markov matrix
/// (or generator), from the explicit entry formula.
struct Discriminant3 {
  double value = 0.0;                  // Delta (Markov) or D (generator)
  std::complex<double> plus, minus;    // lambda_+/- or mu_+/-
};

Discriminant3 markov_discriminant3(const Matrix& m);
Discriminant3 generator_discriminant3(const Matrix& q);
/// Dispatches on the row sums (1 -> Markov, 0 -> generator).
Discriminant3 discriminants3(const Matrix& m, double tol = kDefaultTol);

/// One node of a confluent Vandermonde system: eigenvalue of A = M - I
/// with its algebraic multiplicity.
struct VandermondeNode {
  double mu = 0.0;
  int multiplicity = 1;
};

/// The confluent Vandermonde matrix over powers mu^1..mu^k (k = sum of
/// multiplicities): one plain row per node, then derivative rows.  Returns
/// the matrix and its LU determinant.
std::pair<Matrix, double> confluent_vandermonde(const std::vector<VandermondeNode>& nodes);

/// Closed determinant formula: (prod_i mu_i^{m_i} gamma_{m_i}) *
/// prod_{k>l} (mu_k - mu_l)^{m_k m_l}.
double confluent_vandermonde_det_formula(const std::vector<VandermondeNode>& nodes);

/// gamma_n = det of the n x n matrix with rows (1, i, i^2, ..., i^{n-1}),
/// i = 1..n; starts 1, 1, 2, 12, 288, 34560.
double vandermonde_gamma(int n);

/// Closed-form inverse for the simple (multiplicity-one) Vandermonde system,
/// via elementary symmetric polynomials.  Cross-check only.
Matrix vandermonde_inverse_simple(const std::vector<double>& mus);

/// Coefficients alpha with sum_l alpha_l mu^l = log(1 + mu) per node plus
/// derivative conditions for multiplicities >= 2, solved by partial-pivot
/// elimination.  Throws IllConditioned above condition 1e12.
std::vector<double> log_coefficients(const std::vector<VandermondeNode>& nodes);

struct RealLog {
  Matrix log;                  // R = sum_l alpha_l A^l
  std::vector<double> alphas;  // LogCoefficients
};

/// Unique real logarithm of a cyclic Markov matrix with real spectrum;
/// absent when some eigenvalue is <= 0 (then no real logarithm exists).
/// For d = 3 the closed-form coefficients are used.
std::optional<RealLog> real_log_cyclic(const Matrix& m, double tol = kDefaultTol);

/// True when the spectrum proves that no real square root exists: some
/// negative real eigenvalue cluster with odd algebraic or odd geometric
/// multiplicity.
bool sqrt_obstruction(const Matrix& m, double tol = kDefaultTol);

/// Validates the family identities P0^2 = P0 and P0 P = P P0 = P; throws
/// InvalidFamily naming the failing identity.
void validate_poisson_family(const Matrix& p0, const Matrix& p, double tol = 1e-9);

/// M(t) = e^{-t}(P0 - I + e^{tP}) = P0 e^{tA} with A = P - I.
Matrix poisson_family(const Matrix& p0, const Matrix& p, double t, double tol = 1e-9);

struct DivisibleResult {
  Matrix m;                 // M(s)
  bool embeddable = false;  // iff P0 = I
};

/// Infinitely divisible Markov matrix M(s) built from a valid (P0, P) pair.
DivisibleResult divisible_construct(const Matrix& p0, const Matrix& p, double s,
                                    double tol = 1e-9);

/// Embeddability orchestrator: Kendall (d = 2), equal-input, minimal
/// polynomial degree <= 2, cyclic real-spectrum logarithm, and the
/// square-root obstruction; everything else is Undecided.
EmbedVerdict embed_verdict(const Matrix& m, double tol = kDefaultTol);

}  // namespace markov::embedding
