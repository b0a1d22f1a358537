#include "markov/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "markov/errors.hpp"
#include "markov/linalg.hpp"

namespace markov {

namespace {

void require_valid(const Matrix& m, double tol) {
  if (m.dim() < 1) throw InvalidMatrix("empty matrix");
  if (!m.all_finite()) throw InvalidMatrix("non-finite entries");
  if (tol <= 0.0) throw InvalidMatrix("tolerance must be positive");
}

bool rows_sum_to(const Matrix& m, double target, double tol) {
  for (double s : m.row_sums())
    if (std::abs(s - target) > tol) return false;
  return true;
}

bool entries_nonneg(const Matrix& m, double tol, bool off_diagonal_only) {
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) {
      if (off_diagonal_only && i == j) continue;
      if (m(i, j) < -tol) return false;
    }
  return true;
}

}  // namespace

ClassificationReport classify(const Matrix& m, double tol) {
  require_valid(m, tol);
  ClassificationReport r;
  r.trace = m.trace();
  r.det = determinant(m);
  r.is_markov = rows_sum_to(m, 1.0, tol) && entries_nonneg(m, tol, false);
  r.is_generator = rows_sum_to(m, 0.0, tol) && entries_nonneg(m, tol, true);
  r.is_idempotent = (m * m - m).max_abs() <= tol;
  bool cols_ok = true;
  for (double s : m.col_sums())
    if (std::abs(s - 1.0) > tol) cols_ok = false;
  r.is_doubly_stochastic = r.is_markov && cols_ok;
  return r;
}

StructureInfo structure(const Matrix& m, double tol) {
  require_valid(m, tol);
  const int d = m.dim();
  StructureInfo info;

  // Rank of the span of vec(A^k), k = 1..d-1, with A = M - I and columns
  // normalized so the singular-value threshold is scale free.
  const Matrix a = m - Matrix::identity(d);
  std::vector<std::vector<double>> cols;
  Matrix power = a;
  for (int k = 1; k <= d - 1; ++k) {
    std::vector<double> col(static_cast<std::size_t>(d) * d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) col[static_cast<std::size_t>(i) * d + j] = power(i, j);
    double norm = 0.0;
    for (double v : col) norm += v * v;
    norm = std::sqrt(norm);
    if (norm > 0.0)
      for (double& v : col) v /= norm;
    cols.push_back(std::move(col));
    if (k < d - 1) power = power * a;
  }
  int rank = 0;
  if (!cols.empty()) {
    const std::vector<double> sv = singular_values_of_columns(std::move(cols));
    const double cut = tol * std::max(sv.front(), 1e-300);
    for (double s : sv) {
      if (s > cut) ++rank;
      if (s > cut / 10.0 && s < cut * 10.0) info.low_confidence = true;
    }
  }
  info.min_poly_degree = 1 + rank;

  const Spectrum spec = spectrum(m);
  info.simple = static_cast<int>(spec.clusters.size()) == d && info.min_poly_degree == d;
  info.cyclic = info.min_poly_degree == d;
  info.diagonalizable = true;
  for (const EigenCluster& c : spec.clusters)
    if (c.geometric != c.algebraic) info.diagonalizable = false;
  if (static_cast<int>(spec.clusters.size()) == d && info.min_poly_degree != d)
    info.low_confidence = true;
  return info;
}

std::vector<std::vector<double>> stationary_vectors(const Matrix& m, double tol) {
  require_valid(m, tol);
  const ClassificationReport cls = classify(m, std::max(tol, kDefaultTol));
  if (!cls.is_markov) throw NotStochastic("stationary vectors need a Markov matrix");
  const int d = m.dim();

  // Reachability closure of the jump digraph (edges where m_ij > tol).
  std::vector<std::vector<bool>> reach(d, std::vector<bool>(d, false));
  for (int i = 0; i < d; ++i) {
    reach[i][i] = true;
    for (int j = 0; j < d; ++j)
      if (m(i, j) > tol) reach[i][j] = true;
  }
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i) {
      if (!reach[i][k]) continue;
      for (int j = 0; j < d; ++j)
        if (reach[k][j]) reach[i][j] = true;
    }

  // Closed communicating classes carry the extremal stationary vectors.
  std::vector<int> cls_of(d, -1);
  std::vector<std::vector<int>> classes;
  for (int i = 0; i < d; ++i) {
    if (cls_of[i] >= 0) continue;
    std::vector<int> members;
    for (int j = 0; j < d; ++j)
      if (reach[i][j] && reach[j][i]) members.push_back(j);
    const int id = static_cast<int>(classes.size());
    for (int j : members) cls_of[j] = id;
    classes.push_back(std::move(members));
  }

  std::vector<std::vector<double>> out;
  for (const std::vector<int>& members : classes) {
    bool closed = true;
    for (int i : members)
      for (int j = 0; j < d && closed; ++j)
        if (m(i, j) > tol && cls_of[j] != cls_of[i]) closed = false;
    if (!closed) continue;

    // Solve x P = x on the class, sum x = 1: replace one balance equation
    // with the normalization row.
    const int k = static_cast<int>(members.size());
    Matrix sys(k);
    std::vector<double> rhs(k, 0.0);
    for (int col = 0; col < k; ++col) {
      for (int row = 0; row < k; ++row)
        sys(row, col) = m(members[col], members[row]) - ((row == col) ? 1.0 : 0.0);
    }
    for (int col = 0; col < k; ++col) sys(k - 1, col) = 1.0;
    rhs[k - 1] = 1.0;
    std::vector<double> x = LuDecomposition(sys).solve(rhs);
    std::vector<double> full(d, 0.0);
    for (int idx = 0; idx < k; ++idx) full[members[idx]] = std::max(x[idx], 0.0);
    double sum = 0.0;
    for (double v : full) sum += v;
    for (double& v : full) v /= sum;
    out.push_back(std::move(full));
  }
  return out;
}

std::optional<Matrix> power_limit(const Matrix& m, double tol, int max_squarings) {
  require_valid(m, tol);
  if (!classify(m, std::max(tol, kDefaultTol)).is_markov)
    throw NotStochastic("power limit needs a Markov matrix");
  Matrix p = m;
  for (int k = 0; k < max_squarings; ++k) {
    Matrix next = p * p;
    // Convergence of the full power sequence needs both the squared
    // subsequence and the one-step shift to settle (rules out period two).
    if ((next - p).max_abs() <= tol && (p * m - p).max_abs() <= tol) {
      if ((next * next - next).max_abs() > tol) return std::nullopt;
      return next;
    }
    p = std::move(next);
  }
  return std::nullopt;
}

Matrix permutation_matrix(const std::vector<int>& pi) {
  const int d = static_cast<int>(pi.size());
  std::vector<bool> seen(d, false);
  for (int v : pi) {
    if (v < 0 || v >= d || seen[v]) throw InvalidPermutation();
    seen[v] = true;
  }
  Matrix p(d);
  for (int j = 0; j < d; ++j) p(pi[j], j) = 1.0;
  return p;
}

Matrix perm_conjugate(const Matrix& m, const std::vector<int>& pi) {
  if (static_cast<int>(pi.size()) != m.dim()) throw DimMismatch();
  const Matrix p = permutation_matrix(pi);
  return p * m * p.transposed();
}

}  // namespace markov
