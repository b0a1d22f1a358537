#include "markov/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "markov/errors.hpp"

namespace markov {

LuDecomposition::LuDecomposition(Matrix m) : lu_(std::move(m)) {
  const int n = lu_.dim();
  perm_.resize(n);
  for (int i = 0; i < n; ++i) perm_[i] = i;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(lu_(k, k));
    for (int i = k + 1; i < n; ++i) {
      if (std::abs(lu_(i, k)) > best) {
        best = std::abs(lu_(i, k));
        piv = i;
      }
    }
    if (best == 0.0) {
      singular_ = true;
      continue;
    }
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(lu_(piv, j), lu_(k, j));
      std::swap(perm_[piv], perm_[k]);
      sign_ = -sign_;
    }
    for (int i = k + 1; i < n; ++i) {
      lu_(i, k) /= lu_(k, k);
      const double f = lu_(i, k);
      if (f == 0.0) continue;
      for (int j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
    }
  }
}

double LuDecomposition::det() const {
  double d = sign_;
  for (int i = 0; i < lu_.dim(); ++i) d *= lu_(i, i);
  return d;
}

std::vector<double> LuDecomposition::solve(std::vector<double> rhs) const {
  if (singular_) throw InvalidMatrix("singular system");
  const int n = lu_.dim();
  if (static_cast<int>(rhs.size()) != n) throw DimMismatch();
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = rhs[perm_[i]];
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
  for (int i = n - 1; i >= 0; --i) {
    for (int j = i + 1; j < n; ++j) x[i] -= lu_(i, j) * x[j];
    x[i] /= lu_(i, i);
  }
  return x;
}

Matrix LuDecomposition::solve(Matrix rhs) const {
  const int n = lu_.dim();
  if (rhs.dim() != n) throw DimMismatch();
  Matrix out(n);
  std::vector<double> col(n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) col[i] = rhs(i, j);
    std::vector<double> x = solve(col);
    for (int i = 0; i < n; ++i) out(i, j) = x[i];
  }
  return out;
}

Matrix LuDecomposition::inverse() const { return solve(Matrix::identity(lu_.dim())); }

double determinant(const Matrix& m) { return LuDecomposition(m).det(); }

double condition_one(const Matrix& m) {
  LuDecomposition lu(m);
  if (lu.singular()) return std::numeric_limits<double>::infinity();
  return m.norm_one() * lu.inverse().norm_one();
}

std::vector<double> singular_values_of_columns(std::vector<std::vector<double>> cols) {
  const int n = static_cast<int>(cols.size());
  if (n == 0) return {};
  // One-sided Jacobi: rotate column pairs until all are orthogonal.
  const double eps = std::numeric_limits<double>::epsilon();
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double app = 0.0, aqq = 0.0, apq = 0.0;
        for (std::size_t k = 0; k < cols[p].size(); ++k) {
          app += cols[p][k] * cols[p][k];
          aqq += cols[q][k] * cols[q][k];
          apq += cols[p][k] * cols[q][k];
        }
        if (std::abs(apq) <= 1e2 * eps * std::sqrt(app * aqq) || apq == 0.0) continue;
        rotated = true;
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = std::copysign(1.0, tau) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t k = 0; k < cols[p].size(); ++k) {
          const double vp = cols[p][k];
          const double vq = cols[q][k];
          cols[p][k] = c * vp - s * vq;
          cols[q][k] = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }
  std::vector<double> sv(n);
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (double v : cols[j]) s += v * v;
    sv[j] = std::sqrt(s);
  }
  std::sort(sv.rbegin(), sv.rend());
  return sv;
}

std::vector<double> singular_values(const Matrix& m) {
  std::vector<std::vector<double>> cols(m.dim(), std::vector<double>(m.dim()));
  for (int j = 0; j < m.dim(); ++j)
    for (int i = 0; i < m.dim(); ++i) cols[j][i] = m(i, j);
  return singular_values_of_columns(std::move(cols));
}

int numerical_rank(const std::vector<double>& sv, double threshold) {
  if (sv.empty()) return 0;
  const double cut = threshold * sv.front();
  int rank = 0;
  for (double s : sv)
    if (s > cut && s > 0.0) ++rank;
  return rank;
}

}  // namespace markov
