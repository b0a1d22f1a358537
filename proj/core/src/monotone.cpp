#include "markov/monotone.hpp"

#include <algorithm>
#include <cmath>

#include "markov/errors.hpp"

namespace markov::monotone {

namespace {

constexpr double kZeroEntry = 1e-12;  // echelon-scan positivity threshold

// Row sums must agree; returns the common value.
double common_row_sum(const Matrix& b, double tol) {
  const std::vector<double> rs = b.row_sums();
  const double ref = rs.front();
  for (double s : rs)
    if (std::abs(s - ref) > tol) throw NotLevel();
  return ref;
}

// Tail sums tail[i][j] = sum_{k >= j} b(i, k).
std::vector<std::vector<double>> tail_sums(const Matrix& b) {
  const int d = b.dim();
  std::vector<std::vector<double>> tail(d, std::vector<double>(d, 0.0));
  for (int i = 0; i < d; ++i) {
    double acc = 0.0;
    for (int j = d - 1; j >= 0; --j) {
      acc += b(i, j);
      tail[i][j] = acc;
    }
  }
  return tail;
}

}  // namespace

bool ExtremalIndex::is_monotone() const {
  for (std::size_t i = 0; i + 1 < indices.size(); ++i)
    if (indices[i] > indices[i + 1]) return false;
  return true;
}

Matrix ExtremalIndex::to_matrix() const {
  const int d = dim();
  Matrix m(d);
  for (int i = 0; i < d; ++i) {
    const int l = indices[i];
    if (l < 1 || l > d) throw InvalidMatrix("index out of range");
    m(i, l - 1) = 1.0;
  }
  return m;
}

bool dominates(const std::vector<double>& x, const std::vector<double>& y, double tol) {
  if (x.size() != y.size() || x.empty()) throw DimMismatch();
  double sx = 0.0, sy = 0.0;
  for (double v : x) sx += v;
  for (double v : y) sy += v;
  if (std::abs(sx - sy) > tol) throw NotComparableLevels();
  double tx = 0.0, ty = 0.0;
  for (int m = static_cast<int>(x.size()) - 1; m >= 0; --m) {
    tx += x[m];
    ty += y[m];
    if (tx > ty + tol) return false;
  }
  return true;
}

bool is_monotone(const Matrix& b, double tol) {
  if (b.dim() < 1) throw InvalidMatrix("empty matrix");
  common_row_sum(b, tol);
  const int d = b.dim();
  const auto tail = tail_sums(b);
  // (T^{-1} B T)(i, j) = tail[i][j] - tail[i-1][j], with row 0 plain.
  for (int j = 0; j < d; ++j) {
    if (tail[0][j] < -tol) return false;
    for (int i = 1; i < d; ++i)
      if (tail[i][j] - tail[i - 1][j] < -tol) return false;
  }
  return true;
}

bool is_monotone_by_rows(const Matrix& b, double tol) {
  if (b.dim() < 1) throw InvalidMatrix("empty matrix");
  common_row_sum(b, tol);
  const int d = b.dim();
  std::vector<std::vector<double>> rows(d, std::vector<double>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) rows[i][j] = b(i, j);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (!dominates(rows[i], rows[j], tol)) return false;
  return true;
}

bool is_monotone_generator(const Matrix& q, double tol) {
  if (q.dim() < 1) throw InvalidMatrix("empty matrix");
  const int d = q.dim();
  const auto tail = tail_sums(q);
  for (int j = 0; j < d; ++j) {
    if (j != 0 && tail[0][j] < -tol) return false;
    for (int i = 1; i < d; ++i) {
      if (i == j) continue;
      if (tail[i][j] - tail[i - 1][j] < -tol) return false;
    }
  }
  return true;
}

std::vector<ExtremalIndex> monotone_extremals(int d) {
  if (d < 1) throw InvalidMatrix("dimension must be >= 1");
  std::vector<ExtremalIndex> out;
  ExtremalIndex cur;
  cur.indices.assign(d, 1);
  while (true) {
    out.push_back(cur);
    // Next non-decreasing tuple in lexicographic order.
    int pos = d - 1;
    while (pos >= 0 && cur.indices[pos] == d) --pos;
    if (pos < 0) break;
    const int v = cur.indices[pos] + 1;
    for (int i = pos; i < d; ++i) cur.indices[i] = v;
  }
  return out;
}

ExtremalIndex extremal_mul(const ExtremalIndex& k, const ExtremalIndex& l) {
  if (k.dim() != l.dim()) throw DimMismatch();
  ExtremalIndex out;
  out.indices.resize(k.dim());
  for (int i = 0; i < k.dim(); ++i) out.indices[i] = l.indices[k.indices[i] - 1];
  return out;
}

double Decomposition::weight_sum() const {
  double s = 0.0;
  for (const Term& t : terms) s += t.weight;
  return s;
}

Matrix Decomposition::recombine(int dim) const {
  Matrix m(dim);
  for (const Term& t : terms) {
    for (int i = 0; i < dim; ++i) m(i, t.index.indices[i] - 1) += t.weight;
  }
  return m;
}

Decomposition decompose(const Matrix& input, double tol) {
  const int d = input.dim();
  if (d < 1) throw InvalidMatrix("empty matrix");
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (input(i, j) < -tol) throw NotMonotone("negative entry");
  const double b = common_row_sum(input, tol);
  if (!is_monotone(input, tol)) throw NotMonotone();

  Decomposition out;
  Matrix work = input;
  double remaining = b;
  const int max_steps = d * d;
  for (int step = 0; step < max_steps && remaining > kZeroEntry; ++step) {
    // Echelon walk: j_k is the left-most column with a positive entry below
    // row i_{k-1}; i_k the lowest positive row in it.  Rows between two
    // consecutive pivots take the column of the lower pivot.
    ExtremalIndex index;
    index.indices.assign(d, 0);
    std::vector<int> bullet_rows;
    int row_start = 0;  // first row not yet assigned
    while (row_start < d) {
      int jk = -1, ik = -1;
      for (int j = 0; j < d && jk < 0; ++j) {
        for (int i = d - 1; i >= row_start; --i) {
          if (work(i, j) > kZeroEntry) {
            jk = j;
            ik = i;
            break;
          }
        }
      }
      if (jk < 0) throw NotMonotone("echelon scan failed on residual");
      for (int i = row_start; i <= ik; ++i) index.indices[i] = jk + 1;
      bullet_rows.push_back(ik);
      row_start = ik + 1;
    }
    double alpha = remaining;
    for (int r : bullet_rows) alpha = std::min(alpha, work(r, index.indices[r] - 1));
    if (alpha <= kZeroEntry) throw NotMonotone("degenerate greedy step");
    for (int i = 0; i < d; ++i) {
      double& cell = work(i, index.indices[i] - 1);
      cell -= alpha;
      if (cell < kZeroEntry) cell = 0.0;
    }
    out.terms.push_back({alpha, std::move(index)});
    remaining -= alpha;
  }
  if (remaining > std::max(tol, d * kZeroEntry))
    throw NotMonotone("greedy decomposition did not terminate within d^2 steps");

  // Absorb the zero-snap residue so weights sum exactly to b.
  const double total = out.weight_sum();
  if (total > 0.0 && b > 0.0 && total != b) {
    const double scale = b / total;
    for (auto& t : out.terms) t.weight *= scale;
  }
  return out;
}

Matrix t_matrix(int d) {
  Matrix t(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j <= i; ++j) t(i, j) = 1.0;
  return t;
}

Matrix t_inverse(int d) {
  Matrix t(d);
  for (int i = 0; i < d; ++i) {
    t(i, i) = 1.0;
    if (i > 0) t(i, i - 1) = -1.0;
  }
  return t;
}

}  // namespace markov::monotone
