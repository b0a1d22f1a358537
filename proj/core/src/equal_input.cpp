#include "markov/equal_input.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "markov/analysis.hpp"
#include "markov/errors.hpp"
#include "markov/monotone.hpp"

namespace markov::equal_input {

namespace {

// (1 - e^{-x}) / x, continued analytically through x = 0.
double omexp_over(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x / 2.0 + x * x / 6.0;
  return -std::expm1(-x) / x;
}

// -log(1 - c) / c, continued analytically through c = 0.
double nlog1m_over(double c) {
  if (std::abs(c) < 1e-8) return 1.0 + c / 2.0 + c * c / 3.0;
  return -std::log1p(-c) / c;
}

void require_params(const Params& p) {
  if (p.c_vec.empty()) throw InvalidMatrix("empty parameter vector");
  for (double v : p.c_vec) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw InvalidMatrix("negative or non-finite c_i");
  }
}

}  // namespace

double Params::sum() const {
  double s = 0.0;
  for (double v : c_vec) s += v;
  return s;
}

int grade_sign(const Params& p) {
  const double c = p.sum();
  if (c < 1.0) return 1;
  if (c > 1.0) return -1;
  return 0;
}

Matrix make(const Params& p) {
  require_params(p);
  const int d = p.dim();
  const double c = p.sum();
  if (p.kind == Kind::matrix) {
    for (int i = 0; i < d; ++i) {
      if (c > 1.0 + p.c_vec[i] + 1e-15)
        throw NotStochastic("row " + std::to_string(i) + ": c > 1 + c_i");
    }
  }
  Matrix m(d);
  const double diag = (p.kind == Kind::matrix) ? 1.0 - c : -c;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = p.c_vec[j] + ((i == j) ? diag : 0.0);
  return m;
}

std::optional<Params> detect(const Matrix& m, double tol) {
  if (m.dim() < 1 || !m.all_finite()) throw InvalidMatrix("bad matrix");
  const int d = m.dim();

  Params p;
  p.c_vec.assign(d, 0.0);
  if (d == 1) {
    if (std::abs(m(0, 0) - 1.0) <= tol) {
      p.kind = Kind::matrix;
      return p;
    }
    if (std::abs(m(0, 0)) <= tol) {
      p.kind = Kind::generator;
      return p;
    }
    return std::nullopt;
  }

  for (int j = 0; j < d; ++j) {
    double mean = 0.0;
    for (int i = 0; i < d; ++i)
      if (i != j) mean += m(i, j);
    mean /= (d - 1);
    for (int i = 0; i < d; ++i)
      if (i != j && std::abs(m(i, j) - mean) > tol) return std::nullopt;
    p.c_vec[j] = std::max(mean, 0.0);
    if (mean < -tol) return std::nullopt;
  }

  const double c = p.sum();
  const std::vector<double> rs = m.row_sums();
  const double diag_tol = tol * d;
  bool matrix_kind = true;
  bool generator_kind = true;
  for (int i = 0; i < d; ++i) {
    if (std::abs(rs[i] - 1.0) > tol) matrix_kind = false;
    if (std::abs(rs[i]) > tol) generator_kind = false;
    if (std::abs(m(i, i) - (1.0 - c + p.c_vec[i])) > diag_tol) matrix_kind = false;
    if (std::abs(m(i, i) - (p.c_vec[i] - c)) > diag_tol) generator_kind = false;
  }
  if (matrix_kind) {
    p.kind = Kind::matrix;
    return p;
  }
  if (generator_kind) {
    p.kind = Kind::generator;
    return p;
  }
  return std::nullopt;
}

Params product(const Params& p, const Params& q) {
  if (p.dim() != q.dim()) throw DimMismatch();
  if (p.kind != Kind::matrix || q.kind != Kind::matrix)
    throw NotStochastic("product is defined on the matrix monoid");
  require_params(p);
  require_params(q);
  Params out;
  out.kind = Kind::matrix;
  out.c_vec.resize(p.dim());
  // C'' = (1 - c') C + C'
  const double cprime = q.sum();
  for (int j = 0; j < p.dim(); ++j)
    out.c_vec[j] = std::max((1.0 - cprime) * p.c_vec[j] + q.c_vec[j], 0.0);
  return out;
}

Params power(const Params& p, long long n) {
  if (p.kind != Kind::matrix) throw NotStochastic("power is defined on the matrix monoid");
  if (n < 0) throw InvalidMatrix("negative power");
  require_params(p);
  Params out;
  out.kind = Kind::matrix;
  out.c_vec.assign(p.dim(), 0.0);
  const double c = p.sum();
  if (n == 0 || c == 0.0) return out;
  // M_C^n = (1-c)^n I + ((1 - (1-c)^n) / c) C
  const double scale = (1.0 - std::pow(1.0 - c, static_cast<double>(n))) / c;
  for (int j = 0; j < p.dim(); ++j) out.c_vec[j] = scale * p.c_vec[j];
  return out;
}

std::optional<Matrix> limit(const Params& p) {
  if (p.kind != Kind::matrix) throw NotStochastic("limit is defined on the matrix monoid");
  require_params(p);
  const double c = p.sum();
  const int d = p.dim();
  if (c == 0.0) return Matrix::identity(d);
  if (c >= 2.0) return std::nullopt;  // c = 2 occurs only for d = 2 and oscillates
  Matrix m(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = p.c_vec[j] / c;
  return m;
}

Params exp(const Params& p) {
  if (p.kind != Kind::generator) throw InvalidMatrix("exp expects generator parameters");
  require_params(p);
  Params out;
  out.kind = Kind::matrix;
  out.c_vec.resize(p.dim());
  const double scale = omexp_over(p.sum());  // (1 - e^{-c}) / c
  for (int j = 0; j < p.dim(); ++j) out.c_vec[j] = scale * p.c_vec[j];
  return out;
}

EmbedVerdict embed(const Matrix& m, double tol) {
  const std::optional<Params> detected = detect(m, tol);
  if (!detected) throw NotEqualInput();
  if (detected->kind != Kind::matrix) throw NotStochastic("embed expects a Markov matrix");
  const Params& p = *detected;
  const double c = p.sum();
  const int d = p.dim();

  EmbedVerdict v;
  if (std::abs(c - 1.0) <= tol) {
    v.status = EmbedStatus::NonEmbeddable;
    v.reason = "singular idempotent";
    return v;
  }
  if (c < 1.0) {
    const double factor = nlog1m_over(c);  // -log(1-c)/c -> 1 as c -> 0
    Matrix q = factor * (make(p) - Matrix::identity(d));
    v.status = EmbedStatus::Embeddable;
    v.generator = std::move(q);
    v.method = EmbedMethod::equal_input;
    v.monotone_generator = monotone::is_monotone_generator(*v.generator, tol);
    v.unique_in_zero_row_sum_algebra = (d == 2);
    v.reason = (d == 2) ? "unique generator (Kendall)"
                        : "unique among equal-input generators";
    return v;
  }
  if (d % 2 == 0) {
    v.status = EmbedStatus::NonEmbeddable;
    v.reason = "equal-input with c > 1 and even dimension";
    return v;
  }
  v.status = EmbedStatus::Undecided;
  v.reason = "no equal-input generator exists for c > 1; odd-dimension cases are unresolved";
  return v;
}

Params bch(const Params& p, const Params& q) {
  if (p.dim() != q.dim()) throw DimMismatch();
  if (p.kind != Kind::generator || q.kind != Kind::generator)
    throw InvalidMatrix("bch expects generator parameters");
  require_params(p);
  require_params(q);
  const double c = p.sum();
  const double cprime = q.sum();
  Params out;
  out.kind = Kind::generator;
  out.c_vec.resize(p.dim());
  // C'' scales so that e^Q e^Q' = e^Q'' with c'' = c + c'.
  const double denom = omexp_over(c + cprime);
  const double wp = std::exp(-cprime) * omexp_over(c);
  const double wq = omexp_over(cprime);
  for (int j = 0; j < p.dim(); ++j)
    out.c_vec[j] = (wp * p.c_vec[j] + wq * q.c_vec[j]) / denom;
  return out;
}

Matrix root(const Matrix& m, long long n, double tol) {
  if (n < 1) throw InvalidMatrix("root order must be >= 1");
  const std::optional<Params> detected = detect(m, tol);
  if (!detected) throw NotEqualInput();
  if (detected->kind != Kind::matrix) throw NotStochastic("root expects a Markov matrix");
  const double c = detected->sum();
  if (c > 1.0 + tol) throw NoEqualInputRoot("no equal-input root for c > 1");
  if (std::abs(c - 1.0) <= tol || n == 1) return m;
  // exp(Q/n) = (1-c)^{1/n} I + (1 - (1-c)^{1/n}) C / c
  Params rp;
  rp.kind = Kind::matrix;
  rp.c_vec.resize(detected->dim());
  const double root_factor = (c == 0.0) ? 0.0
                                        : (1.0 - std::exp(std::log1p(-c) / static_cast<double>(n))) / c;
  for (int j = 0; j < detected->dim(); ++j) rp.c_vec[j] = root_factor * detected->c_vec[j];
  return make(rp);
}

Matrix Decomposition::recombine() const {
  const int d = static_cast<int>(column_weights.size());
  Matrix m = identity_weight * Matrix::identity(d) + g_weight * g_matrix(d);
  for (int j = 0; j < d; ++j) {
    if (column_weights[j] == 0.0) continue;
    for (int i = 0; i < d; ++i) m(i, j) += column_weights[j];
  }
  return m;
}

Decomposition decompose(const Matrix& m, double tol) {
  const std::optional<Params> detected = detect(m, tol);
  if (!detected || detected->kind != Kind::matrix) throw NotEqualInput();
  const Params& p = *detected;
  const double c = p.sum();
  const int d = p.dim();

  Decomposition out;
  out.column_weights.assign(d, 0.0);
  if (c <= 1.0) {
    out.column_weights = p.c_vec;
    out.identity_weight = 1.0 - c;
    return out;
  }
  const double cmin = *std::min_element(p.c_vec.begin(), p.c_vec.end());
  out.g_weight = (d - 1) * cmin;
  double t_sum = 0.0;
  for (int j = 0; j < d; ++j) {
    out.column_weights[j] = p.c_vec[j] - cmin;
    t_sum += out.column_weights[j];
  }
  out.identity_weight = std::max(1.0 - out.g_weight - t_sum, 0.0);
  return out;
}

Matrix g_matrix(int dim) {
  if (dim < 2) throw InvalidMatrix("G_d needs d >= 2");
  Matrix g(dim, 1.0 / (dim - 1));
  for (int i = 0; i < dim; ++i) g(i, i) = 0.0;
  return g;
}

Matrix column_idempotent(int dim, int column) {
  if (column < 0 || column >= dim) throw InvalidMatrix("column out of range");
  Matrix e(dim);
  for (int i = 0; i < dim; ++i) e(i, column) = 1.0;
  return e;
}

}  // namespace markov::equal_input
