#include "markov/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "markov/analysis.hpp"
#include "markov/equal_input.hpp"
#include "markov/errors.hpp"
#include "markov/expm.hpp"
#include "markov/linalg.hpp"
#include "markov/monotone.hpp"
#include "markov/spectrum.hpp"

namespace markov::embedding {

namespace {

constexpr double kImagTol = 1e-9;       // spectrum-is-real decision
constexpr double kCondLimit = 1e12;     // Vandermonde solve condition limit
constexpr double kClampWidth = 1e-9;    // off-diagonal clamp before the generator test

// -log(1 - c) / c, continued analytically through c = 0.
double nlog1m_over(double c) {
  if (std::abs(c) < 1e-8) return 1.0 + c / 2.0 + c * c / 3.0;
  return -std::log1p(-c) / c;
}

void require_markov(const Matrix& m, double tol) {
  if (!classify(m, std::max(tol, kDefaultTol)).is_markov)
    throw NotStochastic();
}

// Zero out off-diagonal entries in (-kClampWidth, 0) and rebalance each
// diagonal so row sums stay exactly zero.  Returns the number of clamps.
int clamp_generator(Matrix& q) {
  int clamped = 0;
  for (int i = 0; i < q.dim(); ++i) {
    for (int j = 0; j < q.dim(); ++j) {
      if (i == j) continue;
      if (q(i, j) < 0.0 && q(i, j) > -kClampWidth) {
        q(i, j) = 0.0;
        ++clamped;
      }
    }
    double off = 0.0;
    for (int j = 0; j < q.dim(); ++j)
      if (j != i) off += q(i, j);
    q(i, i) = -off;
  }
  return clamped;
}

bool is_generator_matrix(const Matrix& q, double tol) {
  for (int i = 0; i < q.dim(); ++i)
    for (int j = 0; j < q.dim(); ++j)
      if (i != j && q(i, j) < -tol) return false;
  for (double s : q.row_sums())
    if (std::abs(s) > tol) return false;
  return true;
}

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// Falling factorial l (l-1) ... (l-k+1).
double falling(int l, int k) {
  double f = 1.0;
  for (int i = 0; i < k; ++i) f *= (l - i);
  return f;
}

void check_nodes(const std::vector<VandermondeNode>& nodes) {
  if (nodes.empty()) throw InvalidMatrix("empty node list");
  for (const VandermondeNode& n : nodes) {
    if (n.multiplicity < 1) throw InvalidMatrix("multiplicity must be >= 1");
    if (n.mu == 0.0) throw InvalidMatrix("zero interpolation node");
  }
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = i + 1; j < nodes.size(); ++j)
      if (std::abs(nodes[i].mu - nodes[j].mu) <=
          1e-12 * (1.0 + std::abs(nodes[i].mu)))
        throw DuplicateNode();
}

Matrix build_confluent(const std::vector<VandermondeNode>& nodes) {
  int k = 0;
  for (const VandermondeNode& n : nodes) k += n.multiplicity;
  Matrix b(k);
  int row = 0;
  for (const VandermondeNode& n : nodes) {
    for (int der = 0; der < n.multiplicity; ++der, ++row) {
      for (int l = 1; l <= k; ++l) {
        b(row, l - 1) =
            (l >= der) ? falling(l, der) * std::pow(n.mu, l - der) : 0.0;
      }
    }
  }
  return b;
}

}  // namespace

EmbedVerdict embed2(const Matrix& m, double tol) {
  if (m.dim() != 2) throw WrongDimension();
  require_markov(m, tol);
  const double a = m(0, 1);
  const double b = m(1, 0);

  EmbedVerdict v;
  if (a + b < 1.0) {
    const double factor = nlog1m_over(a + b);
    Matrix q = factor * (m - Matrix::identity(2));
    v.status = EmbedStatus::Embeddable;
    v.method = EmbedMethod::kendall;
    v.monotone_generator = monotone::is_monotone_generator(q, tol);
    v.generator = std::move(q);
    v.unique_in_zero_row_sum_algebra = true;
    v.reason = "Kendall: det(M) > 0, unique generator";
  } else {
    v.status = EmbedStatus::NonEmbeddable;
    v.reason = (a + b > 1.0) ? "det(M) < 0" : "det(M) = 0 (singular)";
  }
  return v;
}

Matrix root2(const Matrix& m, long long n) {
  if (m.dim() != 2) throw WrongDimension();
  require_markov(m, kDefaultTol);
  if (n < 1) throw InvalidMatrix("root order must be >= 1");
  const double a = m(0, 1);
  const double b = m(1, 0);
  if (m.trace() < 1.0 - kDefaultTol) throw NotMonotone("tr(M) < 1");
  if (a + b == 0.0) return Matrix::identity(2);
  const double eps_factor =
      (1.0 - std::pow(std::max(1.0 - a - b, 0.0), 1.0 / static_cast<double>(n))) / (a + b);
  return Matrix{{1.0 - eps_factor * a, eps_factor * a},
                {eps_factor * b, 1.0 - eps_factor * b}};
}

std::vector<Matrix> all_markov_sqrt2(const Matrix& m, double tol) {
  if (m.dim() != 2) throw WrongDimension();
  require_markov(m, tol);
  const double a = m(0, 1);
  const double b = m(1, 0);
  std::vector<Matrix> out;
  const double disc = 1.0 - a - b;  // det(M); the second eigenvalue
  if (disc < -tol) return out;      // negative eigenvalue: no real root at all

  // R = [[1-x, x], [y, 1-y]] squares to M iff x s = a, y s = b with
  // s = 2 - x - y solving s^2 - 2 s + (a + b) = 0.
  const double r = std::sqrt(std::max(disc, 0.0));
  for (const double s : {1.0 + r, 1.0 - r}) {
    if (s > tol) {
      const double x = a / s;
      const double y = b / s;
      if (x <= 1.0 + tol && y <= 1.0 + tol) {
        Matrix root{{1.0 - x, x}, {y, 1.0 - y}};
        if ((root * root - m).max_abs() <= 1e-9) out.push_back(std::move(root));
      }
    } else if (a <= tol && b <= tol) {
      // s = 0 forces x = y = 1: the flip matrix squares to the identity.
      out.push_back(Matrix{{0.0, 1.0}, {1.0, 0.0}});
    }
    if (r == 0.0) break;  // double root s = 1: single candidate
  }
  return out;
}

Discriminant3 markov_discriminant3(const Matrix& m) {
  if (m.dim() != 3) throw WrongDimension();
  Discriminant3 d;
  const double t = m.trace() - 1.0;
  d.value = std::pow(m(0, 0) - m(1, 0) + m(1, 2) - m(2, 2), 2) +
            4.0 * (m(1, 2) - m(0, 2)) * (m(1, 0) - m(2, 0));
  if (d.value >= 0.0) {
    const double s = std::sqrt(d.value);
    d.plus = {(t + s) / 2.0, 0.0};
    d.minus = {(t - s) / 2.0, 0.0};
  } else {
    const double s = std::sqrt(-d.value);
    d.plus = {t / 2.0, s / 2.0};
    d.minus = {t / 2.0, -s / 2.0};
  }
  return d;
}

Discriminant3 generator_discriminant3(const Matrix& q) {
  if (q.dim() != 3) throw WrongDimension();
  Discriminant3 d;
  const double t = q.trace();
  d.value = std::pow(q(0, 0) - q(1, 0) + q(1, 2) - q(2, 2), 2) +
            4.0 * (q(1, 2) - q(0, 2)) * (q(1, 0) - q(2, 0));
  if (d.value >= 0.0) {
    const double s = std::sqrt(d.value);
    d.plus = {(t + s) / 2.0, 0.0};
    d.minus = {(t - s) / 2.0, 0.0};
  } else {
    const double s = std::sqrt(-d.value);
    d.plus = {t / 2.0, s / 2.0};
    d.minus = {t / 2.0, -s / 2.0};
  }
  return d;
}

Discriminant3 discriminants3(const Matrix& m, double tol) {
  if (m.dim() != 3) throw WrongDimension();
  bool markov_rows = true, generator_rows = true;
  for (double s : m.row_sums()) {
    if (std::abs(s - 1.0) > tol) markov_rows = false;
    if (std::abs(s) > tol) generator_rows = false;
  }
  if (markov_rows) return markov_discriminant3(m);
  if (generator_rows) return generator_discriminant3(m);
  throw InvalidMatrix("neither Markov nor generator row sums");
}

std::pair<Matrix, double> confluent_vandermonde(const std::vector<VandermondeNode>& nodes) {
  check_nodes(nodes);
  Matrix b = build_confluent(nodes);
  const double det = determinant(b);
  return {std::move(b), det};
}

double confluent_vandermonde_det_formula(const std::vector<VandermondeNode>& nodes) {
  check_nodes(nodes);
  double det = 1.0;
  for (const VandermondeNode& n : nodes)
    det *= std::pow(n.mu, n.multiplicity) * vandermonde_gamma(n.multiplicity);
  for (std::size_t k = 0; k < nodes.size(); ++k)
    for (std::size_t l = 0; l < k; ++l)
      det *= std::pow(nodes[k].mu - nodes[l].mu,
                      nodes[k].multiplicity * nodes[l].multiplicity);
  return det;
}

double vandermonde_gamma(int n) {
  if (n < 1) throw InvalidMatrix("gamma_n needs n >= 1");
  // Vandermonde over the nodes 1..n: prod_{l<k} (k - l) = prod_k (k-1)!.
  double g = 1.0;
  for (int k = 2; k <= n; ++k) g *= factorial(k - 1);
  return g;
}

Matrix vandermonde_inverse_simple(const std::vector<double>& mus) {
  const int k = static_cast<int>(mus.size());
  std::vector<VandermondeNode> nodes;
  for (double mu : mus) nodes.push_back({mu, 1});
  check_nodes(nodes);

  Matrix inv(k);
  for (int j = 0; j < k; ++j) {
    // Elementary symmetric polynomials of the nodes without mu_j.
    std::vector<double> sym(k, 0.0);
    sym[0] = 1.0;
    int used = 0;
    for (int l = 0; l < k; ++l) {
      if (l == j) continue;
      ++used;
      for (int deg = used; deg >= 1; --deg) sym[deg] += mus[l] * sym[deg - 1];
    }
    double denom = mus[j];
    for (int l = 0; l < k; ++l)
      if (l != j) denom *= (mus[l] - mus[j]);
    for (int i = 0; i < k; ++i) {
      const double sign = (i % 2 == 0) ? 1.0 : -1.0;  // (-1)^{i-1} with 1-based i
      inv(i, j) = sign * sym[k - 1 - i] / denom;
    }
  }
  return inv;
}

std::vector<double> log_coefficients(const std::vector<VandermondeNode>& nodes) {
  check_nodes(nodes);
  Matrix b = build_confluent(nodes);
  const int k = b.dim();
  std::vector<double> rhs(k, 0.0);
  int row = 0;
  for (const VandermondeNode& n : nodes) {
    rhs[row++] = std::log1p(n.mu);
    for (int der = 1; der < n.multiplicity; ++der, ++row) {
      // d^k/dmu^k log(1 + mu) = (-1)^{k-1} (k-1)! / (1 + mu)^k
      rhs[row] = ((der % 2 == 1) ? 1.0 : -1.0) * factorial(der - 1) /
                 std::pow(1.0 + n.mu, der);
    }
  }
  if (condition_one(b) > kCondLimit) throw IllConditioned();
  return LuDecomposition(b).solve(rhs);
}

std::optional<RealLog> real_log_cyclic(const Matrix& m, double tol) {
  require_markov(m, tol);
  const int d = m.dim();
  const Spectrum spec = spectrum(m);
  if (!spec.real_within(kImagTol)) throw InvalidMatrix("spectrum is not real");
  const StructureInfo st = structure(m, tol);
  if (!st.cyclic) throw NotCyclic();
  for (const EigenCluster& c : spec.clusters)
    if (c.geometric != 1) throw NotCyclic("repeated eigenvalue with geometric multiplicity > 1");

  // Split the spectrum of A = M - I into the simple zero node (from the
  // Markov eigenvalue 1) and the interpolation nodes.
  std::vector<VandermondeNode> nodes;
  for (const EigenCluster& c : spec.clusters) {
    const double lambda = c.value.real();
    if (std::abs(lambda - 1.0) <= kDefaultClusterTol * 2.0) {
      if (c.algebraic != 1) throw NotCyclic("eigenvalue 1 is not simple");
      continue;
    }
    if (lambda <= tol) return std::nullopt;  // non-positive spectrum: no real logarithm
    nodes.push_back({lambda - 1.0, c.algebraic});
  }

  std::vector<double> alphas;
  if (d == 3 && nodes.size() == 1 && nodes.front().multiplicity == 2) {
    // Confluent closed form: alpha = 2 log(1+mu)/mu - 1/(1+mu),
    //                        beta  = 1/(mu (1+mu)) - log(1+mu)/mu^2.
    const double mu = nodes.front().mu;
    const double lg = std::log1p(mu);
    alphas = {2.0 * lg / mu - 1.0 / (1.0 + mu),
              1.0 / (mu * (1.0 + mu)) - lg / (mu * mu)};
  } else if (d == 3 && nodes.size() == 2) {
    // Simple closed form over the two nonzero eigenvalues of A.
    const double mp = nodes[0].mu;
    const double mm = nodes[1].mu;
    const double denom = mp * mm * (mm - mp);
    alphas = {(mm * mm * std::log1p(mp) - mp * mp * std::log1p(mm)) / denom,
              (mp * std::log1p(mm) - mm * std::log1p(mp)) / denom};
  } else {
    alphas = log_coefficients(nodes);
  }

  RealLog out;
  out.alphas = alphas;
  const Matrix a = m - Matrix::identity(d);
  Matrix r(d);
  Matrix power = a;
  for (std::size_t l = 0; l < alphas.size(); ++l) {
    r += alphas[l] * power;
    if (l + 1 < alphas.size()) power = power * a;
  }
  out.log = std::move(r);
  return out;
}

bool sqrt_obstruction(const Matrix& m, double tol) {
  const Spectrum spec = spectrum(m);
  for (const EigenCluster& c : spec.clusters) {
    if (std::abs(c.value.imag()) > kImagTol * (1.0 + std::abs(c.value))) continue;
    if (c.value.real() >= -std::max(tol, kDefaultTol)) continue;
    // A negative real eigenvalue whose Jordan blocks cannot pair up: odd
    // total multiplicity, or an odd number of blocks.
    if (c.algebraic % 2 == 1 || c.geometric % 2 == 1) return true;
  }
  return false;
}

void validate_poisson_family(const Matrix& p0, const Matrix& p, double tol) {
  if (p0.dim() != p.dim()) throw DimMismatch();
  if (!classify(p0).is_markov) throw InvalidFamily("P0 is not Markov");
  if (!classify(p).is_markov) throw InvalidFamily("P is not Markov");
  if ((p0 * p0 - p0).max_abs() > tol) throw InvalidFamily("P0^2 != P0");
  if ((p0 * p - p).max_abs() > tol) throw InvalidFamily("P0 P != P");
  if ((p * p0 - p).max_abs() > tol) throw InvalidFamily("P P0 != P");
}

Matrix poisson_family(const Matrix& p0, const Matrix& p, double t, double tol) {
  validate_poisson_family(p0, p, tol);
  if (t < 0.0) throw InvalidMatrix("t must be >= 0");
  // M(t) = e^{-t}(P0 - I) + e^{tA} with A = P - I keeps every term bounded.
  const Matrix a = p - Matrix::identity(p.dim());
  return std::exp(-t) * (p0 - Matrix::identity(p.dim())) + expm(t * a);
}

DivisibleResult divisible_construct(const Matrix& p0, const Matrix& p, double s, double tol) {
  DivisibleResult out{poisson_family(p0, p, s, tol),
                      (p0 - Matrix::identity(p0.dim())).max_abs() <= tol};
  return out;
}

namespace {

std::optional<EmbedVerdict> try_min_poly2(const Matrix& m, const Matrix& a, double tol) {
  EmbedVerdict v;
  if (a.max_abs() <= tol) {
    v.status = EmbedStatus::Embeddable;
    v.generator = Matrix::zero(m.dim());
    v.method = EmbedMethod::series;
    v.unique_in_zero_row_sum_algebra = true;  // the zero matrix is the only one
    v.monotone_generator = true;
    v.reason = "identity matrix";
    return v;
  }
  const double tr_a = a.trace();
  if (tr_a >= 0.0) return std::nullopt;
  const double alpha = -(a * a).trace() / tr_a;
  // Minimal polynomial of degree 2 means A^2 = -alpha A.
  if ((a * a + alpha * a).max_abs() > 1e-7 * std::max(1.0, alpha)) return std::nullopt;

  if (1.0 - alpha > tol) {
    Matrix q = nlog1m_over(alpha) * a;
    const int clamps = clamp_generator(q);
    v.status = EmbedStatus::Embeddable;
    v.method = EmbedMethod::series;
    v.monotone_generator = monotone::is_monotone_generator(q, tol);
    v.generator = std::move(q);
    v.unique_in_zero_row_sum_algebra = monotone::is_monotone(m, tol);
    v.reason = "A^2 = -alpha A with positive spectrum";
    if (clamps > 0) v.reason += " (clamped " + std::to_string(clamps) + " off-diagonal entries)";
    return v;
  }
  if (std::abs(1.0 - alpha) <= tol) {
    v.status = EmbedStatus::NonEmbeddable;
    v.reason = "singular idempotent";
    return v;
  }
  // alpha > 1: the eigenvalue 1 - alpha < 0 decides through its multiplicity.
  if (sqrt_obstruction(m, tol)) {
    v.status = EmbedStatus::NonEmbeddable;
    v.reason = "negative eigenvalue of odd multiplicity: no real square root";
  } else {
    v.status = EmbedStatus::Undecided;
    v.reason = "negative eigenvalue of even multiplicity: outside resolved classes";
  }
  return v;
}

}  // namespace

EmbedVerdict embed_verdict(const Matrix& m, double tol) {
  require_markov(m, tol);
  const int d = m.dim();
  if (d == 2) return embed2(m, tol);
  if (d == 1) {
    EmbedVerdict v;
    v.status = EmbedStatus::Embeddable;
    v.generator = Matrix::zero(1);
    v.method = EmbedMethod::series;
    v.unique_in_zero_row_sum_algebra = true;
    v.monotone_generator = true;
    return v;
  }

  if (const auto p = equal_input::detect(m, tol);
      p && p->kind == equal_input::Kind::matrix) {
    return equal_input::embed(m, tol);
  }

  const Matrix a = m - Matrix::identity(d);
  const Spectrum spec = spectrum(m);
  const StructureInfo st = structure(m, tol);

  if (st.min_poly_degree <= 2) {
    if (auto v = try_min_poly2(m, a, tol)) return *v;
  }

  bool geo_simple = true;
  for (const EigenCluster& c : spec.clusters)
    if (c.geometric != 1) geo_simple = false;

  if (st.cyclic && geo_simple && spec.real_within(kImagTol)) {
    if (!spec.positive_real(tol)) {
      EmbedVerdict v;
      v.status = EmbedStatus::NonEmbeddable;
      v.reason = "cyclic with a non-positive eigenvalue: no real logarithm";
      return v;
    }
    try {
      const std::optional<RealLog> rl = real_log_cyclic(m, tol);
      if (!rl) {
        EmbedVerdict v;
        v.status = EmbedStatus::NonEmbeddable;
        v.reason = "cyclic with a non-positive eigenvalue: no real logarithm";
        return v;
      }
      Matrix q = rl->log;
      const int clamps = clamp_generator(q);
      EmbedVerdict v;
      if (is_generator_matrix(q, kDefaultTol)) {
        v.status = EmbedStatus::Embeddable;
        v.method = (d == 3) ? EmbedMethod::d3_closed_form : EmbedMethod::cyclic_vandermonde;
        v.monotone_generator = monotone::is_monotone_generator(q, tol);
        v.generator = std::move(q);
        v.unique_in_zero_row_sum_algebra = true;  // unique real logarithm
        v.reason = "unique real logarithm is a generator";
        if (clamps > 0)
          v.reason += " (clamped " + std::to_string(clamps) + " off-diagonal entries)";
      } else {
        v.status = EmbedStatus::NonEmbeddable;
        v.reason = "unique real logarithm is not a generator";
      }
      return v;
    } catch (const IllConditioned&) {
      EmbedVerdict v;
      v.status = EmbedStatus::Undecided;
      v.reason = "logarithm solve ill-conditioned";
      return v;
    }
  }

  EmbedVerdict v;
  if (sqrt_obstruction(m, tol)) {
    v.status = EmbedStatus::NonEmbeddable;
    v.reason = "negative eigenvalue of odd multiplicity: no real square root";
  } else {
    v.status = EmbedStatus::Undecided;
    v.reason = "outside resolved classes (no square-root obstruction found)";
  }
  return v;
}

}  // namespace markov::embedding
