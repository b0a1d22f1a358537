#include "markov/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "markov/errors.hpp"
#include "markov/linalg.hpp"

namespace markov {

namespace {

using cplx = std::complex<double>;

constexpr double kMachEps = std::numeric_limits<double>::epsilon();

// ---------------------------------------------------------------------------
// Closed-form roots for degrees up to 4, plus a Newton polish on the
// characteristic polynomial.  Coefficients come from Faddeev-LeVerrier via
// power traces, which is exact in the entries for these sizes.

// Monic quadratic x^2 + b x + c.
void roots2(double b, double c, std::vector<cplx>& out) {
  double disc = b * b - 4.0 * c;
  // A roundoff-level negative discriminant is a double real root; letting it
  // split into a spurious conjugate pair would misclassify real spectra.
  const double theta = 1e3 * kMachEps * std::max({b * b, std::abs(c), 1e-300});
  if (disc < 0.0 && disc > -theta) disc = 0.0;
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    const double x1 = (b >= 0.0) ? (-b - s) / 2.0 : (-b + s) / 2.0;
    const double x2 = (x1 != 0.0) ? c / x1 : -b - x1;
    out.emplace_back(x1, 0.0);
    out.emplace_back(x2, 0.0);
  } else {
    const double re = -b / 2.0;
    const double im = std::sqrt(-disc) / 2.0;
    out.emplace_back(re, im);
    out.emplace_back(re, -im);
  }
}

// Monic cubic x^3 + a x^2 + b x + c.
void roots3(double a, double b, double c, std::vector<cplx>& out) {
  // Depressed form y^3 + p y + q with x = y - a/3.
  const double p = b - a * a / 3.0;
  const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  const double shift = -a / 3.0;
  const double disc = q * q / 4.0 + p * p * p / 27.0;
  // Treat a marginally positive discriminant caused by roundoff as zero, so
  // that analytically-real spectra stay real.
  const double scale = std::max({std::abs(p) * std::abs(p) * std::abs(p) / 27.0,
                                 q * q / 4.0, kMachEps});
  if (disc > 1e4 * kMachEps * scale) {
    const double s = std::sqrt(disc);
    const double u = std::cbrt(-q / 2.0 + ((q <= 0.0) ? s : -s));
    // For q > 0 the cbrt argument above is -q/2 - s (larger magnitude, no
    // cancellation); recover the partner as v = -p / (3u).
    const double uu = (u != 0.0) ? u : std::cbrt(-q / 2.0 + s);
    const double v = (uu != 0.0) ? -p / (3.0 * uu) : 0.0;
    const double y1 = uu + v;
    out.emplace_back(y1 + shift, 0.0);
    const double re = -y1 / 2.0;
    const double im = std::sqrt(3.0) / 2.0 * std::abs(uu - v);
    out.emplace_back(re + shift, im);
    out.emplace_back(re + shift, -im);
  } else if (p >= -1e4 * kMachEps * std::max(1.0, std::abs(a) * std::abs(a))) {
    // p ~ 0 and disc <= 0 force q ~ 0: (near-)triple root.
    for (int k = 0; k < 3; ++k) out.emplace_back(shift + std::cbrt(-q), 0.0);
  } else {
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) {
      out.emplace_back(shift + m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0), 0.0);
    }
  }
}

// Monic quartic x^4 + a x^3 + b x^2 + c x + d.
void roots4(double a, double b, double c, double d, std::vector<cplx>& out) {
  // Depressed form y^4 + p y^2 + q y + r with x = y - a/4.
  const double a2 = a * a;
  const double p = b - 3.0 * a2 / 8.0;
  const double q = c - a * b / 2.0 + a2 * a / 8.0;
  const double r = d - a * c / 4.0 + a2 * b / 16.0 - 3.0 * a2 * a2 / 256.0;
  const double shift = -a / 4.0;
  const double qscale = std::max({1.0, std::abs(p), std::abs(r)});

  std::vector<cplx> ys;
  if (std::abs(q) <= 1e3 * kMachEps * qscale) {
    // Biquadratic: z^2 + p z + r with y = +/- sqrt(z).
    std::vector<cplx> zs;
    roots2(p, r, zs);
    for (const cplx& z : zs) {
      const cplx s = std::sqrt(z);
      ys.push_back(s);
      ys.push_back(-s);
    }
  } else {
    // Descartes split (y^2 + u y + s)(y^2 - u y + t) with w = u^2 solving
    // w^3 + 2 p w^2 + (p^2 - 4 r) w - q^2 = 0 (w > 0 exists since q != 0).
    std::vector<cplx> ws;
    roots3(2.0 * p, p * p - 4.0 * r, -q * q, ws);
    double w = 0.0;
    for (const cplx& cand : ws) {
      if (std::abs(cand.imag()) <= 1e-8 * (1.0 + std::abs(cand.real())))
        w = std::max(w, cand.real());
    }
    w = std::max(w, 0.0);
    const double u = std::sqrt(w);
    const double s = (p + w - q / u) / 2.0;
    const double t = (p + w + q / u) / 2.0;
    roots2(u, s, ys);
    roots2(-u, t, ys);
  }
  for (const cplx& y : ys) out.push_back(y + shift);
}

// Characteristic polynomial coefficients (monic, descending) via power traces.
std::vector<double> char_poly(const Matrix& m) {
  const int n = m.dim();
  std::vector<double> tr(n + 1, 0.0);
  Matrix pw = m;
  for (int k = 1; k <= n; ++k) {
    tr[k] = pw.trace();
    if (k < n) pw = pw * m;
  }
  // Newton's identities: e_k = (1/k) sum_{i=1..k} (-1)^{i-1} e_{k-i} tr_i.
  std::vector<double> e(n + 1, 0.0);
  e[0] = 1.0;
  for (int k = 1; k <= n; ++k) {
    double acc = 0.0;
    double sgn = 1.0;
    for (int i = 1; i <= k; ++i) {
      acc += sgn * e[k - i] * tr[i];
      sgn = -sgn;
    }
    e[k] = acc / k;
  }
  // p(x) = x^n - e1 x^{n-1} + e2 x^{n-2} - ...
  std::vector<double> coef(n + 1);
  coef[0] = 1.0;
  double sgn = -1.0;
  for (int k = 1; k <= n; ++k) {
    coef[k] = sgn * e[k];
    sgn = -sgn;
  }
  return coef;
}

cplx poly_eval(const std::vector<double>& coef, cplx x, cplx* deriv) {
  cplx v = coef[0];
  cplx dv = 0.0;
  for (std::size_t k = 1; k < coef.size(); ++k) {
    dv = dv * x + v;
    v = v * x + coef[k];
  }
  if (deriv) *deriv = dv;
  return v;
}

void newton_polish(const std::vector<double>& coef, std::vector<cplx>& roots) {
  for (cplx& root : roots) {
    if (root.imag() < 0.0) continue;  // handled with its conjugate partner
    cplx x = root;
    for (int it = 0; it < 4; ++it) {
      cplx dv;
      const cplx v = poly_eval(coef, x, &dv);
      if (std::abs(dv) <= 1e3 * kMachEps * (1.0 + std::abs(v))) break;
      const cplx step = v / dv;
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
      if (std::abs(step) > 0.5 * (1.0 + std::abs(x))) break;  // diverging: keep start
      x -= step;
    }
    root = x;
  }
  // Restore exact conjugate pairing and snap near-real values.
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (std::abs(roots[i].imag()) <= 1e2 * kMachEps * (1.0 + std::abs(roots[i].real()))) {
      roots[i] = cplx(roots[i].real(), 0.0);
      continue;
    }
    if (roots[i].imag() > 0.0) {
      for (std::size_t j = 0; j < roots.size(); ++j) {
        if (j != i && roots[j].imag() < 0.0 &&
            std::abs(roots[j].real() - roots[i].real()) + std::abs(roots[j].imag() + roots[i].imag()) <
                1e-6 * (1.0 + std::abs(roots[i]))) {
          roots[j] = std::conj(roots[i]);
          break;
        }
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Hessenberg + Francis double-shift QR for d > 4 (eigenvalues only).

void hessenberg_reduce(Matrix& h) {
  const int n = h.dim();
  std::vector<double> v(n, 0.0);
  for (int k = 0; k + 2 < n; ++k) {
    double norm2 = 0.0;
    for (int i = k + 1; i < n; ++i) norm2 += h(i, k) * h(i, k);
    const double norm = std::sqrt(norm2);
    if (norm == 0.0) continue;
    const double alpha = (h(k + 1, k) >= 0.0) ? -norm : norm;
    std::fill(v.begin(), v.end(), 0.0);
    v[k + 1] = h(k + 1, k) - alpha;
    for (int i = k + 2; i < n; ++i) v[i] = h(i, k);
    double vtv = 0.0;
    for (int i = k + 1; i < n; ++i) vtv += v[i] * v[i];
    if (vtv <= 0.0) continue;
    const double beta = 2.0 / vtv;
    for (int j = k; j < n; ++j) {
      double s = 0.0;
      for (int i = k + 1; i < n; ++i) s += v[i] * h(i, j);
      s *= beta;
      for (int i = k + 1; i < n; ++i) h(i, j) -= s * v[i];
    }
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = k + 1; j < n; ++j) s += h(i, j) * v[j];
      s *= beta;
      for (int j = k + 1; j < n; ++j) h(i, j) -= s * v[j];
    }
    h(k + 1, k) = alpha;
    for (int i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
}

std::vector<cplx> qr_eigenvalues(Matrix a) {
  const int n = a.dim();
  std::vector<cplx> out;
  out.reserve(n);
  hessenberg_reduce(a);

  double anorm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(a(i, j));
  if (anorm == 0.0) {
    out.assign(n, cplx(0.0, 0.0));
    return out;
  }

  int high = n - 1;
  double shift_total = 0.0;
  int iter = 0;
  while (high >= 0) {
    // Locate the start of the trailing irreducible block.
    int l = high;
    while (l > 0) {
      double s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
      if (s == 0.0) s = anorm;
      if (std::abs(a(l, l - 1)) <= kMachEps * s) {
        a(l, l - 1) = 0.0;
        break;
      }
      --l;
    }
    double x = a(high, high);
    if (l == high) {
      out.emplace_back(x + shift_total, 0.0);
      --high;
      iter = 0;
      continue;
    }
    double y = a(high - 1, high - 1);
    double w = a(high, high - 1) * a(high - 1, high);
    if (l == high - 1) {
      const double p = 0.5 * (y - x);
      const double q = p * p + w;
      const double base = x + shift_total;
      if (q >= 0.0) {
        const double z = (p == 0.0) ? std::sqrt(q) : p + std::copysign(std::sqrt(q), p);
        out.emplace_back(base + z, 0.0);
        out.emplace_back((z != 0.0) ? base - w / z : base + z, 0.0);
      } else {
        const double z = std::sqrt(-q);
        out.emplace_back(base + p, z);
        out.emplace_back(base + p, -z);
      }
      high -= 2;
      iter = 0;
      continue;
    }
    if (iter == 30) throw EigenFailure("QR iteration did not converge");
    if (iter == 10 || iter == 20) {
      shift_total += x;
      for (int i = 0; i <= high; ++i) a(i, i) -= x;
      const double s = std::abs(a(high, high - 1)) + std::abs(a(high - 1, high - 2));
      x = y = 0.75 * s;
      w = -0.4375 * s * s;
    }
    ++iter;
    // First column of the double-shift polynomial, scanned upward.
    int m = high - 2;
    double p = 0.0, q = 0.0, r = 0.0;
    for (; m >= l; --m) {
      const double z = a(m, m);
      const double rr = x - z;
      const double ss = y - z;
      p = (rr * ss - w) / a(m + 1, m) + a(m, m + 1);
      q = a(m + 1, m + 1) - z - rr - ss;
      r = a(m + 2, m + 1);
      const double s = std::abs(p) + std::abs(q) + std::abs(r);
      p /= s;
      q /= s;
      r /= s;
      if (m == l) break;
      const double u = std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
      const double v = std::abs(p) * (std::abs(a(m - 1, m - 1)) + std::abs(z) + std::abs(a(m + 1, m + 1)));
      if (u <= kMachEps * v) break;
    }
    for (int i = m + 2; i <= high; ++i) a(i, i - 2) = 0.0;
    for (int i = m + 3; i <= high; ++i) a(i, i - 3) = 0.0;
    // Chase the bulge.
    for (int k = m; k <= high - 1; ++k) {
      if (k != m) {
        p = a(k, k - 1);
        q = a(k + 1, k - 1);
        r = (k != high - 1) ? a(k + 2, k - 1) : 0.0;
        x = std::abs(p) + std::abs(q) + std::abs(r);
        if (x == 0.0) continue;
        p /= x;
        q /= x;
        r /= x;
      }
      const double s = std::copysign(std::sqrt(p * p + q * q + r * r), p);
      if (s == 0.0) continue;
      if (k == m) {
        if (l != m) a(k, k - 1) = -a(k, k - 1);
      } else {
        a(k, k - 1) = -s * x;
      }
      p += s;
      x = p / s;
      y = q / s;
      const double z = r / s;
      q /= p;
      r /= p;
      for (int j = k; j <= high; ++j) {
        double pp = a(k, j) + q * a(k + 1, j);
        if (k != high - 1) {
          pp += r * a(k + 2, j);
          a(k + 2, j) -= pp * z;
        }
        a(k + 1, j) -= pp * y;
        a(k, j) -= pp * x;
      }
      const int mmin = std::min(high, k + 3);
      for (int i = l; i <= mmin; ++i) {
        double pp = x * a(i, k) + y * a(i, k + 1);
        if (k != high - 1) {
          pp += z * a(i, k + 2);
          a(i, k + 2) -= pp * r;
        }
        a(i, k + 1) -= pp * q;
        a(i, k) -= pp;
      }
    }
  }
  return out;
}

// Rank of (M - value * I) over the complex numbers, via the real embedding
// [[M - Re, Im], [-Im, M - Re]] whose rank is twice the complex one.
int shifted_rank(const Matrix& m, cplx value, double threshold_abs) {
  const int d = m.dim();
  const bool complex_shift = std::abs(value.imag()) > 0.0;
  std::vector<std::vector<double>> cols;
  if (!complex_shift) {
    cols.assign(d, std::vector<double>(d, 0.0));
    for (int j = 0; j < d; ++j) {
      for (int i = 0; i < d; ++i) cols[j][i] = m(i, j) - ((i == j) ? value.real() : 0.0);
    }
  } else {
    const int dd = 2 * d;
    cols.assign(dd, std::vector<double>(dd, 0.0));
    for (int j = 0; j < d; ++j) {
      for (int i = 0; i < d; ++i) {
        const double re = m(i, j) - ((i == j) ? value.real() : 0.0);
        cols[j][i] = re;
        cols[d + j][d + i] = re;
      }
      cols[d + j][j] = value.imag();
      cols[j][d + j] = -value.imag();
    }
  }
  std::vector<double> sv = singular_values_of_columns(std::move(cols));
  int rank = 0;
  for (double s : sv)
    if (s > threshold_abs) ++rank;
  return complex_shift ? rank / 2 : rank;
}

}  // namespace

std::vector<std::complex<double>> eigenvalues(const Matrix& m) {
  if (!m.all_finite()) throw InvalidMatrix("non-finite entries");
  const int n = m.dim();
  std::vector<cplx> roots;
  if (n == 0) return roots;
  if (n == 1) return {cplx(m(0, 0), 0.0)};
  if (n <= 4) {
    const std::vector<double> coef = char_poly(m);
    if (n == 2) {
      roots2(coef[1], coef[2], roots);
    } else if (n == 3) {
      roots3(coef[1], coef[2], coef[3], roots);
    } else {
      roots4(coef[1], coef[2], coef[3], coef[4], roots);
    }
    newton_polish(coef, roots);
    return roots;
  }
  return qr_eigenvalues(m);
}

bool Spectrum::real_within(double tol) const {
  for (const auto& v : eigenvalues)
    if (std::abs(v.imag()) > tol * (1.0 + std::abs(v))) return false;
  return true;
}

bool Spectrum::positive_real(double tol) const {
  if (!real_within(tol)) return false;
  for (const auto& v : eigenvalues)
    if (v.real() <= tol) return false;
  return true;
}

Spectrum spectrum(const Matrix& m, double cluster_tol) {
  if (cluster_tol <= 0.0) throw InvalidMatrix("cluster_tol must be positive");
  Spectrum out;
  out.eigenvalues = eigenvalues(m);

  // Deterministic order before greedy clustering.
  std::vector<cplx> sorted = out.eigenvalues;
  std::sort(sorted.begin(), sorted.end(), [](const cplx& a, const cplx& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });

  struct Group {
    cplx sum;
    int count;
  };
  std::vector<Group> groups;
  for (const cplx& v : sorted) {
    bool placed = false;
    for (Group& g : groups) {
      const cplx mean = g.sum / static_cast<double>(g.count);
      if (std::abs(v - mean) <= cluster_tol * (1.0 + std::abs(mean))) {
        g.sum += v;
        g.count += 1;
        placed = true;
        break;
      }
    }
    if (!placed) groups.push_back({v, 1});
  }

  const double sigma_scale = std::max(m.norm_inf(), 1.0);
  for (const Group& g : groups) {
    EigenCluster c;
    c.value = g.sum / static_cast<double>(g.count);
    if (std::abs(c.value.imag()) <= 1e2 * kMachEps * (1.0 + std::abs(c.value)))
      c.value = cplx(c.value.real(), 0.0);
    c.algebraic = g.count;
    const double threshold = 10.0 * cluster_tol * std::max(1.0 + std::abs(c.value), sigma_scale);
    c.geometric = m.dim() - shifted_rank(m, c.value, threshold);
    if (c.geometric < 1) c.geometric = 1;
    if (c.geometric > c.algebraic) c.geometric = c.algebraic;
    out.clusters.push_back(c);
  }
  return out;
}

double spectral_radius(const Matrix& m) {
  double r = 0.0;
  for (const auto& v : eigenvalues(m)) r = std::max(r, std::abs(v));
  return r;
}

}  // namespace markov
