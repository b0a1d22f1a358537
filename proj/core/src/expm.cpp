#include "markov/expm.hpp"

#include <cmath>
#include <limits>

#include "markov/errors.hpp"
#include "markov/linalg.hpp"
#include "markov/spectrum.hpp"

namespace markov {

namespace {

// Degree-13 Pade coefficients and its validity bound on ||A||_1.
constexpr double kTheta13 = 5.371920351148152;
constexpr double kPade13[] = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0,  129060195264000.0,   10559470521600.0,
    670442572800.0,      33522128640.0,       1323241920.0,
    40840800.0,          960960.0,            16380.0,
    182.0,               1.0};

}  // namespace

Matrix expm(const Matrix& a) {
  if (!a.all_finite()) throw ExpOverflow("non-finite input");
  const int d = a.dim();
  if (d == 0) return a;

  const double norm = a.norm_one();
  int squarings = 0;
  if (norm > kTheta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
    if (squarings > 60) throw ExpOverflow("norm too large for exponential");
  }
  Matrix x = a;
  if (squarings > 0) x *= std::ldexp(1.0, -squarings);

  const Matrix id = Matrix::identity(d);
  const Matrix x2 = x * x;
  const Matrix x4 = x2 * x2;
  const Matrix x6 = x2 * x4;

  Matrix u = x * (x6 * (kPade13[13] * x6 + kPade13[11] * x4 + kPade13[9] * x2) +
                  kPade13[7] * x6 + kPade13[5] * x4 + kPade13[3] * x2 + kPade13[1] * id);
  Matrix v = x6 * (kPade13[12] * x6 + kPade13[10] * x4 + kPade13[8] * x2) +
             kPade13[6] * x6 + kPade13[4] * x4 + kPade13[2] * x2 + kPade13[0] * id;

  LuDecomposition lu(v - u);
  if (lu.singular()) throw ExpOverflow("Pade denominator singular");
  Matrix r = lu.solve(v + u);
  for (int k = 0; k < squarings; ++k) r = r * r;
  if (!r.all_finite()) throw ExpOverflow("exponential overflowed");
  return r;
}

Matrix logm_series(const Matrix& a) {
  if (!a.all_finite()) throw InvalidMatrix("non-finite entries");
  const double rho = spectral_radius(a);
  if (rho >= 1.0 - 1e-9) throw NotConvergent("spectral radius >= 1");

  Matrix sum = a;
  Matrix power = a;
  double sign = -1.0;
  const double eps = std::numeric_limits<double>::epsilon();
  int stagnant = 0;
  for (int m = 2; m <= 10000; ++m) {
    power = power * a;
    Matrix term = (sign / m) * power;
    sum += term;
    sign = -sign;
    if (term.max_abs() <= 0.5 * eps * std::max(sum.max_abs(), 1e-300)) {
      if (++stagnant >= 2) break;
    } else {
      stagnant = 0;
    }
  }
  return sum;
}

}  // namespace markov
