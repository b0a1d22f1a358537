#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "markov/analysis.hpp"
#include "markov/embedding.hpp"
#include "markov/equal_input.hpp"
#include "markov/errors.hpp"
#include "markov/expm.hpp"
#include "markov/linalg.hpp"
#include "markov/matrix.hpp"
#include "markov/monotone.hpp"
#include "markov/spectrum.hpp"
#include "test_util.hpp"

using namespace markov;
using embedding::VandermondeNode;

namespace {

// Random monotone 3x3 generator, rescaled to a moderate trace, with clearly
// separated nonzero eigenvalues inside (-0.9, 0).
Matrix random_simple_monotone_generator3(testutil::Rng& rng) {
  std::uniform_real_distribution<double> target(0.3, 1.2);
  while (true) {
    Matrix q = testutil::random_monotone_generator(3, rng, 0.5);
    if (q.trace() >= -1e-9) continue;
    q *= target(rng) / (-q.trace());
    const auto disc = embedding::generator_discriminant3(q);
    if (disc.value < 1e-3) continue;
    const double mu_p = disc.plus.real();
    const double mu_m = disc.minus.real();
    if (std::abs(mu_p - mu_m) < 1e-2) continue;
    if (mu_p > -1e-2 || mu_m < -0.9) continue;  // 0 separated, exp stays > e^{-0.9}
    return q;
  }
}

void check_verdict_contract(const Matrix& m, const EmbedVerdict& v) {
  if (v.status != EmbedStatus::Embeddable) return;
  REQUIRE(v.generator.has_value());
  CHECK(classify(*v.generator).is_generator);
  for (double rs : v.generator->row_sums()) CHECK(std::abs(rs) <= 1e-12);
  for (int i = 0; i < v.generator->dim(); ++i)
    for (int j = 0; j < v.generator->dim(); ++j)
      if (i != j) CHECK((*v.generator)(i, j) >= -1e-12);
  CHECK((expm(*v.generator) - m).max_abs() <= 1e-8);
}

}  // namespace

// ---------------------------------------------------------------------- 2x2

TEST_CASE("embed2: the worked 2x2 example") {
  const Matrix m{{0.75, 0.25}, {0.5, 0.5}};
  const auto v = embedding::embed2(m);
  REQUIRE(v.status == EmbedStatus::Embeddable);
  CHECK(*v.method == EmbedMethod::kendall);
  CHECK(v.unique_in_zero_row_sum_algebra);
  CHECK(v.monotone_generator);
  CHECK_MAT_NEAR((*v.generator), (std::log(4.0) / 0.75) * (m - Matrix::identity(2)), 1e-13);
  check_verdict_contract(m, v);
}

TEST_CASE("embed2: swap is non-embeddable, identity trivially embeddable") {
  CHECK(embedding::embed2(Matrix{{0.0, 1.0}, {1.0, 0.0}}).status == EmbedStatus::NonEmbeddable);
  const auto v = embedding::embed2(Matrix::identity(2));
  REQUIRE(v.status == EmbedStatus::Embeddable);
  CHECK(v.generator->max_abs() == 0.0);
  CHECK_THROWS_AS(embedding::embed2(Matrix::identity(3)), WrongDimension);
}

TEST_CASE("root2: formula cases") {
  CHECK_MAT_NEAR(embedding::root2(Matrix::identity(2), 5), Matrix::identity(2), 0.0);

  // a = .25, b = .5, n = 2: eps = (1 - sqrt(.25)) / .75 = 2/3.
  const Matrix m{{0.75, 0.25}, {0.5, 0.5}};
  const Matrix r = embedding::root2(m, 2);
  CHECK(r(0, 1) == doctest::Approx(0.25 * 2.0 / 3.0).epsilon(1e-14));
  CHECK((r * r - m).max_abs() <= 1e-12);
  CHECK(monotone::is_monotone(r));

  // tr < 1: no monotone root is guaranteed.
  CHECK_THROWS_AS(embedding::root2(Matrix{{0.25, 0.75}, {0.75, 0.25}}, 7), NotMonotone);
}

TEST_CASE("root2: an idempotent (a + b = 1, monotone) is its own n-th root") {
  const Matrix m{{0.7, 0.3}, {0.7, 0.3}};  // a = .3, b = .7, tr = 1
  CHECK_MAT_NEAR(embedding::root2(m, 7), m, 1e-14);
}

TEST_CASE("root2 powers reproduce M on random monotone 2x2") {
  testutil::Rng rng(51);
  for (int trial = 0; trial < 200; ++trial) {
    Matrix m = testutil::random_markov(2, rng);
    if (m.trace() < 1.0) continue;
    const long long n = 2 + static_cast<long long>(rng() % 6);
    const Matrix r = embedding::root2(m, n);
    CHECK(monotone::is_monotone(r));
    Matrix p = Matrix::identity(2);
    for (long long k = 0; k < n; ++k) p = p * r;
    CHECK((p - m).max_abs() <= 1e-10);
  }
}

TEST_CASE("all_markov_sqrt2: the two-square-roots example") {
  const Matrix m{{0.75, 0.25}, {0.5, 0.5}};
  const auto roots = embedding::all_markov_sqrt2(m);
  REQUIRE(roots.size() == 2);
  const Matrix m1{{5.0 / 6.0, 1.0 / 6.0}, {1.0 / 3.0, 2.0 / 3.0}};
  const Matrix m2{{0.5, 0.5}, {1.0, 0.0}};
  CHECK((roots[0] - m1).max_abs() <= 1e-12);
  CHECK((roots[1] - m2).max_abs() <= 1e-12);
}

TEST_CASE("all_markov_sqrt2: identity has I and the swap") {
  const auto roots = embedding::all_markov_sqrt2(Matrix::identity(2));
  REQUIRE(roots.size() == 2);
  CHECK((roots[0] - Matrix::identity(2)).max_abs() == 0.0);
  CHECK((roots[1] - Matrix{{0.0, 1.0}, {1.0, 0.0}}).max_abs() == 0.0);
}

TEST_CASE("all_markov_sqrt2: negative determinant has no roots") {
  CHECK(embedding::all_markov_sqrt2(Matrix{{0.25, 0.75}, {0.75, 0.25}}).empty());
  CHECK(embedding::all_markov_sqrt2(Matrix{{0.0, 1.0}, {1.0, 0.0}}).empty());
}

TEST_CASE("all_markov_sqrt2: every returned root squares back") {
  testutil::Rng rng(52);
  for (int trial = 0; trial < 300; ++trial) {
    const Matrix m = testutil::random_markov(2, rng);
    for (const Matrix& r : embedding::all_markov_sqrt2(m)) {
      CHECK(classify(r).is_markov);
      CHECK((r * r - m).max_abs() <= 1e-9);
    }
  }
}

// ------------------------------------------------------------ discriminants

TEST_CASE("discriminants3: M(1/2) has Delta = 1, eigenvalues +-1/2") {
  const Matrix m{{0.5, 0.5, 0.0}, {0.5, 0.0, 0.5}, {0.0, 0.5, 0.5}};
  const auto disc = embedding::markov_discriminant3(m);
  CHECK(disc.value == doctest::Approx(1.0));
  CHECK(disc.plus.real() == doctest::Approx(0.5));
  CHECK(disc.minus.real() == doctest::Approx(-0.5));
  // det anchored at -alpha(1-alpha) = -1/4.
  CHECK(determinant(m) == doctest::Approx(-0.25));
}

TEST_CASE("discriminants3: identity has Delta = 0 and double eigenvalue 1") {
  const auto disc = embedding::markov_discriminant3(Matrix::identity(3));
  CHECK(disc.value == 0.0);
  CHECK(disc.plus.real() == doctest::Approx(1.0));
  CHECK(disc.minus.real() == doctest::Approx(1.0));
}

TEST_CASE("discriminants3: equal-input generator c = 0.6 has D = 0, mu = -0.6 twice") {
  equal_input::Params p;
  p.kind = equal_input::Kind::generator;
  p.c_vec = {0.1, 0.2, 0.3};
  const Matrix q = equal_input::make(p);
  const auto disc = embedding::generator_discriminant3(q);
  CHECK(std::abs(disc.value) <= 1e-14);
  CHECK(disc.plus.real() == doctest::Approx(-0.6));
  CHECK(disc.minus.real() == doctest::Approx(-0.6));
  // The dispatcher picks the generator branch from the row sums.
  CHECK(embedding::discriminants3(q).value == disc.value);
  CHECK_THROWS_AS(embedding::discriminants3(Matrix::identity(2)), WrongDimension);
}

TEST_CASE("monotone 3x3 matrices have non-negative Delta and real spectrum") {
  testutil::Rng rng(53);
  for (int trial = 0; trial < 3000; ++trial) {
    const Matrix m = testutil::random_monotone_markov(3, rng);
    const auto disc = embedding::markov_discriminant3(m);
    CHECK(disc.value >= -1e-12);
    for (auto v : eigenvalues(m)) CHECK(std::abs(v.imag()) <= 1e-9);
    // Discriminant eigenvalues agree with the spectrum.
    auto eigs = eigenvalues(m);
    std::sort(eigs.begin(), eigs.end(),
              [](auto a, auto b) { return a.real() < b.real(); });
    CHECK(std::abs(disc.minus.real() - eigs[0].real()) <= 1e-9);
  }
}

TEST_CASE("monotone 3x3 generators have non-negative D and real non-positive spectrum") {
  testutil::Rng rng(54);
  for (int trial = 0; trial < 3000; ++trial) {
    const Matrix q = testutil::random_monotone_generator(3, rng, 0.8);
    const auto disc = embedding::generator_discriminant3(q);
    CHECK(disc.value >= -1e-12);
    for (auto v : eigenvalues(q)) {
      CHECK(std::abs(v.imag()) <= 1e-12);
      CHECK(v.real() <= 1e-12);
    }
  }
}

// --------------------------------------------------------------- Vandermonde

TEST_CASE("confluent_vandermonde: simple 2x2 determinant") {
  const auto [b, det] = embedding::confluent_vandermonde({{-0.5, 1}, {-0.25, 1}});
  CHECK(det == doctest::Approx(0.03125).epsilon(1e-12));  // mu1 mu2 (mu2 - mu1)
  CHECK(b(0, 0) == -0.5);
  CHECK(b(1, 1) == doctest::Approx(0.0625));
}

TEST_CASE("confluent_vandermonde: single cluster of multiplicity 3") {
  const double mu = -0.3;
  const auto [b, det] = embedding::confluent_vandermonde({{mu, 3}});
  CHECK(det == doctest::Approx(2.0 * mu * mu * mu).epsilon(1e-12));  // gamma_3 = 2
  (void)b;
}

TEST_CASE("gamma sequence: 1, 1, 2, 12, 288, 34560") {
  const std::vector<double> expected{1.0, 1.0, 2.0, 12.0, 288.0, 34560.0};
  for (int n = 1; n <= 6; ++n)
    CHECK(embedding::vandermonde_gamma(n) == doctest::Approx(expected[n - 1]));
}

TEST_CASE("confluent_vandermonde rejects bad nodes") {
  CHECK_THROWS_AS(embedding::confluent_vandermonde({{-0.5, 1}, {-0.5, 2}}), DuplicateNode);
  CHECK_THROWS_AS(embedding::confluent_vandermonde({{0.0, 1}}), InvalidMatrix);
}

TEST_CASE("determinant matches the closed product formula on random clusters") {
  testutil::Rng rng(55);
  std::uniform_real_distribution<double> uni(-0.95, -0.05);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<VandermondeNode> nodes;
    int total = 0;
    while (total < 6) {
      const int mult = 1 + static_cast<int>(rng() % 3);
      if (total + mult > 6) break;
      double mu;
      bool ok;
      int guard = 0;
      do {
        mu = uni(rng);
        ok = true;
        // Separation scaled with multiplicity keeps the determinant, which
        // carries (mu_k - mu_l)^{m_k m_l}, numerically meaningful.
        for (const auto& n : nodes)
          if (std::abs(n.mu - mu) < 0.1 * std::max(n.multiplicity, mult)) ok = false;
      } while (!ok && ++guard < 100);
      if (!ok) break;
      nodes.push_back({mu, mult});
      total += mult;
    }
    if (nodes.empty()) continue;
    const auto [b, det] = embedding::confluent_vandermonde(nodes);
    const double expected = embedding::confluent_vandermonde_det_formula(nodes);
    CHECK(std::abs(det - expected) <= 1e-9 * std::abs(expected));
    (void)b;
  }
}

TEST_CASE("simple Vandermonde inverse matches the symmetric-polynomial formula") {
  testutil::Rng rng(56);
  std::uniform_real_distribution<double> uni(-0.9, -0.1);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 2 + static_cast<int>(rng() % 3);
    std::vector<double> mus;
    while (static_cast<int>(mus.size()) < k) {
      const double mu = uni(rng);
      bool ok = true;
      for (double v : mus)
        if (std::abs(v - mu) < 0.1) ok = false;
      if (ok) mus.push_back(mu);
    }
    std::vector<VandermondeNode> nodes;
    for (double mu : mus) nodes.push_back({mu, 1});
    const auto [b, det] = embedding::confluent_vandermonde(nodes);
    (void)det;
    const Matrix closed = embedding::vandermonde_inverse_simple(mus);
    const Matrix numeric = LuDecomposition(b).inverse();
    CHECK((closed - numeric).max_abs() <= 1e-9 * std::max(1.0, numeric.max_abs()));
  }
}

TEST_CASE("log_coefficients refuses an ill-conditioned node crowd") {
  CHECK_THROWS_AS(
      embedding::log_coefficients({{-0.5, 1}, {-0.5 + 1e-6, 1}, {-0.5 + 2e-6, 1}}),
      IllConditioned);
}

// ------------------------------------------------------------- real_log_cyclic

TEST_CASE("real_log_cyclic: equal-input matrices are rejected as non-cyclic (d >= 3)") {
  equal_input::Params p;
  p.kind = equal_input::Kind::matrix;
  p.c_vec = {0.1, 0.2, 0.3};
  CHECK_THROWS_AS(embedding::real_log_cyclic(equal_input::make(p)), NotCyclic);
}

TEST_CASE("real_log_cyclic: confluent fixture recovers Q0") {
  const Matrix q0{{-1.0, 1.0, 0.0}, {0.0, -1.0, 1.0}, {0.0, 0.0, 0.0}};
  const Matrix m = expm(q0);
  const auto rl = embedding::real_log_cyclic(m);
  REQUIRE(rl.has_value());
  CHECK((rl->log - q0).max_abs() <= 1e-8);
  REQUIRE(rl->alphas.size() == 2);
  // Closed form at mu = e^{-1} - 1.
  const double mu = std::exp(-1.0) - 1.0;
  CHECK(rl->alphas[0] ==
        doctest::Approx(2.0 * std::log1p(mu) / mu - 1.0 / (1.0 + mu)).epsilon(1e-7));
}

TEST_CASE("real_log_cyclic: random monotone simple 3x3 round trip") {
  testutil::Rng rng(57);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix q = random_simple_monotone_generator3(rng);
    const Matrix m = expm(q);
    const auto rl = embedding::real_log_cyclic(m);
    REQUIRE(rl.has_value());
    CHECK((rl->log - q).max_abs() <= 1e-8);
    // Fast path agrees with the generic Vandermonde solve over the nodes
    // mu = lambda - 1, the nonzero eigenvalues of A = M - I.
    const auto disc = embedding::markov_discriminant3(m);
    const std::vector<double> solved = embedding::log_coefficients(
        {{disc.plus.real() - 1.0, 1}, {disc.minus.real() - 1.0, 1}});
    CHECK(std::abs(solved[0] - rl->alphas[0]) <= 1e-10);
    CHECK(std::abs(solved[1] - rl->alphas[1]) <= 1e-10);
    // And with the series logarithm when it converges comfortably.
    const Matrix a = m - Matrix::identity(3);
    if (spectral_radius(a) <= 0.95)
      CHECK((logm_series(a) - rl->log).max_abs() <= 1e-8);
  }
}

TEST_CASE("real_log_cyclic: d = 4 confluent system with a derivative row") {
  // One Jordan pair at -1 plus simple eigenvalues -1/2 and 0: the generic
  // path must solve the 3x3 confluent Vandermonde system including the
  // derivative row, and recover the generator.
  const Matrix q{{-1.0, 1.0, 0.0, 0.0},
                 {0.0, -1.0, 1.0, 0.0},
                 {0.0, 0.0, -0.5, 0.5},
                 {0.0, 0.0, 0.0, 0.0}};
  const Matrix m = expm(q);
  const Spectrum s = spectrum(m);
  bool found_double = false;
  for (const auto& c : s.clusters)
    if (c.algebraic == 2) {
      CHECK(c.geometric == 1);
      CHECK(c.value.real() == doctest::Approx(std::exp(-1.0)).epsilon(1e-7));
      found_double = true;
    }
  CHECK(found_double);
  const auto rl = embedding::real_log_cyclic(m);
  REQUIRE(rl.has_value());
  CHECK(rl->alphas.size() == 3);
  CHECK((rl->log - q).max_abs() <= 1e-8);
  const auto v = embedding::embed_verdict(m);
  REQUIRE(v.status == EmbedStatus::Embeddable);
  CHECK(*v.method == EmbedMethod::cyclic_vandermonde);
}

TEST_CASE("real_log_cyclic: negative eigenvalue means no real logarithm") {
  // M(alpha) is cyclic with a simple negative eigenvalue.
  const Matrix m{{0.5, 0.5, 0.0}, {0.5, 0.0, 0.5}, {0.0, 0.5, 0.5}};
  CHECK(!embedding::real_log_cyclic(m).has_value());
}

// ------------------------------------------------------------ sqrt obstruction

TEST_CASE("sqrt_obstruction: M(alpha) family and the swap") {
  for (double alpha : {0.25, 0.5, 0.75}) {
    const Matrix m{{alpha, 1.0 - alpha, 0.0},
                   {alpha, 0.0, 1.0 - alpha},
                   {0.0, alpha, 1.0 - alpha}};
    CHECK(determinant(m) < 0.0);
    CHECK(embedding::sqrt_obstruction(m));
  }
  CHECK(embedding::sqrt_obstruction(Matrix{{0.0, 1.0}, {1.0, 0.0}}));
}

TEST_CASE("sqrt_obstruction: constant-input d=3 with c > 1 is not obstructed") {
  // Eigenvalue 1 - c < 0 has multiplicity d - 1 = 2 with full geometric
  // multiplicity, so the blocks pair up.
  equal_input::Params p;
  p.kind = equal_input::Kind::matrix;
  p.c_vec = {0.4, 0.4, 0.4};
  CHECK(!embedding::sqrt_obstruction(equal_input::make(p)));
}

TEST_CASE("sqrt_obstruction implies empty 2x2 root set and a NonEmbeddable verdict") {
  testutil::Rng rng(58);
  for (int trial = 0; trial < 200; ++trial) {
    const Matrix m = testutil::random_markov(2, rng);
    if (!embedding::sqrt_obstruction(m)) continue;
    CHECK(embedding::all_markov_sqrt2(m).empty());
    CHECK(embedding::embed_verdict(m).status == EmbedStatus::NonEmbeddable);
  }
}

// ------------------------------------------------------------------- Poisson

TEST_CASE("poisson_family: P0 = I gives the plain semigroup") {
  testutil::Rng rng(59);
  const Matrix p = testutil::random_markov(3, rng);
  const Matrix a = p - Matrix::identity(3);
  for (double t : {0.0, 0.7, 2.0})
    CHECK((embedding::poisson_family(Matrix::identity(3), p, t) - expm(t * a)).max_abs()
          <= 1e-12);
}

TEST_CASE("poisson_family: P = P0 freezes the family at P0") {
  const Matrix p0{{1.0, 0.0, 0.0}, {0.5, 0.0, 0.5}, {0.0, 0.0, 1.0}};
  REQUIRE(classify(p0).is_idempotent);
  for (double t : {0.0, 1.0, 3.0})
    CHECK((embedding::poisson_family(p0, p0, t) - p0).max_abs() <= 1e-12);
}

TEST_CASE("poisson_family: the singular d=3 example stays singular") {
  // P0 = [[1,0,0],[a,0,1-a],[0,0,1]] with P = [[a,0,1-a],[c,0,1-c],[1-b,0,b]],
  // c = alpha a + (1-alpha)(1-b); M(t) has determinant 0 for every t.
  const double alpha = 0.5, a = 0.5, b = 0.5;
  const double c = alpha * a + (1.0 - alpha) * (1.0 - b);
  const Matrix p0{{1.0, 0.0, 0.0}, {alpha, 0.0, 1.0 - alpha}, {0.0, 0.0, 1.0}};
  const Matrix p{{a, 0.0, 1.0 - a}, {c, 0.0, 1.0 - c}, {1.0 - b, 0.0, b}};
  for (double t : {0.0, 1.0, 2.5}) {
    const Matrix mt = embedding::poisson_family(p0, p, t);
    CHECK(classify(mt).is_markov);
    CHECK(std::abs(determinant(mt)) <= 1e-12);
  }
  // M(0) = P0.
  CHECK((embedding::poisson_family(p0, p, 0.0) - p0).max_abs() <= 1e-14);
}

TEST_CASE("poisson_family validates its inputs") {
  const Matrix not_idem{{0.5, 0.5}, {0.25, 0.75}};
  const Matrix p{{0.5, 0.5}, {0.5, 0.5}};
  CHECK_THROWS_AS(embedding::poisson_family(not_idem, p, 1.0), InvalidFamily);
  CHECK_THROWS_AS(embedding::poisson_family(Matrix::identity(2), Matrix{{-1.0, 2.0}, {0.5, 0.5}}, 1.0),
                  InvalidFamily);
  // Identities fail: P0 idempotent but P0 P != P.
  const Matrix p0{{1.0, 0.0}, {1.0, 0.0}};
  const Matrix bad_p{{0.5, 0.5}, {0.25, 0.75}};
  CHECK_THROWS_AS(embedding::poisson_family(p0, bad_p, 1.0), InvalidFamily);
}

TEST_CASE("poisson semigroup law and the three formula routes") {
  testutil::Rng rng(60);
  for (int trial = 0; trial < 60; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 3);
    // Generic valid family: P0 idempotent, P = P0 R P0.
    Matrix p0(d);
    if (trial % 2 == 0) {
      p0 = Matrix::identity(d);
    } else {
      const std::vector<double> beta = testutil::random_simplex(d, rng);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) p0(i, j) = beta[j];
    }
    const Matrix r = testutil::random_markov(d, rng);
    const Matrix p = p0 * r * p0;
    std::uniform_real_distribution<double> uni(0.0, 2.5);
    const double t = uni(rng), s = uni(rng);
    const Matrix mt = embedding::poisson_family(p0, p, t);
    const Matrix ms = embedding::poisson_family(p0, p, s);
    const Matrix mts = embedding::poisson_family(p0, p, t + s);
    CHECK((mt * ms - mts).norm_inf() <= 1e-10);
    // Route 2: P0 e^{tA}.
    CHECK((p0 * expm(t * (p - Matrix::identity(d))) - mt).max_abs() <= 1e-10);
    // Route 3: the defining series e^{-t}(P0 - I + e^{tP}).
    const Matrix series =
        std::exp(-t) * (p0 - Matrix::identity(d) + expm(t * p));
    CHECK((series - mt).max_abs() <= 1e-10);
  }
}

TEST_CASE("idempotent rigidity: M(t) leaves P0 immediately when P != P0") {
  // Within the singular example family, M(t)^2 = M(2t) always holds, while
  // M(t) = P0 can occur only at isolated times (here at none of the grid).
  const double alpha = 0.5, a = 0.5, b = 0.5;
  const double c = alpha * a + (1.0 - alpha) * (1.0 - b);
  const Matrix p0{{1.0, 0.0, 0.0}, {alpha, 0.0, 1.0 - alpha}, {0.0, 0.0, 1.0}};
  const Matrix p{{a, 0.0, 1.0 - a}, {c, 0.0, 1.0 - c}, {1.0 - b, 0.0, b}};
  REQUIRE((p - p0).max_abs() > 0.1);
  for (double t : {0.5, 1.0, 2.0}) {
    const Matrix mt = embedding::poisson_family(p0, p, t);
    const Matrix m2t = embedding::poisson_family(p0, p, 2.0 * t);
    CHECK((mt * mt - m2t).max_abs() <= 1e-10);
    CHECK((mt - p0).max_abs() > 1e-3);
  }
}

TEST_CASE("divisible_construct: flags and special cases") {
  testutil::Rng rng(61);
  const Matrix p = testutil::random_markov(3, rng);
  const auto res = embedding::divisible_construct(Matrix::identity(3), p, 1.0);
  CHECK(res.embeddable);
  // s = 0 returns P0.
  const std::vector<double> beta{0.2, 0.3, 0.5};
  Matrix p0(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) p0(i, j) = beta[j];
  const auto res0 = embedding::divisible_construct(p0, p0, 0.0);
  CHECK(!res0.embeddable);
  CHECK((res0.m - p0).max_abs() <= 1e-14);
  CHECK(std::abs(determinant(res0.m)) <= 1e-12);
}

TEST_CASE("divisible_construct: equal-input cross-check") {
  // P0 = I with P equal-input, s = 1: matches exp of the equal-input
  // generator A = P - I.
  equal_input::Params p;
  p.kind = equal_input::Kind::matrix;
  p.c_vec = {0.1, 0.25, 0.15};
  const Matrix mp = equal_input::make(p);
  const auto res = embedding::divisible_construct(Matrix::identity(3), mp, 1.0);
  equal_input::Params gen;
  gen.kind = equal_input::Kind::generator;
  gen.c_vec = p.c_vec;
  CHECK((res.m - equal_input::make(equal_input::exp(gen))).max_abs() <= 1e-12);
}

// ---------------------------------------------------------------- orchestrator

TEST_CASE("embed_verdict: monotone 3x3 with negative determinant") {
  const Matrix m{{0.5, 0.5, 0.0}, {0.5, 0.0, 0.5}, {0.0, 0.5, 0.5}};
  const auto v = embedding::embed_verdict(m);
  CHECK(v.status == EmbedStatus::NonEmbeddable);
}

TEST_CASE("embed_verdict: exponentials of simple monotone generators round trip") {
  testutil::Rng rng(62);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix q = random_simple_monotone_generator3(rng);
    const Matrix m = expm(q);
    if (equal_input::detect(m).has_value()) continue;  // dispatched elsewhere
    const auto v = embedding::embed_verdict(m);
    REQUIRE(v.status == EmbedStatus::Embeddable);
    CHECK(*v.method == EmbedMethod::d3_closed_form);
    CHECK(v.monotone_generator);
    CHECK(v.unique_in_zero_row_sum_algebra);
    CHECK((*v.generator - q).max_abs() <= 1e-8);
    check_verdict_contract(m, v);
  }
}

TEST_CASE("embed_verdict: constant-input c = 1.2, d = 3 is undecided") {
  equal_input::Params p;
  p.kind = equal_input::Kind::matrix;
  p.c_vec = {0.4, 0.4, 0.4};
  const auto v = embedding::embed_verdict(equal_input::make(p));
  CHECK(v.status == EmbedStatus::Undecided);
}

TEST_CASE("embed_verdict: equal-input path produces the equal-input generator") {
  testutil::Rng rng(63);
  const auto p = testutil::random_equal_input_params(4, rng, 0.9, equal_input::Kind::matrix);
  const Matrix m = equal_input::make(p);
  const auto v = embedding::embed_verdict(m);
  REQUIRE(v.status == EmbedStatus::Embeddable);
  CHECK(*v.method == EmbedMethod::equal_input);
  check_verdict_contract(m, v);
}

TEST_CASE("embed_verdict: min-poly-2 path for a non-equal-input matrix") {
  // (1-a) I + a P for an idempotent P of rank 2 is diagonalizable with
  // minimal polynomial degree 2 but not equal-input.
  const Matrix p0{{1.0, 0.0, 0.0}, {0.5, 0.0, 0.5}, {0.0, 0.0, 1.0}};
  REQUIRE(classify(p0).is_idempotent);
  SUBCASE("embeddable side") {
    const Matrix m = 0.4 * Matrix::identity(3) + 0.6 * p0;
    REQUIRE(!equal_input::detect(m).has_value());
    const auto v = embedding::embed_verdict(m);
    REQUIRE(v.status == EmbedStatus::Embeddable);
    CHECK(*v.method == EmbedMethod::series);
    check_verdict_contract(m, v);
  }
  SUBCASE("singular idempotent side") {
    const auto v = embedding::embed_verdict(p0);
    CHECK(v.status == EmbedStatus::NonEmbeddable);
  }
}

TEST_CASE("embed_verdict: 4-cycle permutation is non-embeddable (odd -1 multiplicity)") {
  Matrix p(4);
  p(0, 1) = p(1, 2) = p(2, 3) = p(3, 0) = 1.0;
  const auto v = embedding::embed_verdict(p);
  CHECK(v.status == EmbedStatus::NonEmbeddable);
}

TEST_CASE("embed_verdict rejects non-Markov input") {
  CHECK_THROWS_AS(embedding::embed_verdict(Matrix{{-1.0, 2.0}, {0.5, 0.5}}), NotStochastic);
}

TEST_CASE("embed_verdict: negative eigenvalue of even multiplicity is undecided") {
  // Block sum of a constant-input 3x3 with c = 1.2 and a trapped fourth
  // state: minimal polynomial degree 2 with the eigenvalue -0.2 twice, so
  // neither the obstruction nor any resolved class applies.
  equal_input::Params p;
  p.kind = equal_input::Kind::matrix;
  p.c_vec = {0.4, 0.4, 0.4};
  const Matrix small = equal_input::make(p);
  Matrix m(4);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = small(i, j);
  m(3, 3) = 1.0;
  REQUIRE(!equal_input::detect(m).has_value());
  const auto v = embedding::embed_verdict(m);
  CHECK(v.status == EmbedStatus::Undecided);
}

TEST_CASE("embed_verdict: complex eigenvalue pair stays undecided") {
  // exp(0.7 (P - I)) for the 3-cycle P is a circulant Markov matrix with a
  // complex-conjugate eigenvalue pair; it is embeddable by construction,
  // but lies outside the resolved (real-spectrum) classes.
  Matrix p(3);
  p(0, 1) = p(1, 2) = p(2, 0) = 1.0;
  const Matrix m = expm(0.7 * (p - Matrix::identity(3)));
  REQUIRE(!equal_input::detect(m).has_value());
  const Spectrum s = spectrum(m);
  CHECK(!s.real_within(1e-9));
  const auto v = embedding::embed_verdict(m);
  CHECK(v.status == EmbedStatus::Undecided);
  CHECK(!embedding::sqrt_obstruction(m));
}

TEST_CASE("embed_verdict: uniqueness cross-check between series and closed form") {
  // Whenever both logm_series and the d=3 closed form apply they agree.
  testutil::Rng rng(64);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix q = random_simple_monotone_generator3(rng);
    const Matrix m = expm(q);
    const Matrix a = m - Matrix::identity(3);
    if (spectral_radius(a) > 0.95) continue;
    const auto rl = embedding::real_log_cyclic(m);
    REQUIRE(rl.has_value());
    CHECK((logm_series(a) - rl->log).max_abs() <= 1e-8);
  }
}

TEST_CASE("embed_verdict: d = 4 cyclic exponential recovered via Vandermonde") {
  testutil::Rng rng(65);
  std::uniform_real_distribution<double> target(0.6, 1.5);
  int done = 0;
  while (done < 25) {
    Matrix q = testutil::random_monotone_generator(4, rng, 0.35);
    if (q.trace() >= -1e-9) continue;
    q *= target(rng) / (-q.trace());
    const auto eigs = eigenvalues(q);
    // Distinct, real, comfortably negative nonzero spectrum.
    bool ok = true;
    for (auto v : eigs)
      if (std::abs(v.imag()) > 1e-12) ok = false;
    if (!ok) continue;
    std::vector<double> res;
    for (auto v : eigs) res.push_back(v.real());
    std::sort(res.begin(), res.end());
    if (std::abs(res[3]) > 1e-9) continue;  // largest must be the zero eigenvalue
    if (res[2] > -0.05 || res[0] < -0.9) continue;
    if (res[1] - res[0] < 0.05 || res[2] - res[1] < 0.05) continue;
    const Matrix m = expm(q);
    if (equal_input::detect(m).has_value()) continue;
    const auto st = structure(m);
    if (!st.cyclic) continue;
    ++done;
    const auto v = embedding::embed_verdict(m);
    REQUIRE(v.status == EmbedStatus::Embeddable);
    CHECK(*v.method == EmbedMethod::cyclic_vandermonde);
    CHECK((*v.generator - q).max_abs() <= 1e-7);
    check_verdict_contract(m, v);
  }
}
