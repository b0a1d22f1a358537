#include <benchmark/benchmark.h>

#include <random>

#include "markov/analysis.hpp"
#include "markov/embedding.hpp"
#include "markov/equal_input.hpp"
#include "markov/expm.hpp"
#include "markov/matrix.hpp"
#include "markov/monotone.hpp"
#include "markov/spectrum.hpp"

namespace {

using markov::Matrix;

Matrix random_generator(int d, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> uni(0.0, scale);
  Matrix q(d);
  for (int i = 0; i < d; ++i) {
    double off = 0.0;
    for (int j = 0; j < d; ++j) {
      if (i == j) continue;
      q(i, j) = uni(rng);
      off += q(i, j);
    }
    q(i, i) = -off;
  }
  return q;
}

Matrix random_monotone_markov(int d, std::mt19937_64& rng) {
  const auto extremals = markov::monotone::monotone_extremals(d);
  std::exponential_distribution<double> exp_dist(1.0);
  std::vector<double> w(extremals.size());
  double sum = 0.0;
  for (double& v : w) {
    v = exp_dist(rng);
    sum += v;
  }
  Matrix m(d);
  for (std::size_t k = 0; k < extremals.size(); ++k)
    for (int i = 0; i < d; ++i) m(i, extremals[k].indices[i] - 1) += w[k] / sum;
  return m;
}

void BM_Expm(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  const Matrix q = random_generator(d, rng, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(markov::expm(q));
}

void BM_Eigenvalues(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  std::mt19937_64 rng(2);
  const Matrix q = random_generator(d, rng, 1.0);
  const Matrix m = markov::expm(q);
  for (auto _ : state) benchmark::DoNotOptimize(markov::eigenvalues(m));
}

void BM_Spectrum(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  std::mt19937_64 rng(3);
  const Matrix m = markov::expm(random_generator(d, rng, 1.0));
  for (auto _ : state) benchmark::DoNotOptimize(markov::spectrum(m));
}

void BM_MonotoneDecompose(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  std::mt19937_64 rng(4);
  const Matrix m = random_monotone_markov(d, rng);
  for (auto _ : state) benchmark::DoNotOptimize(markov::monotone::decompose(m));
}

void BM_EqualInputEmbed(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  markov::equal_input::Params p;
  p.kind = markov::equal_input::Kind::matrix;
  p.c_vec.assign(d, 0.8 / d);
  const Matrix m = markov::equal_input::make(p);
  for (auto _ : state) benchmark::DoNotOptimize(markov::equal_input::embed(m));
}

void BM_EmbedVerdict3(benchmark::State& state) {
  std::mt19937_64 rng(5);
  const Matrix m = random_monotone_markov(3, rng);
  for (auto _ : state) benchmark::DoNotOptimize(markov::embedding::embed_verdict(m));
}

}  // namespace

BENCHMARK(BM_Expm)->Arg(3)->Arg(6)->Arg(12)->Arg(24);
BENCHMARK(BM_Eigenvalues)->Arg(3)->Arg(4)->Arg(8)->Arg(16);
BENCHMARK(BM_Spectrum)->Arg(3)->Arg(8);
BENCHMARK(BM_MonotoneDecompose)->Arg(3)->Arg(5)->Arg(7);
BENCHMARK(BM_EqualInputEmbed)->Arg(3)->Arg(8);
BENCHMARK(BM_EmbedVerdict3);

BENCHMARK_MAIN();
