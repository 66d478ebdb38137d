#include "g2pia/geometry.hpp"
#include "g2pia/harness.hpp"
#include "g2pia/optimizer.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace g2pia;

namespace {

CovarianceModel random_spd(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = g(rng);
  Matrix s = a * a.transpose() / dim + 0.1 * Matrix::Identity(dim, dim);
  return CovarianceModel::dense((s + s.transpose()) / 2.0);
}

EmbeddingVector external_point(const CovarianceModel& sigma,
                               std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector x(sigma.dim());
  for (int i = 0; i < sigma.dim(); ++i) x[i] = g(rng);
  x *= std::sqrt(4.0 / sigma.inv_quadratic(x));
  return EmbeddingVector(x);
}

void BM_SolveOptimalAttack(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const int dim = static_cast<int>(state.range(0));
  const auto sigma = random_spd(dim, rng);
  const auto x = external_point(sigma, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_optimal_attack(x, sigma));
  }
}
BENCHMARK(BM_SolveOptimalAttack)->Arg(2)->Arg(8)->Arg(32)->Arg(128);

void BM_DiscretePosterior(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  const int dim = 16;
  const int n_candidates = static_cast<int>(state.range(0));
  std::vector<EmbeddingVector> cands;
  for (int i = 0; i < n_candidates; ++i) {
    Vector v(dim);
    for (int j = 0; j < dim; ++j) v[j] = g(rng);
    cands.emplace_back(v);
  }
  const DiscreteCandidateSet set(std::move(cands));
  const auto sigma = random_spd(dim, rng);
  Vector xv(dim);
  for (int j = 0; j < dim; ++j) xv[j] = g(rng);
  const EmbeddingVector x(xv);
  for (auto _ : state) {
    benchmark::DoNotOptimize(discrete_posterior(x, set, sigma));
  }
}
BENCHMARK(BM_DiscretePosterior)->Arg(8)->Arg(64)->Arg(256);

void BM_MatchAnswerNumeric(benchmark::State& state) {
  const std::string prediction =
      "First she buys 1,200 apples, then sells 340 of them, "
      "leaving 860 apples in the barn. #### 860";
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        match_answer(prediction, "#### 860", AnswerMode::NumericFinal));
  }
}
BENCHMARK(BM_MatchAnswerNumeric);

void BM_MatchAnswerNormalized(benchmark::State& state) {
  const std::string prediction =
      "I am fairly sure the correct answer is the Norman conquest of England.";
  for (auto _ : state) {
    benchmark::DoNotOptimize(match_answer(prediction, "Norman conquest",
                                          AnswerMode::NormalizedString));
  }
}
BENCHMARK(BM_MatchAnswerNormalized);

}  // namespace

BENCHMARK_MAIN();
