#include <benchmark/benchmark.h>

#include <numeric>
#include <random>
#include <vector>

#include "amc/driver.hpp"
#include "amc/oracle.hpp"

namespace {

amc::Cnf random_3cnf(amc::Var n, std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<amc::Var> var(1, n);
  std::bernoulli_distribution neg(0.5);
  amc::Cnf f(n);
  std::vector<amc::Lit> c;
  while (f.num_clauses() < m) {
    c.clear();
    for (int i = 0; i < 3; ++i) c.push_back(amc::Lit(var(rng), neg(rng)));
    f.add_clause(c);
  }
  return f;
}

void BM_BruteCountParallel(benchmark::State& state) {
  const auto f = random_3cnf(static_cast<amc::Var>(state.range(0)), static_cast<std::size_t>(2 * state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(amc::brute_count(f));
}

void BM_BruteCountSerial(benchmark::State& state) {
  const auto f = random_3cnf(static_cast<amc::Var>(state.range(0)), static_cast<std::size_t>(2 * state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(amc::brute_count_serial(f));
}

std::vector<std::uint64_t> seeds(std::size_t n) {
  std::vector<std::uint64_t> s(n);
  std::iota(s.begin(), s.end(), 0);
  return s;
}

amc::RunConfig batch_config() {
  amc::RunConfig cfg;
  cfg.max_calls = 1;
  cfg.sampler.easy = false;
  return cfg;
}

void BM_EstimateBatchParallel(benchmark::State& state) {
  const auto f = random_3cnf(30, 90, 11);
  const auto s = seeds(static_cast<std::size_t>(state.range(0)));
  const auto cfg = batch_config();
  for (auto _ : state) benchmark::DoNotOptimize(amc::estimate_batch(f, cfg, s));
}

void BM_EstimateBatchSerial(benchmark::State& state) {
  const auto f = random_3cnf(30, 90, 11);
  const auto s = seeds(static_cast<std::size_t>(state.range(0)));
  const auto cfg = batch_config();
  for (auto _ : state) benchmark::DoNotOptimize(amc::estimate_batch_serial(f, cfg, s));
}

}  // namespace

BENCHMARK(BM_BruteCountParallel)->Arg(16)->Arg(20)->Arg(24)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BruteCountSerial)->Arg(16)->Arg(20)->Arg(24)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EstimateBatchParallel)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EstimateBatchSerial)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
