#include <gtest/gtest.h>

#include <numeric>

#include "amc/driver.hpp"
#include "amc/errors.hpp"
#include "amc/oracle.hpp"
#include "paper_example.hpp"
#include "random_cnf.hpp"

using namespace amc;
namespace t = amc::testing;

namespace {

RunConfig quick(std::uint64_t seed, std::uint64_t calls) {
  RunConfig cfg;
  cfg.seed = seed;
  cfg.max_calls = calls;
  cfg.timeout = 30;
  return cfg;
}

}  // namespace

TEST(PartialKC, UnsatConvergesToZero) {
  const auto r = partial_kc(Cnf(1, {{1}, {-1}}), quick(0, 10));
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.estimate, Count(0));
  EXPECT_EQ(r.n_calls, 1u);
  EXPECT_EQ(r.lower_bound, Count(0));
}

TEST(PartialKC, ExampleConverges) {
  RunConfig cfg;
  cfg.timeout = 10;
  const auto r = partial_kc(t::example_phi(), cfg);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.estimate, Count(t::kExamplePhiCount));
  EXPECT_EQ(r.lower, r.estimate);
  EXPECT_EQ(r.upper, r.estimate);
  EXPECT_EQ(r.lower_bound, r.estimate);
}

TEST(PartialKC, TrueFormula) {
  const auto r = partial_kc(Cnf(5), quick(0, 3));
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.estimate, Count(32));
  ASSERT_EQ(r.trace.size(), 1u);
  EXPECT_EQ(r.trace[0].estimate, Count(32));
}

TEST(PartialKC, ConvergesOnRandomFormulas) {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 20; ++i) {
    const Cnf f = t::random_cnf(rng, t::random_spec(rng, 5, 14, 1.0, 3.0));
    RunConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(i);
    cfg.sampler.easy = false;
    const auto r = partial_kc(f, cfg);
    ASSERT_TRUE(r.converged);
    EXPECT_EQ(r.estimate, brute_count(f));
  }
}

TEST(Ledger, Averaging) {
  const Segment segs[2] = {{3, Count(8)}, {1, Count(4)}};
  EXPECT_EQ(ledger_average(segs), Count(7));
  EXPECT_EQ(ledger_average(std::span<const Segment>{}), Count(0));
}

TEST(Markov, Arithmetic) {
  EXPECT_EQ(markov_lower_bound(Count(100), 0.2), Count(20));
  EXPECT_EQ(markov_lower_bound(Count(0), 0.2), Count(0));
  EXPECT_EQ(markov_lower_bound(Count(3), 0.5), Count(3, 2));
}

TEST(PartialKC, RestartsKeepLedgerIdentity) {
  std::mt19937_64 rng(42);
  const Cnf f = t::random_sat_cnf(rng, 14, 14, 1.5, 2.0);
  RunConfig cfg = quick(7, 12);
  cfg.sampler.easy = false;
  cfg.sampler.node_budget = 1;
  const auto r = partial_kc(f, cfg);
  if (!r.converged) {
    EXPECT_GE(r.n_restarts, 3u);
    EXPECT_EQ(r.estimate, ledger_average(r.ledger));
    std::uint64_t calls = 0;
    for (const auto& s : r.ledger) calls += s.calls;
    EXPECT_EQ(calls, r.n_calls);
  }
}

TEST(PartialKC, LedgerIdentityWithoutRestarts) {
  std::mt19937_64 rng(43);
  const Cnf f = t::random_sat_cnf(rng, 14, 14, 1.5, 2.0);
  RunConfig cfg = quick(1, 4);
  cfg.sampler.easy = false;
  const auto r = partial_kc(f, cfg);
  EXPECT_EQ(r.n_restarts, 0u);
  EXPECT_EQ(r.estimate, ledger_average(r.ledger));
  if (!r.converged) EXPECT_EQ(r.lower_bound, markov_lower_bound(r.estimate, 0.2));
}

TEST(Trace, BoundsAreMonotoneAndSound) {
  std::mt19937_64 rng(44);
  const Cnf f = t::random_sat_cnf(rng, 14, 14, 1.5, 2.0);
  const Count z = brute_count(f);
  RunConfig cfg = quick(3, 40);
  cfg.sampler.easy = false;
  const auto r = partial_kc(f, cfg);
  ASSERT_FALSE(r.trace.empty());
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    const auto& p = r.trace[i];
    EXPECT_LE(p.lower, z);
    EXPECT_GE(p.upper, z);
    if (i > 0) {
      EXPECT_GE(p.lower, r.trace[i - 1].lower);
      EXPECT_LE(p.upper, r.trace[i - 1].upper);
      EXPECT_GE(p.elapsed, r.trace[i - 1].elapsed);
      EXPECT_GT(p.n_calls, r.trace[i - 1].n_calls);
    }
  }
  if (r.converged) {
    EXPECT_EQ(r.trace.back().lower, r.trace.back().estimate);
    EXPECT_EQ(r.trace.back().upper, r.trace.back().estimate);
  }
}

TEST(Trace, Interval) {
  std::mt19937_64 rng(45);
  const Cnf f = t::random_sat_cnf(rng, 16, 16, 2.0, 2.5);
  RunConfig cfg = quick(0, 9);
  cfg.sampler.easy = false;
  cfg.trace_interval = 3;
  const auto r = partial_kc(f, cfg);
  if (!r.converged) {
    ASSERT_EQ(r.trace.size(), 3u);
    EXPECT_EQ(r.trace[2].n_calls, 9u);
  }
}

TEST(PartialKC, Determinism) {
  std::mt19937_64 rng(46);
  const Cnf f = t::random_sat_cnf(rng, 16, 16, 2.0, 2.5);
  RunConfig cfg = quick(11, 15);
  const auto a = partial_kc(f, cfg);
  const auto b = partial_kc(f, cfg);
  EXPECT_EQ(a.estimate, b.estimate);
  EXPECT_EQ(a.n_calls, b.n_calls);
  ASSERT_EQ(a.trace.size(), b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) EXPECT_EQ(a.trace[i].estimate, b.trace[i].estimate);
}

TEST(PartialKC, RejectsBadConfig) {
  RunConfig cfg;
  cfg.timeout = 0;
  EXPECT_THROW(partial_kc(Cnf(2), cfg), ContractViolation);
  cfg.timeout = 1;
  cfg.delta = 1.5;
  EXPECT_THROW(partial_kc(Cnf(2), cfg), ContractViolation);
}

TEST(Batch, ParallelMatchesSerial) {
  std::mt19937_64 rng(47);
  const Cnf f = t::random_sat_cnf(rng, 14, 14, 1.5, 2.0);
  RunConfig cfg = quick(0, 2);
  cfg.sampler.easy = false;
  std::vector<std::uint64_t> seeds(16);
  std::iota(seeds.begin(), seeds.end(), 100);
  EXPECT_EQ(estimate_batch(f, cfg, seeds), estimate_batch_serial(f, cfg, seeds));
}
