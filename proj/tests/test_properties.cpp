#include <gtest/gtest.h>

#include "amc/driver.hpp"
#include "amc/exact.hpp"
#include "amc/oracle.hpp"
#include "amc/sampler.hpp"
#include "random_cnf.hpp"

using namespace amc;
namespace t = amc::testing;

TEST(Property, CountsAgreeWithOracle) {
  std::mt19937_64 rng(51);
  for (int i = 0; i < 60; ++i) {
    const Cnf f = t::random_cnf(rng, t::random_spec(rng, 5, 14));
    const Count z = brute_count(f);
    EXPECT_EQ(exact_count(f), z);
    Sampler smp(f, {}, 0);
    PccddStore full(f.num_vars());
    EXPECT_EQ(count_full(full, smp.compile_full(full)), z);
  }
}

TEST(Property, RenamingPreservesCount) {
  std::mt19937_64 rng(52);
  for (int i = 0; i < 30; ++i) {
    const Cnf f = t::random_cnf(rng, t::random_spec(rng, 5, 14));
    EXPECT_EQ(exact_count(t::rename(f, rng)), brute_count(f));
  }
}

TEST(Property, SandwichAndMonotoneBounds) {
  std::mt19937_64 rng(53);
  for (int i = 0; i < 10; ++i) {
    const Cnf f = t::random_cnf(rng, t::random_spec(rng, 6, 14));
    const Count z = brute_count(f);
    SamplerConfig cfg;
    cfg.easy = i % 2 == 0;
    Sampler smp(f, cfg, static_cast<std::uint64_t>(i));
    Count lo = 0, hi = pow2(f.num_vars());
    for (int c = 0; c < 20; ++c) {
      const NodeId r = smp.micro_kc();
      const Count l = bound(smp.store(), r, BoundMode::kLower);
      const Count u = bound(smp.store(), r, BoundMode::kUpper);
      ASSERT_LE(l, z);
      ASSERT_GE(u, z);
      ASSERT_GE(l, lo);
      ASSERT_LE(u, hi);
      lo = l;
      hi = u;
      if (!smp.store().has_unknown(r)) {
        EXPECT_EQ(l, z);
        EXPECT_EQ(u, z);
      }
    }
  }
}

TEST(Property, EstimateIsNonNegativeAndFinite) {
  std::mt19937_64 rng(54);
  for (int i = 0; i < 10; ++i) {
    const Cnf f = t::random_cnf(rng, t::random_spec(rng, 6, 14));
    Sampler smp(f, {}, static_cast<std::uint64_t>(i));
    for (int c = 0; c < 10; ++c) {
      const Count e = estimate(smp.store(), smp.micro_kc());
      EXPECT_GE(e, 0);
    }
  }
}

TEST(Property, PartOfFullDiagram) {
  std::mt19937_64 rng(55);
  for (int i = 0; i < 8; ++i) {
    const Cnf f = t::random_sat_cnf(rng, 5, 10);
    SamplerConfig cfg;
    cfg.easy = false;
    cfg.kernel.depth_period = 1;
    cfg.debug_checks = true;
    Sampler smp(f, cfg, static_cast<std::uint64_t>(i));
    PccddStore full(f.num_vars());
    const NodeId whole = smp.compile_full(full);
    for (int c = 0; c < 10; ++c) {
      const NodeId r = smp.micro_kc();
      ASSERT_TRUE(is_part_of(smp.store(), r, full, whole)) << "instance " << i << " call " << c;
    }
  }
}

TEST(Property, ConvergedCountMatchesExact) {
  std::mt19937_64 rng(56);
  for (int i = 0; i < 10; ++i) {
    const Cnf f = t::random_cnf(rng, t::random_spec(rng, 10, 18));
    RunConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(i);
    const auto r = partial_kc(f, cfg);
    ASSERT_TRUE(r.converged);
    EXPECT_EQ(r.estimate, exact_count(f));
  }
}
