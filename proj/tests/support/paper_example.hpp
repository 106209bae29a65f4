#pragma once

#include "amc/cnf.hpp"
#include "amc/count.hpp"
#include "amc/pccdd.hpp"
#include "amc/sampler.hpp"

namespace amc::testing {

/// (x1 v x3 v x5 v -x7)(x4 v x6)(-x2 v x4)(-x1 v -x2 v x5)(-x1 v x2 v -x5)
Cnf example_phi();
/// phi[x1 -> true]
Cnf example_phi1();
/// phi1 with x5 replaced by x2
Cnf example_phi2();
/// phi[x1 -> false]
Cnf example_phi4();

/// Model count of phi over its 7 variables, from enumeration.
inline constexpr long kExamplePhiCount = 55;

struct Fig2 {
  NodeId root = 0;
  NodeId inner = 0;   // the x2 decision shared by both branches
  NodeId kernel = 0;  // x1 = 1 branch
  NodeId decomp = 0;  // x1 = 0 branch, 2(b) only
};

/// Figure 2(a): x1 sampled to 1, x2 sampled to 0.
Fig2 build_fig2a(PccddStore& s);
/// Figure 2(b): second pass with x1 sampled to 0.
Fig2 build_fig2b(PccddStore& s);

/// Sampler set up as in the worked example: smallest-index branching,
/// formulas with at most two variables are easy, kernelization at every
/// depth, and the stated marginal probabilities.
Sampler example_sampler();

}  // namespace amc::testing
