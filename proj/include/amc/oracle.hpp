#pragma once

#include <cstddef>

#include "amc/cnf.hpp"
#include "amc/count.hpp"

namespace amc {

struct OracleLimit {
  std::size_t max_vars = 26;
};

/// Model count over {1..num_vars} by enumerating assignments of Vars(cnf),
/// pruning on falsified clauses.  Parallel over assignment prefixes when
/// built with OpenMP.  Throws ContractViolation above the limit.
Count brute_count(const Cnf& cnf, OracleLimit limit = {});

/// Same count by testing every assignment in turn on one thread.
Count brute_count_serial(const Cnf& cnf, OracleLimit limit = {});

/// Z(cnf and x) / Z(cnf).  Throws ContractViolation on unsatisfiable input.
Count brute_marginal(const Cnf& cnf, Var x, OracleLimit limit = {});

}  // namespace amc
