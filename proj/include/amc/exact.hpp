#pragma once

#include <cstddef>

#include "amc/cnf.hpp"
#include "amc/count.hpp"

namespace amc {

/// Threshold for handing a sub-formula to the exact counter, computed once
/// from the input formula.
struct EasyConfig {
  std::size_t cap = 512;
  std::size_t nonunit_vars = 0;
  std::size_t width = 0;

  /// min(cap, floor(frac * nonunit_vars)) with frac 3/4, 2/3 or 1/2 by width.
  std::size_t bound() const;

  static EasyConfig from_formula(const Cnf& cnf);
};

bool easy_instance(const Cnf& cnf, const EasyConfig& cfg);
bool easy_instance(const Cnf& cnf, std::size_t bound);

/// Model count over the universe {1..num_vars}, by component-caching DPLL.
Count exact_count(const Cnf& cnf);
/// exact_count / 2^num_vars, i.e. models over Vars(cnf) / 2^|Vars(cnf)|.
Count exact_density(const Cnf& cnf);

}  // namespace amc
