#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "amc/cnf.hpp"

namespace amc {

/// Result of dynamic decomposition.  `implied` are the literals extracted
/// by probing before splitting; `components` partition the residual clauses
/// into variable-disjoint formulas ordered by smallest variable.
struct Decomposition {
  bool unsat = false;
  std::vector<Lit> implied;
  std::vector<Cnf> components;
};

Decomposition decompose(const Cnf& cnf);

/// Connected components of the primal graph only, without probing.
std::vector<Cnf> split_components(const Cnf& cnf);

/// Width of the greedy min-fill elimination order (ties by smallest
/// variable).  Stops early and returns the running width once it exceeds
/// `stop_above`.
std::size_t minfill_width(const Cnf& cnf, std::size_t stop_above = std::numeric_limits<std::size_t>::max());

enum class VarHeuristic { kScore, kMinIndex };

/// Occurrence score per variable, binary clause occurrences counting twice.
std::vector<std::uint64_t> occurrence_scores(const Cnf& cnf);

/// Branching variable: highest occurrence score (or smallest index in
/// kMinIndex mode) among Vars(cnf), intersected with `restrict_to` when
/// given.  Throws ContractViolation on an empty candidate set.
Var pick_good_var(const Cnf& cnf, std::optional<std::span<const Var>> restrict_to = std::nullopt,
                  VarHeuristic mode = VarHeuristic::kScore);

/// Sorted primal-graph neighbours of `x`.
std::vector<Var> primal_neighbors(const Cnf& cnf, Var x);

}  // namespace amc
