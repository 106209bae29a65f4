#pragma once

#include <utility>
#include <vector>

#include "amc/cnf.hpp"

namespace amc {

struct PropResult {
  enum class Status { kConsistent, kConflict };
  Status status = Status::kConsistent;
  /// Literals forced by unit propagation, in propagation order.
  std::vector<Lit> implied;

  bool conflict() const { return status == Status::kConflict; }
};

/// Exhaustive unit propagation from the unit clauses of `cnf`.
PropResult propagate(const Cnf& cnf);

/// Complete satisfiability check: DPLL with unit propagation, branching on
/// the most frequent unassigned variable (smallest index on ties).
bool sat(const Cnf& cnf);

/// Level-0 consequences found by failed-literal probing, iterated to a
/// fixpoint.  Sound, not complete.
struct ProbeResult {
  bool conflict = false;
  std::vector<Lit> implied;
};
ProbeResult probe_implied(const Cnf& cnf);

/// The literal part of probe_implied.  On unsatisfiable input the returned
/// set, when conditioned on, exposes an empty clause.
std::vector<Lit> implied_literals(const Cnf& cnf);

/// An entailed literal equivalence a <-> b.
using LitPair = std::pair<Lit, Lit>;

/// Equivalences entailed by `cnf`, from strongly connected components of the
/// binary implication graph plus two-phase probing of variables that occur
/// in binary clauses.  A pair (x, ~x) signals that the formula is
/// unsatisfiable.
std::vector<LitPair> detect_lit_equ(const Cnf& cnf);

}  // namespace amc
