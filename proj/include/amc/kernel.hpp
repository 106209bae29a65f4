#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <vector>

#include "amc/cnf.hpp"
#include "amc/inference.hpp"

namespace amc {

/// One prime equivalence `rep <-> lit`; rep is the smallest variable of its
/// class and appears positively.
struct Equiv {
  Var rep = 0;
  Lit lit;

  auto operator<=>(const Equiv&) const = default;
};

/// Prime form of an equivalence closure, sorted by (rep, var(lit)).
/// `consistent` is false when some class holds both x and ~x.
struct LitEquivSet {
  std::vector<Equiv> pairs;
  bool consistent = true;

  bool empty() const { return pairs.empty(); }
  std::size_t size() const { return pairs.size(); }
};

/// Closes `raw` under transitivity and negation symmetry and emits the
/// prime pairs of every class.
LitEquivSet prime_closure(std::span<const LitPair> raw);
LitEquivSet prime_closure(std::span<const Equiv> prime);

/// Replaces every non-representative literal by its representative, then
/// drops tautologies and duplicate clauses.  `eq` must be prime, consistent
/// and entailed by `cnf`.
Cnf construct_core(const Cnf& cnf, const LitEquivSet& eq);

struct KernelGate {
  double min_binary_ratio = 0.4;
  unsigned depth_period = 4;
};

/// Heuristic gate: enough binary clauses and a depth on the period.
bool should_kernelize(const Cnf& cnf, unsigned depth, const KernelGate& gate = {});

}  // namespace amc
