#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <unordered_map>
#include <vector>

#include "amc/cnf.hpp"
#include "amc/count.hpp"
#include "amc/exact.hpp"
#include "amc/kernel.hpp"
#include "amc/pccdd.hpp"
#include "amc/structure.hpp"

namespace amc {

struct SamplerConfig {
  VarHeuristic var_heuristic = VarHeuristic::kScore;
  KernelGate kernel;
  /// Neighbours of the branching variable added to the projection set.
  std::size_t proj_size = 8;
  /// Project on every variable of the formula, which makes p the exact
  /// marginal.
  bool exact_marginals = false;
  bool easy = true;
  /// Replaces the bound derived from the input formula.
  std::optional<std::size_t> easy_bound;
  std::size_t node_budget = std::size_t{1} << 22;
  bool debug_checks = false;
};

/// Compiles `cnf` into a full diagram in `store` that branches only on
/// variables of `proj`; a component without projected variables becomes a
/// satisfiability check.  Implied literals count only when projected.
/// `cache` shares nodes between equal sub-formulas.
NodeId projected_kc(PccddStore& store, const Cnf& cnf, std::span<const Var> proj,
                    std::unordered_map<ComponentKey, NodeId, ComponentKeyHash>& cache,
                    VarHeuristic heuristic = VarHeuristic::kScore);

/// {x} plus up to k primal neighbours with the most clause occurrences,
/// ties by smaller index.  Sorted.
std::vector<Var> choose_projection(const Cnf& cnf, Var x, std::size_t k);

/// One sampling context: the partial CCDD of a formula, grown by repeated
/// micro_kc calls.
class Sampler {
 public:
  Sampler(const Cnf& cnf, SamplerConfig cfg, std::uint64_t seed);

  /// One MicroKC pass on the input formula; returns the root node.
  NodeId micro_kc();
  /// One MicroKC pass on an arbitrary formula over the same universe.
  NodeId micro_kc(const Cnf& f, unsigned depth = 0);

  /// Root of the current diagram (false leaf before the first call).
  NodeId root() const { return store_.current(root_); }

  /// Probability of x = true.  nullopt when both branches are unsatisfiable.
  std::optional<Count> marg_prob(const Cnf& f, Var x);

  /// Drops the diagram and all caches; the random stream continues.
  void reset();

  /// Full diagram of the input formula built by the same recursion with
  /// every decision expanded, for the part-whole check.  Ignores the easy
  /// gate.
  NodeId compile_full(PccddStore& out) const;

  PccddStore& store() { return store_; }
  const PccddStore& store() const { return store_; }
  const Cnf& formula() const { return cnf_; }
  const SamplerConfig& config() const { return cfg_; }
  std::size_t easy_bound() const { return easy_bound_; }

  using MargStub = std::function<std::optional<Count>(const Cnf&, Var)>;
  void set_marg_stub(MargStub stub) { marg_stub_ = std::move(stub); }
  /// Outcomes used, in order, before the random stream is consulted again.
  void force_samples(std::span<const bool> bits) { forced_.insert(forced_.end(), bits.begin(), bits.end()); }

  bool sample(const Count& p1);

 private:
  NodeId first_visit(const Cnf& f, const ComponentKey& key, unsigned depth);
  NodeId revisit(NodeId v, const Cnf& f, unsigned depth);
  NodeId literal_part(std::span<const Lit> implied);
  void bind(const Cnf& f, const ComponentKey& key, NodeId n);

  Cnf cnf_;
  SamplerConfig cfg_;
  std::size_t easy_bound_;
  PccddStore store_;
  NodeId root_;
  std::mt19937_64 rng_;
  MargStub marg_stub_;
  std::deque<bool> forced_;
};

}  // namespace amc
