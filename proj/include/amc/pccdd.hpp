#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <unordered_map>
#include <vector>

#include "amc/cnf.hpp"
#include "amc/count.hpp"
#include "amc/kernel.hpp"

namespace amc {

using NodeId = std::uint32_t;

enum class NodeKind : std::uint8_t { kFalse, kTrue, kKnown, kUnknown, kDecision, kDecomp, kKernel };

const char* to_string(NodeKind k);

/// Arena of partial-CCDD nodes plus the component cache.
///
/// Parents do not point at nodes directly but at slots.  A slot is the
/// position of one sub-formula in the diagram; its current node can be
/// refined in place (an Unknown child explored, a fully explored subgraph
/// collapsed to a Known leaf) and every parent sees the refinement.  Node
/// ids themselves are append-only and stable.
///
/// Counts are kept as densities (count / 2^|X|) so that the normalization
/// over the global universe never produces huge intermediates; the public
/// evaluators return counts over X.
class PccddStore {
 public:
  explicit PccddStore(Var num_vars);

  Var num_vars() const { return num_vars_; }

  NodeId false_leaf() const { return 0; }
  NodeId true_leaf() const { return 1; }

  NodeId mk_unknown();
  /// Known leaf holding a model count over X.  `scope` lists the variables
  /// of the formula it stands for (used for decomposability checks).
  NodeId mk_known(const Count& count, std::vector<Var> scope = {});
  NodeId mk_known_density(const Count& density, std::vector<Var> scope = {});
  /// p1 is the probability of the high branch; p0 = 1 - p1.
  NodeId mk_decision(Var var, NodeId lo, NodeId hi, const Count& p1, std::uint64_t f0, std::uint64_t f1);
  NodeId mk_decomp(std::span<const NodeId> children);
  NodeId mk_kernel(NodeId core, std::vector<Equiv> equivs);

  /// Counts one more visit of branch b.
  void bump_frequency(NodeId decision, bool branch);
  /// Points branch b at `child`.  Only an Unknown child may be replaced by a
  /// different one.
  void set_child(NodeId decision, bool branch, NodeId child);
  /// Replaces a node without Unknown descendants by a Known leaf with its
  /// exact count, in the same slot (so the cache entry follows).
  NodeId collapse_known(NodeId node);

  // Component cache: formula key -> slot, and slot -> formula.
  std::optional<NodeId> lookup(const ComponentKey& key) const;
  void bind(const Cnf& formula, NodeId node);
  void bind(const Cnf& formula, const ComponentKey& key, NodeId node);
  /// The formula a node stands for, or nullptr for uncached nodes.
  const Cnf* formula_of(NodeId node) const;

  NodeKind kind(NodeId n) const { return nodes_[n].kind; }
  Var var(NodeId n) const { return nodes_[n].var; }
  /// Current node behind the i-th child slot.
  NodeId child(NodeId n, std::size_t i) const { return slot_node_[child_slots_[nodes_[n].child_begin + i]]; }
  std::size_t num_children(NodeId n) const { return nodes_[n].child_count; }
  NodeId lo(NodeId n) const { return child(n, 0); }
  NodeId hi(NodeId n) const { return child(n, 1); }
  const Count& p1(NodeId n) const { return values_[nodes_[n].value]; }
  Count p0(NodeId n) const { return Count(1) - p1(n); }
  std::uint64_t f0(NodeId n) const { return nodes_[n].f0; }
  std::uint64_t f1(NodeId n) const { return nodes_[n].f1; }
  /// Known: count over X.
  Count known_count(NodeId n) const;
  const Count& known_density(NodeId n) const { return values_[nodes_[n].value]; }
  std::span<const Equiv> equivs(NodeId n) const {
    return {equivs_.data() + nodes_[n].aux_begin, nodes_[n].aux_count};
  }
  std::span<const Var> scope(NodeId n) const { return {scopes_.data() + nodes_[n].aux_begin, nodes_[n].aux_count}; }

  /// Current node of the slot `n` was created in (differs from n after a
  /// collapse).
  NodeId current(NodeId n) const { return slot_node_[nodes_[n].slot]; }

  bool has_unknown(NodeId n) const { return nodes_[n].has_unknown; }
  /// Distinct Unknown leaves reachable from n (walks the subgraph).
  std::size_t unknown_count(NodeId n) const;

  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_cache_entries() const { return cache_.size(); }
  std::size_t footprint() const { return num_nodes() + num_cache_entries(); }

  /// Enables read-once and decomposability checks on every construction.
  /// They walk subgraphs, so keep them for small diagrams.
  void set_full_checks(bool on) { full_checks_ = on; }

  /// Variables mentioned below n: decision variables, kernel equivalences
  /// and Known scopes.
  std::vector<Var> structural_vars(NodeId n) const;

  void clear();

 private:
  using SlotId = std::uint32_t;
  struct Node {
    NodeKind kind;
    bool has_unknown = false;
    Var var = 0;
    SlotId slot = 0;
    std::uint32_t child_begin = 0, child_count = 0;
    std::uint32_t aux_begin = 0, aux_count = 0;  // equivs (kernel) or scope (known)
    std::uint32_t value = 0;                     // p1 (decision) or density (known)
    std::uint64_t f0 = 0, f1 = 0;
  };

  NodeId push(Node n, std::span<const NodeId> children);
  SlotId slot_of(NodeId n) const { return nodes_[n].slot; }
  void rebind(SlotId s, NodeId n);
  void refresh_parents(SlotId s);
  bool compute_has_unknown(NodeId n) const;
  void check_read_once(NodeId n) const;

  Var num_vars_;
  bool full_checks_ = false;
  std::vector<Node> nodes_;
  std::vector<SlotId> child_slots_;
  std::vector<Equiv> equivs_;
  std::vector<Var> scopes_;
  std::vector<Count> values_;
  std::vector<NodeId> slot_node_;
  std::vector<std::vector<NodeId>> slot_parents_;
  std::unordered_map<ComponentKey, SlotId, ComponentKeyHash> cache_;
  std::unordered_map<SlotId, Cnf> inverse_;
};

/// Exact count over X of a diagram without Unknown nodes.
/// Throws ContractViolation on an Unknown.
Count count_full(const PccddStore& store, NodeId root);

enum class BoundMode { kLower, kUpper };

/// Deterministic bound: Unknown leaves take `unknown_value` (default 0 for
/// lower, 2^|X| for upper) and decisions average their children.
Count bound(const PccddStore& store, NodeId root, BoundMode mode,
            const std::optional<Count>& unknown_value = std::nullopt);

/// Frequency-weighted estimate; a branch with zero visits contributes 0.
/// Throws ContractViolation on a decision with no visits.
Count estimate(const PccddStore& store, NodeId root);

/// Whether the diagram under `partial` is a part of the full diagram under
/// `full` (possibly in another store over the same universe).
bool is_part_of(const PccddStore& partial_store, NodeId partial, const PccddStore& full_store, NodeId full);

/// Graphviz rendering; decision arcs carry "p / f" labels, dashed for the
/// low branch.
void write_dot(std::ostream& out, const PccddStore& store, NodeId root);

}  // namespace amc
