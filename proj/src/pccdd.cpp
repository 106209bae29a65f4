#include "amc/pccdd.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <unordered_set>

#include "amc/errors.hpp"

namespace amc {

const char* to_string(NodeKind k) {
  switch (k) {
    case NodeKind::kFalse: return "false";
    case NodeKind::kTrue: return "true";
    case NodeKind::kKnown: return "known";
    case NodeKind::kUnknown: return "unknown";
    case NodeKind::kDecision: return "decision";
    case NodeKind::kDecomp: return "decomp";
    case NodeKind::kKernel: return "kernel";
  }
  return "?";
}

PccddStore::PccddStore(Var num_vars) : num_vars_(num_vars) { clear(); }

void PccddStore::clear() {
  nodes_.clear();
  child_slots_.clear();
  equivs_.clear();
  scopes_.clear();
  values_.clear();
  slot_node_.clear();
  slot_parents_.clear();
  cache_.clear();
  inverse_.clear();
  values_.emplace_back(0);
  push(Node{NodeKind::kFalse}, {});
  push(Node{NodeKind::kTrue}, {});
}

NodeId PccddStore::push(Node n, std::span<const NodeId> children) {
  const auto id = static_cast<NodeId>(nodes_.size());
  n.slot = static_cast<SlotId>(slot_node_.size());
  slot_node_.push_back(id);
  slot_parents_.emplace_back();
  n.child_begin = static_cast<std::uint32_t>(child_slots_.size());
  n.child_count = static_cast<std::uint32_t>(children.size());
  for (NodeId c : children) child_slots_.push_back(slot_of(c));
  nodes_.push_back(n);
  nodes_[id].has_unknown = compute_has_unknown(id);
  for (NodeId c : children) {
    const NodeId cur = current(c);
    if (nodes_[cur].has_unknown) slot_parents_[slot_of(c)].push_back(id);
  }
  return id;
}

bool PccddStore::compute_has_unknown(NodeId n) const {
  const Node& node = nodes_[n];
  if (node.kind == NodeKind::kUnknown) return true;
  for (std::uint32_t i = 0; i < node.child_count; ++i) {
    if (nodes_[slot_node_[child_slots_[node.child_begin + i]]].has_unknown) return true;
  }
  return false;
}

NodeId PccddStore::mk_unknown() { return push(Node{NodeKind::kUnknown}, {}); }

NodeId PccddStore::mk_known(const Count& count, std::vector<Var> scope) {
  return mk_known_density(count / pow2(num_vars_), std::move(scope));
}

NodeId PccddStore::mk_known_density(const Count& density, std::vector<Var> scope) {
  if (sgn(density) < 0 || density > 1) throw ConstructionError("known count outside [0, 2^|X|]");
  Node n{NodeKind::kKnown};
  n.value = static_cast<std::uint32_t>(values_.size());
  values_.push_back(density);
  std::sort(scope.begin(), scope.end());
  n.aux_begin = static_cast<std::uint32_t>(scopes_.size());
  n.aux_count = static_cast<std::uint32_t>(scope.size());
  scopes_.insert(scopes_.end(), scope.begin(), scope.end());
  return push(n, {});
}

namespace {

bool is_unknown_or_false(NodeKind k) { return k == NodeKind::kUnknown || k == NodeKind::kFalse; }

}  // namespace

NodeId PccddStore::mk_decision(Var var, NodeId lo, NodeId hi, const Count& p1, std::uint64_t f0,
                               std::uint64_t f1) {
  if (var == 0 || var > num_vars_) throw ConstructionError("decision variable outside universe");
  if (sgn(p1) < 0 || p1 > 1) throw ConstructionError("decision probability outside [0,1]");
  const Count p0 = Count(1) - p1;
  const NodeId ch[2] = {current(lo), current(hi)};
  const Count* p[2] = {&p0, &p1};
  const std::uint64_t f[2] = {f0, f1};
  for (int b = 0; b < 2; ++b) {
    if (sgn(*p[b]) == 0 && kind(ch[b]) != NodeKind::kFalse)
      throw ConstructionError("zero-probability branch must be the false leaf");
    if (f0 + f1 > 0 && f[b] == 0 && !is_unknown_or_false(kind(ch[b])))
      throw ConstructionError("unvisited branch must be unknown or false");
    if (f[b] > 0 && sgn(*p[b]) == 0) throw ConstructionError("visited branch has zero probability");
  }
  Node n{NodeKind::kDecision};
  n.var = var;
  n.f0 = f0;
  n.f1 = f1;
  n.value = static_cast<std::uint32_t>(values_.size());
  values_.push_back(p1);
  const NodeId children[2] = {lo, hi};
  const NodeId id = push(n, children);
  if (full_checks_) {
    try {
      check_read_once(id);
    } catch (...) {
      nodes_.back().kind = NodeKind::kFalse;  // orphan the rejected node
      throw;
    }
  }
  return id;
}

void PccddStore::check_read_once(NodeId n) const {
  const Var x = nodes_[n].var;
  for (int b = 0; b < 2; ++b) {
    const auto vars = structural_vars(child(n, b));
    if (std::binary_search(vars.begin(), vars.end(), x))
      throw ConstructionError("read-once violated: x" + std::to_string(x) + " repeats below its decision");
  }
}

NodeId PccddStore::mk_decomp(std::span<const NodeId> children) {
  if (children.size() < 2) throw ConstructionError("decomposition needs at least two children");
  for (NodeId c : children) {
    const NodeKind k = kind(current(c));
    if (k == NodeKind::kUnknown) throw ConstructionError("decomposition child is unknown");
    if (k == NodeKind::kFalse || k == NodeKind::kTrue) throw ConstructionError("decomposition child is a constant");
  }
  if (full_checks_) {
    std::set<Var> seen;
    for (NodeId c : children) {
      for (Var v : structural_vars(c)) {
        if (!seen.insert(v).second)
          throw ConstructionError("decomposition children share variable x" + std::to_string(v));
      }
    }
  }
  return push(Node{NodeKind::kDecomp}, children);
}

NodeId PccddStore::mk_kernel(NodeId core, std::vector<Equiv> equivs) {
  if (equivs.empty()) throw ConstructionError("kernel node needs at least one equivalence");
  if (kind(current(core)) == NodeKind::kUnknown) throw ConstructionError("kernel core is unknown");
  std::sort(equivs.begin(), equivs.end());
  std::set<Var> non_rep, reps;
  for (const auto& e : equivs) {
    if (e.rep == 0 || e.lit.var() <= e.rep || e.lit.var() > num_vars_)
      throw ConstructionError("equivalence is not in prime form");
    if (!non_rep.insert(e.lit.var()).second) throw ConstructionError("variable bound by two equivalences");
    reps.insert(e.rep);
  }
  for (Var r : reps)
    if (non_rep.contains(r)) throw ConstructionError("representative is itself bound");
  if (full_checks_) {
    for (Var v : structural_vars(core)) {
      if (non_rep.contains(v)) throw ConstructionError("equivalence variable x" + std::to_string(v) + " occurs in core");
    }
  }
  Node n{NodeKind::kKernel};
  n.aux_begin = static_cast<std::uint32_t>(equivs_.size());
  n.aux_count = static_cast<std::uint32_t>(equivs.size());
  equivs_.insert(equivs_.end(), equivs.begin(), equivs.end());
  const NodeId ch[1] = {core};
  return push(n, ch);
}

void PccddStore::bump_frequency(NodeId decision, bool branch) {
  Node& n = nodes_[decision];
  if (n.kind != NodeKind::kDecision) throw ContractViolation("bump_frequency on a non-decision");
  const Count pb = branch ? p1(decision) : p0(decision);
  if (sgn(pb) == 0) throw ContractViolation("visiting a zero-probability branch");
  (branch ? n.f1 : n.f0) += 1;
}

void PccddStore::set_child(NodeId decision, bool branch, NodeId child) {
  Node& n = nodes_[decision];
  if (n.kind != NodeKind::kDecision) throw ContractViolation("set_child on a non-decision");
  SlotId& s = child_slots_[n.child_begin + (branch ? 1 : 0)];
  const SlotId ns = slot_of(child);
  if (s == ns) return;
  if (kind(slot_node_[s]) != NodeKind::kUnknown)
    throw ConstructionError("only an unknown child can be replaced");
  if ((branch ? n.f1 : n.f0) == 0) throw ConstructionError("replacing the child of an unvisited branch");
  s = ns;
  if (nodes_[slot_node_[ns]].has_unknown) slot_parents_[ns].push_back(decision);
  if (n.has_unknown && !compute_has_unknown(decision)) {
    n.has_unknown = false;
    if (current(decision) == decision) refresh_parents(slot_of(decision));
  }
}

void PccddStore::refresh_parents(SlotId s) {
  std::vector<SlotId> work{s};
  while (!work.empty()) {
    const SlotId cur = work.back();
    work.pop_back();
    std::vector<NodeId> parents;
    parents.swap(slot_parents_[cur]);
    for (NodeId p : parents) {
      if (!nodes_[p].has_unknown || compute_has_unknown(p)) continue;
      nodes_[p].has_unknown = false;
      if (current(p) == p) work.push_back(slot_of(p));
    }
  }
}

void PccddStore::rebind(SlotId s, NodeId n) {
  slot_node_[s] = n;
  nodes_[n].slot = s;
}

NodeId PccddStore::collapse_known(NodeId node) {
  const NodeId cur = current(node);
  const NodeKind k = kind(cur);
  if (k == NodeKind::kKnown || k == NodeKind::kFalse || k == NodeKind::kTrue) return cur;
  if (has_unknown(cur)) throw ContractViolation("collapse_known on a node with unknown descendants");
  const Count density = count_full(*this, cur) / pow2(num_vars_);
  std::vector<Var> scope;
  if (full_checks_) scope = structural_vars(cur);
  const SlotId s = slot_of(cur);
  const NodeId k_id = mk_known_density(density, std::move(scope));
  // The fresh leaf got its own slot; move it into the collapsed one.
  rebind(s, k_id);
  return k_id;
}

std::optional<NodeId> PccddStore::lookup(const ComponentKey& key) const {
  auto it = cache_.find(key);
  if (it == cache_.end()) return std::nullopt;
  return slot_node_[it->second];
}

void PccddStore::bind(const Cnf& formula, NodeId node) { bind(formula, formula.key(), node); }

void PccddStore::bind(const Cnf& formula, const ComponentKey& key, NodeId node) {
  if (node == false_leaf() || node == true_leaf()) throw ContractViolation("constant leaves are not cached");
  const SlotId s = slot_of(node);
  if (inverse_.contains(s)) throw ContractViolation("node already bound to a formula");
  auto [it, inserted] = cache_.emplace(key, s);
  if (!inserted) throw ContractViolation("formula already cached");
  inverse_.emplace(s, formula);
}

const Cnf* PccddStore::formula_of(NodeId node) const {
  auto it = inverse_.find(slot_of(node));
  return it == inverse_.end() ? nullptr : &it->second;
}

Count PccddStore::known_count(NodeId n) const { return known_density(n) * pow2(num_vars_); }

std::vector<Var> PccddStore::structural_vars(NodeId root) const {
  std::vector<Var> out;
  std::unordered_set<NodeId> seen;
  std::vector<NodeId> stack{current(root)};
  while (!stack.empty()) {
    const NodeId n = stack.back();
    stack.pop_back();
    if (!seen.insert(n).second) continue;
    switch (kind(n)) {
      case NodeKind::kDecision: out.push_back(var(n)); break;
      case NodeKind::kKernel:
        for (const auto& e : equivs(n)) {
          out.push_back(e.rep);
          out.push_back(e.lit.var());
        }
        break;
      case NodeKind::kKnown:
        for (Var v : scope(n)) out.push_back(v);
        break;
      default: break;
    }
    for (std::size_t i = 0; i < num_children(n); ++i) stack.push_back(child(n, i));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::size_t PccddStore::unknown_count(NodeId root) const {
  std::size_t count = 0;
  std::unordered_set<NodeId> seen;
  std::vector<NodeId> stack{current(root)};
  while (!stack.empty()) {
    const NodeId n = stack.back();
    stack.pop_back();
    if (!has_unknown(n) || !seen.insert(n).second) continue;
    if (kind(n) == NodeKind::kUnknown) ++count;
    for (std::size_t i = 0; i < num_children(n); ++i) stack.push_back(child(n, i));
  }
  return count;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

enum class EvalMode { kExact, kLower, kUpper, kEstimate };

// Post-order evaluation of densities with memoization over shared nodes.
Count evaluate_density(const PccddStore& s, NodeId root, EvalMode mode, const Count& unknown_density) {
  std::unordered_map<NodeId, Count> memo;
  std::vector<std::pair<NodeId, bool>> stack{{s.current(root), false}};
  while (!stack.empty()) {
    auto [n, expanded] = stack.back();
    if (memo.contains(n)) {
      stack.pop_back();
      continue;
    }
    const std::size_t k = s.num_children(n);
    if (!expanded && k > 0) {
      stack.back().second = true;
      for (std::size_t i = 0; i < k; ++i) {
        const NodeId c = s.child(n, i);
        if (!memo.contains(c)) stack.push_back({c, false});
      }
      continue;
    }
    stack.pop_back();
    Count v;
    switch (s.kind(n)) {
      case NodeKind::kFalse: v = 0; break;
      case NodeKind::kTrue: v = 1; break;
      case NodeKind::kKnown: v = s.known_density(n); break;
      case NodeKind::kUnknown:
        if (mode == EvalMode::kExact) throw ContractViolation("exact count requested below an unknown node");
        v = unknown_density;
        break;
      case NodeKind::kDecomp:
        v = 1;
        for (std::size_t i = 0; i < k; ++i) v *= memo.at(s.child(n, i));
        break;
      case NodeKind::kKernel: v = memo.at(s.child(n, 0)) / pow2(static_cast<std::int64_t>(s.equivs(n).size())); break;
      case NodeKind::kDecision: {
        const Count& lo = memo.at(s.lo(n));
        const Count& hi = memo.at(s.hi(n));
        if (mode != EvalMode::kEstimate) {
          v = (lo + hi) / 2;
          break;
        }
        const std::uint64_t f0 = s.f0(n), f1 = s.f1(n);
        if (f0 + f1 == 0) throw ContractViolation("estimate on a decision node that was never visited");
        const Count total(static_cast<unsigned long>(f0 + f1));
        v = 0;
        if (f0 > 0) v += lo * static_cast<unsigned long>(f0) / (2 * s.p0(n) * total);
        if (f1 > 0) v += hi * static_cast<unsigned long>(f1) / (2 * s.p1(n) * total);
        break;
      }
    }
    v.canonicalize();
    memo.emplace(n, std::move(v));
  }
  return memo.at(s.current(root));
}

}  // namespace

Count count_full(const PccddStore& store, NodeId root) {
  return evaluate_density(store, root, EvalMode::kExact, Count(0)) * pow2(store.num_vars());
}

Count bound(const PccddStore& store, NodeId root, BoundMode mode, const std::optional<Count>& unknown_value) {
  Count unknown_density = mode == BoundMode::kLower ? Count(0) : Count(1);
  if (unknown_value) unknown_density = *unknown_value / pow2(store.num_vars());
  return evaluate_density(store, root, mode == BoundMode::kLower ? EvalMode::kLower : EvalMode::kUpper,
                          unknown_density) *
         pow2(store.num_vars());
}

Count estimate(const PccddStore& store, NodeId root) {
  return evaluate_density(store, root, EvalMode::kEstimate, Count(0)) * pow2(store.num_vars());
}

// ---------------------------------------------------------------------------
// Part-whole relation

namespace {

class PartOf {
 public:
  PartOf(const PccddStore& ps, const PccddStore& fs) : ps_(ps), fs_(fs) {}

  bool operator()(NodeId u, NodeId w) {
    u = ps_.current(u);
    w = fs_.current(w);
    const auto key = std::make_pair(u, w);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const bool r = compute(u, w);
    memo_.emplace(key, r);
    return r;
  }

 private:
  Count full_density(NodeId w) {
    auto it = full_counts_.find(w);
    if (it != full_counts_.end()) return it->second;
    Count c = count_full(fs_, w);
    full_counts_.emplace(w, c);
    return c;
  }

  bool compute(NodeId u, NodeId w) {
    const NodeKind ku = ps_.kind(u);
    if (ku == NodeKind::kUnknown) return true;
    if (ku == NodeKind::kKnown) return ps_.known_count(u) == full_density(w);
    switch (fs_.kind(w)) {
      case NodeKind::kFalse: return ku == NodeKind::kFalse;
      case NodeKind::kTrue: return ku == NodeKind::kTrue;
      case NodeKind::kKnown: return !ps_.has_unknown(u) && count_full(ps_, u) == fs_.known_count(w);
      case NodeKind::kUnknown: return false;
      case NodeKind::kDecision:
        return ku == NodeKind::kDecision && ps_.var(u) == fs_.var(w) && (*this)(ps_.lo(u), fs_.lo(w)) &&
               (*this)(ps_.hi(u), fs_.hi(w));
      case NodeKind::kKernel: {
        if (ku != NodeKind::kKernel) return false;
        const auto a = ps_.equivs(u);
        const auto b = fs_.equivs(w);
        return std::equal(a.begin(), a.end(), b.begin(), b.end()) && (*this)(ps_.child(u, 0), fs_.child(w, 0));
      }
      case NodeKind::kDecomp: {
        if (ku != NodeKind::kDecomp || ps_.num_children(u) != fs_.num_children(w)) return false;
        return perfect_matching(u, w);
      }
    }
    return false;
  }

  // Children of u must be matched one-to-one with children of w.
  bool perfect_matching(NodeId u, NodeId w) {
    const std::size_t n = ps_.num_children(u);
    std::vector<std::vector<bool>> ok(n, std::vector<bool>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) ok[i][j] = (*this)(ps_.child(u, i), fs_.child(w, j));
    std::vector<int> match(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<bool> used(n, false);
      std::function<bool(std::size_t)> augment = [&](std::size_t a) {
        for (std::size_t j = 0; j < n; ++j) {
          if (!ok[a][j] || used[j]) continue;
          used[j] = true;
          if (match[j] < 0 || augment(static_cast<std::size_t>(match[j]))) {
            match[j] = static_cast<int>(a);
            return true;
          }
        }
        return false;
      };
      if (!augment(i)) return false;
    }
    return true;
  }

  const PccddStore& ps_;
  const PccddStore& fs_;
  std::map<std::pair<NodeId, NodeId>, bool> memo_;
  std::unordered_map<NodeId, Count> full_counts_;
};

}  // namespace

bool is_part_of(const PccddStore& partial_store, NodeId partial, const PccddStore& full_store, NodeId full) {
  if (partial_store.num_vars() != full_store.num_vars()) return false;
  return PartOf(partial_store, full_store)(partial, full);
}

// ---------------------------------------------------------------------------

void write_dot(std::ostream& out, const PccddStore& s, NodeId root) {
  out << "digraph pccdd {\n  node [fontname=\"Helvetica\"];\n";
  std::unordered_set<NodeId> seen;
  std::vector<NodeId> stack{s.current(root)};
  while (!stack.empty()) {
    const NodeId n = stack.back();
    stack.pop_back();
    if (!seen.insert(n).second) continue;
    out << "  n" << n << " [";
    switch (s.kind(n)) {
      case NodeKind::kFalse: out << "label=\"⊥\", shape=box"; break;
      case NodeKind::kTrue: out << "label=\"⊤\", shape=box"; break;
      case NodeKind::kKnown: out << "label=\"" << to_string(s.known_count(n)) << "\", shape=box"; break;
      case NodeKind::kUnknown: out << "label=\"?\", shape=box"; break;
      case NodeKind::kDecision: out << "label=\"x" << s.var(n) << "\", shape=circle"; break;
      case NodeKind::kDecomp: out << "label=\"∧d\", shape=circle"; break;
      case NodeKind::kKernel: {
        out << "label=\"∧k";
        for (const auto& e : s.equivs(n)) out << "\\nx" << e.rep << "↔" << e.lit.to_dimacs();
        out << "\", shape=circle";
        break;
      }
    }
    out << "];\n";
    if (s.kind(n) == NodeKind::kDecision) {
      out << "  n" << n << " -> n" << s.lo(n) << " [style=dashed, label=\"" << to_string(s.p0(n)) << " / "
          << s.f0(n) << "\"];\n";
      out << "  n" << n << " -> n" << s.hi(n) << " [label=\"" << to_string(s.p1(n)) << " / " << s.f1(n)
          << "\"];\n";
    } else {
      for (std::size_t i = 0; i < s.num_children(n); ++i) {
        out << "  n" << n << " -> n" << s.child(n, i);
        if (s.kind(n) == NodeKind::kKernel) out << " [label=\"core\"]";
        out << ";\n";
      }
    }
    for (std::size_t i = 0; i < s.num_children(n); ++i) stack.push_back(s.child(n, i));
  }
  out << "}\n";
}

}  // namespace amc
