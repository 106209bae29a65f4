#include "amc/sampler.hpp"

#include <algorithm>

#include "amc/errors.hpp"
#include "amc/inference.hpp"

namespace amc {

namespace {

using NodeCache = std::unordered_map<ComponentKey, NodeId, ComponentKeyHash>;

// Conjunction of variable-disjoint parts, with constants simplified away.
NodeId conjoin(PccddStore& s, std::vector<NodeId> parts) {
  std::vector<NodeId> kept;
  for (NodeId p : parts) {
    if (p == s.false_leaf()) return s.false_leaf();
    if (p != s.true_leaf()) kept.push_back(p);
  }
  if (kept.empty()) return s.true_leaf();
  if (kept.size() == 1) return kept.front();
  return s.mk_decomp(kept);
}

NodeId literal_leaf(PccddStore& s, std::span<const Lit> lits, bool with_scope) {
  if (lits.empty()) return s.true_leaf();
  std::vector<Var> scope;
  if (with_scope)
    for (Lit l : lits) scope.push_back(l.var());
  return s.mk_known_density(pow2(-static_cast<std::int64_t>(lits.size())), std::move(scope));
}

Count decision_p1(const PccddStore& s, NodeId lo, NodeId hi) {
  if (lo == s.false_leaf()) return 1;
  if (hi == s.false_leaf()) return 0;
  return Count(1, 2);
}

class Projector {
 public:
  Projector(PccddStore& s, std::span<const Var> proj, NodeCache& cache, VarHeuristic h)
      : s_(s), proj_(proj.begin(), proj.end()), cache_(cache), h_(h) {
    std::sort(proj_.begin(), proj_.end());
  }

  NodeId run(const Cnf& f) {
    if (f.is_false()) return s_.false_leaf();
    if (f.is_true()) return s_.true_leaf();
    ComponentKey key = f.key();
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    NodeId result;
    const Decomposition d = decompose(f);
    if (d.unsat) {
      result = s_.false_leaf();
    } else {
      std::vector<Lit> projected;
      for (Lit l : d.implied)
        if (in_proj(l.var())) projected.push_back(l);
      std::vector<NodeId> parts{literal_leaf(s_, projected, false)};
      if (d.components.size() == 1) {
        parts.push_back(decide(d.components.front()));
      } else {
        for (const auto& c : d.components) parts.push_back(run(c));
      }
      result = conjoin(s_, std::move(parts));
    }
    cache_.emplace(std::move(key), result);
    return result;
  }

 private:
  bool in_proj(Var v) const { return std::binary_search(proj_.begin(), proj_.end(), v); }

  NodeId decide(const Cnf& f) {
    const bool any = std::any_of(f.vars().begin(), f.vars().end(), [&](Var v) { return in_proj(v); });
    if (!any) return sat(f) ? s_.true_leaf() : s_.false_leaf();
    const Var x = pick_good_var(f, std::span<const Var>(proj_), h_);
    const NodeId lo = run(condition(f, Lit::neg(x)));
    const NodeId hi = run(condition(f, Lit::pos(x)));
    if (lo == s_.false_leaf() && hi == s_.false_leaf()) return s_.false_leaf();
    return s_.mk_decision(x, lo, hi, decision_p1(s_, lo, hi), 0, 0);
  }

  PccddStore& s_;
  std::vector<Var> proj_;
  NodeCache& cache_;
  VarHeuristic h_;
};

class FullCompiler {
 public:
  FullCompiler(PccddStore& s, const SamplerConfig& cfg) : s_(s), cfg_(cfg) {}

  NodeId run(const Cnf& f, unsigned depth) {
    if (f.is_false()) return s_.false_leaf();
    if (f.is_true()) return s_.true_leaf();
    ComponentKey key = f.key();
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    const NodeId result = build(f, depth);
    cache_.emplace(std::move(key), result);
    return result;
  }

 private:
  NodeId build(const Cnf& f, unsigned depth) {
    if (should_kernelize(f, depth, cfg_.kernel)) {
      const auto raw = detect_lit_equ(f);
      const LitEquivSet eq = prime_closure(raw);
      if (!eq.consistent) return s_.false_leaf();
      if (!eq.empty()) {
        const NodeId core = run(construct_core(f, eq), depth + 1);
        if (core == s_.false_leaf()) return core;
        return s_.mk_kernel(core, eq.pairs);
      }
    }
    const Decomposition d = decompose(f);
    if (d.unsat) return s_.false_leaf();
    if (d.components.size() + (d.implied.empty() ? 0 : 1) > 1) {
      std::vector<NodeId> parts;
      for (const auto& c : d.components) parts.push_back(run(c, depth + 1));
      parts.push_back(literal_leaf(s_, d.implied, cfg_.debug_checks));
      return conjoin(s_, std::move(parts));
    }
    if (d.components.empty()) return literal_leaf(s_, d.implied, cfg_.debug_checks);
    const Var x = pick_good_var(f, std::nullopt, cfg_.var_heuristic);
    const NodeId lo = run(condition(f, Lit::neg(x)), depth + 1);
    const NodeId hi = run(condition(f, Lit::pos(x)), depth + 1);
    if (lo == s_.false_leaf() && hi == s_.false_leaf()) return s_.false_leaf();
    return s_.mk_decision(x, lo, hi, decision_p1(s_, lo, hi), 0, 0);
  }

  PccddStore& s_;
  const SamplerConfig& cfg_;
  NodeCache cache_;
};

}  // namespace

NodeId projected_kc(PccddStore& store, const Cnf& cnf, std::span<const Var> proj, NodeCache& cache,
                    VarHeuristic heuristic) {
  return Projector(store, proj, cache, heuristic).run(cnf);
}

std::vector<Var> choose_projection(const Cnf& cnf, Var x, std::size_t k) {
  std::vector<Var> nb = primal_neighbors(cnf, x);
  std::vector<std::uint64_t> occ(cnf.num_vars() + 1, 0);
  for (auto c : cnf.clauses())
    for (Lit l : c) ++occ[l.var()];
  std::stable_sort(nb.begin(), nb.end(), [&](Var a, Var b) { return occ[a] > occ[b]; });
  if (nb.size() > k) nb.resize(k);
  nb.push_back(x);
  std::sort(nb.begin(), nb.end());
  return nb;
}

Sampler::Sampler(const Cnf& cnf, SamplerConfig cfg, std::uint64_t seed)
    : cnf_(cnf), cfg_(cfg), easy_bound_(0), store_(cnf.num_vars()), root_(0), rng_(seed) {
  if (cfg_.easy) easy_bound_ = cfg_.easy_bound ? *cfg_.easy_bound : EasyConfig::from_formula(cnf_).bound();
  store_.set_full_checks(cfg_.debug_checks);
}

void Sampler::reset() {
  store_.clear();
  root_ = store_.false_leaf();
}

bool Sampler::sample(const Count& p1) {
  if (!forced_.empty()) {
    const bool b = forced_.front();
    forced_.pop_front();
    if (sgn(b ? p1 : Count(1) - p1) == 0) throw ContractViolation("forced sample has zero probability");
    return b;
  }
  // b = 1 iff r < p1 * 2^64, compared exactly.
  const std::uint64_t r = rng_();
  mpz_class lhs(static_cast<unsigned long>(r >> 32));
  lhs <<= 32;
  lhs += static_cast<unsigned long>(r & 0xffffffffu);
  lhs *= p1.get_den();
  mpz_class rhs = p1.get_num();
  rhs <<= 64;
  return lhs < rhs;
}

std::optional<Count> Sampler::marg_prob(const Cnf& f, Var x) {
  if (marg_stub_) return marg_stub_(f, x);
  const std::vector<Var> proj = cfg_.exact_marginals ? f.vars() : choose_projection(f, x, cfg_.proj_size);
  PccddStore ps(f.num_vars());
  NodeCache cache;
  const NodeId u = projected_kc(ps, condition(f, Lit::neg(x)), proj, cache, cfg_.var_heuristic);
  const NodeId v = projected_kc(ps, condition(f, Lit::pos(x)), proj, cache, cfg_.var_heuristic);
  const Count zu = count_full(ps, u);
  const Count zv = count_full(ps, v);
  if (sgn(zu) == 0 && sgn(zv) == 0) return std::nullopt;
  Count p = zv / (zu + zv);
  p.canonicalize();
  return p;
}

NodeId Sampler::micro_kc() {
  root_ = micro_kc(cnf_, 0);
  return root();
}

NodeId Sampler::micro_kc(const Cnf& f, unsigned depth) {
  if (f.is_false()) return store_.false_leaf();
  if (f.is_true()) return store_.true_leaf();
  const ComponentKey key = f.key();
  const auto cached = store_.lookup(key);
  if (cfg_.easy && easy_instance(f, easy_bound_)) {
    if (cached) return *cached;
    std::vector<Var> scope;
    if (cfg_.debug_checks) scope = f.vars();
    const NodeId k = store_.mk_known_density(exact_density(f), std::move(scope));
    bind(f, key, k);
    return k;
  }
  if (!cached) return first_visit(f, key, depth);
  return revisit(*cached, f, depth);
}

void Sampler::bind(const Cnf& f, const ComponentKey& key, NodeId n) { store_.bind(f, key, n); }

NodeId Sampler::literal_part(std::span<const Lit> implied) {
  return literal_leaf(store_, implied, cfg_.debug_checks);
}

NodeId Sampler::first_visit(const Cnf& f, const ComponentKey& key, unsigned depth) {
  if (should_kernelize(f, depth, cfg_.kernel)) {
    const auto raw = detect_lit_equ(f);
    const LitEquivSet eq = prime_closure(raw);
    if (!eq.consistent) return store_.false_leaf();
    if (!eq.empty()) {
      const NodeId core = micro_kc(construct_core(f, eq), depth + 1);
      if (core == store_.false_leaf()) return core;
      const NodeId k = store_.mk_kernel(core, eq.pairs);
      bind(f, key, k);
      return k;
    }
  }

  const Decomposition d = decompose(f);
  if (d.unsat) return store_.false_leaf();
  if (d.components.empty()) {
    const NodeId k = literal_part(d.implied);
    bind(f, key, k);
    return k;
  }
  if (d.components.size() + (d.implied.empty() ? 0 : 1) > 1) {
    std::vector<NodeId> parts;
    for (const auto& c : d.components) {
      parts.push_back(micro_kc(c, depth + 1));
      if (parts.back() == store_.false_leaf()) return store_.false_leaf();
    }
    if (!d.implied.empty()) parts.push_back(literal_part(d.implied));
    const NodeId n = store_.mk_decomp(parts);
    bind(f, key, n);
    return n;
  }

  const Var x = pick_good_var(f, std::nullopt, cfg_.var_heuristic);
  const auto p = marg_prob(f, x);
  if (!p) return store_.false_leaf();
  const bool b = sample(*p);
  const NodeId child = micro_kc(condition(f, Lit(x, !b)), depth + 1);
  const Count other_p = b ? Count(1) - *p : *p;
  const NodeId other = sgn(other_p) == 0 ? store_.false_leaf() : store_.mk_unknown();
  const NodeId lo = b ? other : child;
  const NodeId hi = b ? child : other;
  const NodeId u = store_.mk_decision(x, lo, hi, *p, b ? 0 : 1, b ? 1 : 0);
  bind(f, key, u);
  return u;
}

NodeId Sampler::revisit(NodeId v, const Cnf& f, unsigned depth) {
  if (!store_.has_unknown(v)) return store_.collapse_known(v);
  switch (store_.kind(v)) {
    case NodeKind::kKernel: {
      const Cnf* core = store_.formula_of(store_.child(v, 0));
      if (core == nullptr) throw ContractViolation("kernel core has no formula");
      micro_kc(*core, depth + 1);
      return store_.current(v);
    }
    case NodeKind::kDecomp: {
      for (std::size_t i = 0; i < store_.num_children(v); ++i) {
        const Cnf* c = store_.formula_of(store_.child(v, i));
        if (c != nullptr) micro_kc(*c, depth + 1);
      }
      return store_.current(v);
    }
    case NodeKind::kDecision: {
      const bool b = sample(store_.p1(v));
      store_.bump_frequency(v, b);
      const NodeId child = micro_kc(condition(f, Lit(store_.var(v), !b)), depth + 1);
      store_.set_child(v, b, child);
      return store_.current(v);
    }
    default: throw ContractViolation("cached node with unknowns of unexpected kind");
  }
}

NodeId Sampler::compile_full(PccddStore& out) const { return FullCompiler(out, cfg_).run(cnf_, 0); }

}  // namespace amc
