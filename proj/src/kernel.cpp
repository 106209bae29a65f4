#include "amc/kernel.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "amc/errors.hpp"

namespace amc {

namespace {

class LitUnionFind {
 public:
  std::uint32_t find(std::uint32_t x) {
    auto it = parent_.find(x);
    if (it == parent_.end()) {
      parent_.emplace(x, x);
      return x;
    }
    std::uint32_t root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) {
      const std::uint32_t next = parent_[x];
      parent_[x] = root;
      x = next;
    }
    return root;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }
  std::vector<std::uint32_t> members() const {
    std::vector<std::uint32_t> m;
    for (const auto& kv : parent_) m.push_back(kv.first);
    std::sort(m.begin(), m.end());
    return m;
  }

 private:
  std::unordered_map<std::uint32_t, std::uint32_t> parent_;
};

}  // namespace

LitEquivSet prime_closure(std::span<const LitPair> raw) {
  LitUnionFind uf;
  for (const auto& [a, b] : raw) {
    if (a == b) continue;
    uf.unite(a.code(), b.code());
    uf.unite((~a).code(), (~b).code());
  }
  LitEquivSet out;
  // Members sorted by code: the first member seen for a class is the one
  // with the smallest variable, positive phase before negative.
  std::unordered_map<std::uint32_t, Lit> class_min;
  const auto members = uf.members();
  for (std::uint32_t code : members) {
    const std::uint32_t r = uf.find(code);
    if (!class_min.contains(r)) class_min.emplace(r, Lit::from_code(code));
  }
  for (std::uint32_t code : members) {
    const Lit l = Lit::from_code(code);
    if (uf.find(code) == uf.find((~l).code())) out.consistent = false;
    const Lit m = class_min.at(uf.find(code));
    // Emit from the class in which the minimum variable is positive.
    if (m.negative() || l == m) continue;
    out.pairs.push_back({m.var(), l});
  }
  if (!out.consistent) out.pairs.clear();
  std::sort(out.pairs.begin(), out.pairs.end(),
            [](const Equiv& a, const Equiv& b) { return a.rep != b.rep ? a.rep < b.rep : a.lit < b.lit; });
  return out;
}

LitEquivSet prime_closure(std::span<const Equiv> prime) {
  std::vector<LitPair> raw;
  raw.reserve(prime.size());
  for (const auto& e : prime) raw.emplace_back(Lit::pos(e.rep), e.lit);
  return prime_closure(raw);
}

Cnf construct_core(const Cnf& cnf, const LitEquivSet& eq) {
  if (!eq.consistent) throw ContractViolation("construct_core: inconsistent equivalences");
  if (eq.empty()) return cnf;
  // subst[code] = replacement literal code
  std::vector<std::uint32_t> subst(2 * (static_cast<std::size_t>(cnf.num_vars()) + 1));
  std::iota(subst.begin(), subst.end(), 0u);
  for (const auto& e : eq.pairs) {
    // rep <-> lit, so var(lit) equals rep in lit's phase.
    const Lit pos_rep = Lit::pos(e.rep);
    const Lit v_pos = Lit::pos(e.lit.var());
    const Lit to = e.lit.negative() ? ~pos_rep : pos_rep;
    subst[v_pos.code()] = to.code();
    subst[(~v_pos).code()] = (~to).code();
  }
  Cnf out(cnf.num_vars());
  std::vector<Lit> buf;
  for (auto c : cnf.clauses()) {
    buf.clear();
    for (Lit l : c) buf.push_back(Lit::from_code(subst[l.code()]));
    out.add_clause(buf);
  }
  // add_clause dropped tautologies; rebuild once more to drop duplicates.
  if (out.is_false()) return out;
  const ComponentKey key = out.key();
  Cnf dedup(cnf.num_vars());
  std::size_t b = 0;
  for (std::size_t i = 0; i < key.words.size(); ++i) {
    if (key.words[i] != 0) continue;
    buf.clear();
    for (std::size_t j = b; j < i; ++j) buf.push_back(Lit::from_code(key.words[j]));
    dedup.add_clause(buf);
    b = i + 1;
  }
  return dedup;
}

bool should_kernelize(const Cnf& cnf, unsigned depth, const KernelGate& gate) {
  if (cnf.num_clauses() == 0) return false;
  const std::size_t bin = cnf.num_binary();
  if (bin == 0) return false;
  if (gate.depth_period != 0 && depth % gate.depth_period != 0) return false;
  return static_cast<double>(bin) >= gate.min_binary_ratio * static_cast<double>(cnf.num_clauses());
}

}  // namespace amc
