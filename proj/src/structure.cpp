#include "amc/structure.hpp"

#include <algorithm>
#include <numeric>

#include "amc/errors.hpp"
#include "amc/inference.hpp"

namespace amc {

namespace {

class VarUnionFind {
 public:
  explicit VarUnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0u); }
  Var find(Var x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(Var a, Var b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<Var> parent_;
};

}  // namespace

std::vector<Cnf> split_components(const Cnf& cnf) {
  std::vector<Cnf> out;
  if (cnf.is_true()) return out;
  if (cnf.is_false()) {
    out.push_back(Cnf::make_false(cnf.num_vars()));
    return out;
  }
  VarUnionFind uf(cnf.num_vars() + 1);
  for (auto c : cnf.clauses())
    for (std::size_t i = 1; i < c.size(); ++i) uf.unite(c[0].var(), c[i].var());

  // Roots are the smallest variable of each component, so ordering by root
  // orders components by smallest variable.
  std::vector<Var> roots;
  for (Var v : cnf.vars()) {
    if (uf.find(v) == v) roots.push_back(v);
  }
  std::vector<std::uint32_t> slot(cnf.num_vars() + 1, 0);
  for (std::size_t i = 0; i < roots.size(); ++i) slot[roots[i]] = static_cast<std::uint32_t>(i);
  out.assign(roots.size(), Cnf(cnf.num_vars()));
  for (auto c : cnf.clauses()) out[slot[uf.find(c[0].var())]].add_clause(c);
  return out;
}

Decomposition decompose(const Cnf& cnf) {
  Decomposition d;
  if (cnf.is_false()) {
    d.unsat = true;
    return d;
  }
  if (cnf.is_true()) return d;
  ProbeResult probe = probe_implied(cnf);
  if (probe.conflict) {
    d.unsat = true;
    return d;
  }
  std::sort(probe.implied.begin(), probe.implied.end());
  d.implied = std::move(probe.implied);
  const Cnf residual = condition(cnf, d.implied);
  if (residual.is_false()) {
    d.unsat = true;
    d.implied.clear();
    return d;
  }
  d.components = split_components(residual);
  return d;
}

std::size_t minfill_width(const Cnf& cnf, std::size_t stop_above) {
  const auto& vars = cnf.vars();
  const std::size_t m = vars.size();
  if (m == 0) return 0;
  std::vector<std::uint32_t> local(cnf.num_vars() + 1, 0);
  for (std::size_t i = 0; i < m; ++i) local[vars[i]] = static_cast<std::uint32_t>(i);

  std::vector<std::vector<std::uint32_t>> adj(m);
  for (auto c : cnf.clauses()) {
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t j = i + 1; j < c.size(); ++j) {
        adj[local[c[i].var()]].push_back(local[c[j].var()]);
        adj[local[c[j].var()]].push_back(local[c[i].var()]);
      }
  }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  auto adjacent = [&](std::uint32_t a, std::uint32_t b) { return std::binary_search(adj[a].begin(), adj[a].end(), b); };
  auto fill_of = [&](std::uint32_t v) {
    std::size_t f = 0;
    const auto& n = adj[v];
    for (std::size_t i = 0; i < n.size(); ++i)
      for (std::size_t j = i + 1; j < n.size(); ++j) f += !adjacent(n[i], n[j]);
    return f;
  };

  std::vector<std::size_t> fill(m);
  for (std::uint32_t v = 0; v < m; ++v) fill[v] = fill_of(v);
  std::vector<bool> gone(m, false);
  std::vector<std::uint32_t> stamp(m, 0);
  std::uint32_t epoch = 0;
  std::size_t width = 0;

  for (std::size_t step = 0; step < m; ++step) {
    std::uint32_t best = UINT32_MAX;
    for (std::uint32_t v = 0; v < m; ++v) {
      if (gone[v]) continue;
      if (best == UINT32_MAX || fill[v] < fill[best]) best = v;
    }
    const std::vector<std::uint32_t> nb = adj[best];
    width = std::max(width, nb.size());
    if (width > stop_above) return width;
    gone[best] = true;
    for (std::uint32_t u : nb) {
      auto& a = adj[u];
      a.erase(std::lower_bound(a.begin(), a.end(), best));
    }
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        const std::uint32_t a = nb[i], b = nb[j];
        if (adjacent(a, b)) continue;
        adj[a].insert(std::lower_bound(adj[a].begin(), adj[a].end(), b), b);
        adj[b].insert(std::lower_bound(adj[b].begin(), adj[b].end(), a), a);
      }
    ++epoch;
    for (std::uint32_t u : nb) {
      if (stamp[u] != epoch) {
        stamp[u] = epoch;
        fill[u] = fill_of(u);
      }
      for (std::uint32_t w : adj[u]) {
        if (stamp[w] == epoch) continue;
        stamp[w] = epoch;
        fill[w] = fill_of(w);
      }
    }
  }
  return width;
}

std::vector<std::uint64_t> occurrence_scores(const Cnf& cnf) {
  std::vector<std::uint64_t> s(cnf.num_vars() + 1, 0);
  for (auto c : cnf.clauses()) {
    const std::uint64_t w = c.size() == 2 ? 2 : 1;
    for (Lit l : c) s[l.var()] += w;
  }
  return s;
}

Var pick_good_var(const Cnf& cnf, std::optional<std::span<const Var>> restrict_to, VarHeuristic mode) {
  std::vector<Var> cand;
  if (restrict_to) {
    std::vector<Var> r(restrict_to->begin(), restrict_to->end());
    std::sort(r.begin(), r.end());
    std::set_intersection(cnf.vars().begin(), cnf.vars().end(), r.begin(), r.end(), std::back_inserter(cand));
  } else {
    cand = cnf.vars();
  }
  if (cand.empty()) throw ContractViolation("pick_good_var: no candidate variable");
  if (mode == VarHeuristic::kMinIndex) return cand.front();
  const auto s = occurrence_scores(cnf);
  Var best = cand.front();
  for (Var v : cand) {
    if (s[v] > s[best]) best = v;
  }
  return best;
}

std::vector<Var> primal_neighbors(const Cnf& cnf, Var x) {
  std::vector<Var> out;
  for (auto c : cnf.clauses()) {
    const bool has = std::any_of(c.begin(), c.end(), [x](Lit l) { return l.var() == x; });
    if (!has) continue;
    for (Lit l : c)
      if (l.var() != x) out.push_back(l.var());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace amc
