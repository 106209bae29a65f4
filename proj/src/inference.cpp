#include "amc/inference.hpp"

#include <algorithm>
#include <cstdint>

#include "amc/propagator.hpp"

namespace amc {

PropResult propagate(const Cnf& cnf) {
  PropResult r;
  if (cnf.is_false()) {
    r.status = PropResult::Status::kConflict;
    return r;
  }
  Propagator p(cnf);
  r.implied.assign(p.trail().begin(), p.trail().end());
  if (!p.ok()) r.status = PropResult::Status::kConflict;
  return r;
}

namespace {

std::vector<Var> occurrence_order(const Cnf& cnf) {
  std::vector<std::uint32_t> occ(cnf.num_vars() + 1, 0);
  for (auto c : cnf.clauses())
    for (Lit l : c) ++occ[l.var()];
  std::vector<Var> order = cnf.vars();
  std::stable_sort(order.begin(), order.end(), [&](Var a, Var b) { return occ[a] > occ[b]; });
  return order;
}

}  // namespace

bool sat(const Cnf& cnf) {
  if (cnf.is_false()) return false;
  if (cnf.is_true()) return true;
  Propagator p(cnf);
  if (!p.ok()) return false;
  const std::vector<Var> order = occurrence_order(cnf);

  struct Frame {
    Lit decision;
    bool flipped;
  };
  std::vector<Frame> stack;
  for (;;) {
    std::size_t next = 0;
    while (next < order.size() && p.assigned(order[next])) ++next;
    if (next == order.size()) return true;
    stack.push_back({Lit::pos(order[next]), false});
    bool ok = p.assume(stack.back().decision);
    while (!ok) {
      while (!stack.empty() && stack.back().flipped) stack.pop_back();
      if (stack.empty()) return false;
      p.backtrack(stack.size() - 1);
      Frame& f = stack.back();
      f.flipped = true;
      f.decision = ~f.decision;
      ok = p.assume(f.decision);
    }
  }
}

ProbeResult probe_implied(const Cnf& cnf) {
  ProbeResult r;
  if (cnf.is_false()) {
    r.conflict = true;
    return r;
  }
  Propagator p(cnf);
  bool changed = p.ok();
  r.conflict = !p.ok();
  while (changed && !r.conflict) {
    changed = false;
    for (Var v : cnf.vars()) {
      for (bool negative : {false, true}) {
        if (p.assigned(v)) break;
        const Lit l(v, negative);
        const bool ok = p.assume(l);
        p.backtrack(0);
        if (ok) continue;
        changed = true;
        if (!p.assert_root(~l)) {
          r.conflict = true;
          break;
        }
      }
      if (r.conflict) break;
    }
  }
  r.implied.assign(p.root_trail().begin(), p.root_trail().end());
  return r;
}

std::vector<Lit> implied_literals(const Cnf& cnf) { return probe_implied(cnf).implied; }

namespace {

// Tarjan over the binary implication graph; nodes are literal codes.
std::vector<std::vector<Lit>> binary_sccs(const Cnf& cnf) {
  const std::size_t n = 2 * (static_cast<std::size_t>(cnf.num_vars()) + 1);
  std::vector<std::vector<std::uint32_t>> adj(n);
  bool any = false;
  for (auto c : cnf.clauses()) {
    if (c.size() != 2) continue;
    adj[(~c[0]).code()].push_back(c[1].code());
    adj[(~c[1]).code()].push_back(c[0].code());
    any = true;
  }
  std::vector<std::vector<Lit>> out;
  if (!any) return out;
  for (auto& a : adj) std::sort(a.begin(), a.end());

  constexpr std::uint32_t kUnvisited = UINT32_MAX;
  std::vector<std::uint32_t> index(n, kUnvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::uint32_t> stack;
  std::vector<std::pair<std::uint32_t, std::size_t>> work;
  std::uint32_t counter = 0;

  for (std::uint32_t root = 2; root < n; ++root) {
    if (index[root] != kUnvisited || adj[root].empty()) continue;
    work.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!work.empty()) {
      auto& [v, pos] = work.back();
      if (pos < adj[v].size()) {
        const std::uint32_t w = adj[v][pos++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          work.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const std::uint32_t done = v;
      work.pop_back();
      if (!work.empty()) low[work.back().first] = std::min(low[work.back().first], low[done]);
      if (low[done] != index[done]) continue;
      std::vector<Lit> scc;
      std::uint32_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        scc.push_back(Lit::from_code(w));
      } while (w != done);
      if (scc.size() > 1) {
        std::sort(scc.begin(), scc.end());
        out.push_back(std::move(scc));
      }
    }
  }
  return out;
}

}  // namespace

std::vector<LitPair> detect_lit_equ(const Cnf& cnf) {
  std::vector<LitPair> eq;
  if (cnf.is_false() || cnf.num_binary() == 0) return eq;

  for (const auto& scc : binary_sccs(cnf)) {
    for (std::size_t i = 1; i < scc.size(); ++i) eq.emplace_back(scc[0], scc[i]);
  }

  Propagator p(cnf);
  if (!p.ok()) {
    const Var v = cnf.vars().front();
    eq.emplace_back(Lit::pos(v), Lit::neg(v));
    return eq;
  }
  std::vector<Var> binary_vars;
  for (auto c : cnf.clauses()) {
    if (c.size() != 2) continue;
    binary_vars.push_back(c[0].var());
    binary_vars.push_back(c[1].var());
  }
  std::sort(binary_vars.begin(), binary_vars.end());
  binary_vars.erase(std::unique(binary_vars.begin(), binary_vars.end()), binary_vars.end());

  std::vector<std::uint32_t> mark(2 * (static_cast<std::size_t>(cnf.num_vars()) + 1), 0);
  std::uint32_t stamp = 0;
  std::vector<Lit> when_false;
  for (Var x : binary_vars) {
    if (p.assigned(x)) continue;
    ++stamp;
    bool ok = p.assume(Lit::pos(x));
    if (ok) {
      for (Lit l : p.top_level()) mark[l.code()] = stamp;
    }
    p.backtrack(0);
    if (!ok) continue;
    ok = p.assume(Lit::neg(x));
    if (ok) when_false.assign(p.top_level().begin(), p.top_level().end());
    p.backtrack(0);
    if (!ok) continue;
    for (Lit m : when_false) {
      if (m.var() == x) continue;
      if (mark[(~m).code()] == stamp) eq.emplace_back(Lit::pos(x), ~m);
    }
  }
  return eq;
}

}  // namespace amc
