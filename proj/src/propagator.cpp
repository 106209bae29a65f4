#include "amc/propagator.hpp"

#include <utility>

namespace amc {

Propagator::Propagator(const Cnf& cnf)
    : num_vars_(cnf.num_vars()),
      watches_(2 * (static_cast<std::size_t>(cnf.num_vars()) + 1)),
      assign_(cnf.num_vars() + 1, 0) {
  std::vector<Lit> units;
  for (auto c : cnf.clauses()) {
    if (c.empty()) {
      ok_ = false;
      continue;
    }
    if (c.size() == 1) {
      units.push_back(c[0]);
      continue;
    }
    const auto idx = static_cast<std::uint32_t>(start_.size());
    start_.push_back(static_cast<std::uint32_t>(lits_.size()));
    size_.push_back(static_cast<std::uint32_t>(c.size()));
    lits_.insert(lits_.end(), c.begin(), c.end());
    watches_[c[0].code()].push_back(idx);
    watches_[c[1].code()].push_back(idx);
  }
  if (!ok_) return;
  for (Lit u : units) {
    const int v = value(u);
    if (v < 0) {
      ok_ = false;
      return;
    }
    if (v == 0) enqueue(u);
  }
  ok_ = propagate();
}

bool Propagator::propagate() {
  while (qhead_ < trail_.size()) {
    const Lit p = trail_[qhead_++];
    const Lit falsified = ~p;
    auto& ws = watches_[falsified.code()];
    std::size_t i = 0, j = 0;
    bool conflict = false;
    while (i < ws.size()) {
      const std::uint32_t ci = ws[i++];
      Lit* c = lits_.data() + start_[ci];
      const std::uint32_t n = size_[ci];
      if (c[0] == falsified) std::swap(c[0], c[1]);
      // c[1] is the falsified watch now
      if (value(c[0]) > 0) {
        ws[j++] = ci;
        continue;
      }
      bool moved = false;
      for (std::uint32_t k = 2; k < n; ++k) {
        if (value(c[k]) >= 0) {
          std::swap(c[1], c[k]);
          watches_[c[1].code()].push_back(ci);
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = ci;
      if (value(c[0]) < 0) {
        conflict = true;
        while (i < ws.size()) ws[j++] = ws[i++];
        break;
      }
      enqueue(c[0]);
    }
    ws.resize(j);
    if (conflict) {
      qhead_ = trail_.size();
      return false;
    }
  }
  return true;
}

bool Propagator::assume(Lit l) {
  levels_.push_back(trail_.size());
  const int v = value(l);
  if (v > 0) return true;
  if (v < 0) return false;
  enqueue(l);
  return propagate();
}

bool Propagator::assert_root(Lit l) {
  backtrack(0);
  if (!ok_) return false;
  const int v = value(l);
  if (v > 0) return true;
  if (v < 0) return ok_ = false;
  enqueue(l);
  return ok_ = propagate();
}

void Propagator::backtrack(std::size_t level) {
  if (levels_.size() <= level) return;
  const std::size_t keep = levels_[level];
  for (std::size_t i = trail_.size(); i > keep; --i) assign_[trail_[i - 1].var()] = 0;
  trail_.resize(keep);
  levels_.resize(level);
  qhead_ = keep;
}

}  // namespace amc
