#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "amc/cnf.hpp"

namespace amc {

/// Two-watched-literal unit propagation over a private copy of a Cnf, with
/// a decision trail and chronological backtracking.  Level 0 holds the
/// literals forced by the formula alone.
class Propagator {
 public:
  explicit Propagator(const Cnf& cnf);

  /// False once a conflict has been derived at level 0.
  bool ok() const { return ok_; }

  /// Value of a literal: +1 true, -1 false, 0 unassigned.
  int value(Lit l) const {
    const std::int8_t v = assign_[l.var()];
    return l.negative() ? -v : v;
  }
  bool assigned(Var v) const { return assign_[v] != 0; }

  /// Opens a new decision level with `l` and propagates.  Returns false on
  /// conflict; the caller must backtrack(level() - 1) before continuing.
  bool assume(Lit l);

  /// Asserts `l` at level 0 (after undoing every decision level).
  /// Returns false if the formula is now known to be unsatisfiable.
  bool assert_root(Lit l);

  void backtrack(std::size_t level);
  std::size_t level() const { return levels_.size(); }

  std::span<const Lit> trail() const { return trail_; }
  /// Literals assigned on the current top decision level (decision included).
  std::span<const Lit> top_level() const {
    const std::size_t b = levels_.empty() ? 0 : levels_.back();
    return std::span<const Lit>(trail_).subspan(b);
  }
  std::span<const Lit> root_trail() const {
    const std::size_t e = levels_.empty() ? trail_.size() : levels_.front();
    return std::span<const Lit>(trail_).first(e);
  }

  Var num_vars() const { return num_vars_; }

 private:
  void enqueue(Lit l) {
    assign_[l.var()] = l.negative() ? -1 : 1;
    trail_.push_back(l);
  }
  bool propagate();

  Var num_vars_;
  bool ok_ = true;
  std::vector<Lit> lits_;                    // clause literals, watched pair first
  std::vector<std::uint32_t> start_, size_;  // per clause
  std::vector<std::vector<std::uint32_t>> watches_;  // by literal code: clauses watching ~lit
  std::vector<std::int8_t> assign_;
  std::vector<Lit> trail_;
  std::vector<std::size_t> levels_;
  std::size_t qhead_ = 0;
};

}  // namespace amc
