#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <istream>
#include <span>
#include <string_view>
#include <vector>

#include "amc/lit.hpp"

namespace amc {

/// Canonical structural key of a clause set: sorted clauses, each sorted,
/// duplicates removed, separated by a zero word.
struct ComponentKey {
  std::vector<std::uint32_t> words;
  std::size_t hash = 0;

  bool operator==(const ComponentKey& o) const { return hash == o.hash && words == o.words; }
};

struct ComponentKeyHash {
  std::size_t operator()(const ComponentKey& k) const { return k.hash; }
};

/// Clause database over the variable universe {1..num_vars}.
///
/// Clauses live in one flat literal array.  Every stored clause is sorted,
/// duplicate-free and non-tautological; tautologies are dropped on insert.
/// num_vars is the size of the global universe X and survives conditioning,
/// so counts of every derived formula share one normalization.
class Cnf {
 public:
  class ClauseRange;

  Cnf() = default;
  explicit Cnf(Var num_vars) : num_vars_(num_vars) {}
  Cnf(Var num_vars, std::initializer_list<std::initializer_list<std::int64_t>> dimacs);
  Cnf(Var num_vars, const std::vector<std::vector<Lit>>& clauses);

  /// The canonical unsatisfiable formula: one empty clause.
  static Cnf make_false(Var num_vars);

  /// Adds a clause after normalizing it.  Throws ContractViolation when a
  /// literal's variable is outside the universe.
  void add_clause(std::span<const Lit> lits);

  Var num_vars() const { return num_vars_; }
  std::size_t num_clauses() const { return starts_.size(); }
  std::size_t num_literals() const { return lits_.size(); }
  std::span<const Lit> clause(std::size_t i) const {
    const std::uint32_t b = starts_[i];
    const std::uint32_t e = i + 1 < starts_.size() ? starts_[i + 1] : static_cast<std::uint32_t>(lits_.size());
    return {lits_.data() + b, e - b};
  }
  ClauseRange clauses() const;

  bool is_true() const { return starts_.empty(); }
  bool is_false() const { return has_empty_; }

  /// Sorted variables occurring in some clause.
  const std::vector<Var>& vars() const { return vars_; }
  std::size_t num_binary() const;

  ComponentKey key() const;

  /// Same clause set, ignoring clause order and duplicate clauses.
  bool same_clauses(const Cnf& other) const { return num_vars_ == other.num_vars_ && key() == other.key(); }

 private:
  Var num_vars_ = 0;
  std::vector<Lit> lits_;
  std::vector<std::uint32_t> starts_;
  std::vector<Var> vars_;
  bool has_empty_ = false;
};

class Cnf::ClauseRange {
 public:
  class iterator {
   public:
    using value_type = std::span<const Lit>;
    using difference_type = std::ptrdiff_t;
    iterator() = default;
    iterator(const Cnf* cnf, std::size_t i) : cnf_(cnf), i_(i) {}
    value_type operator*() const { return cnf_->clause(i_); }
    iterator& operator++() {
      ++i_;
      return *this;
    }
    iterator operator++(int) {
      iterator t = *this;
      ++i_;
      return t;
    }
    bool operator==(const iterator& o) const { return i_ == o.i_; }

   private:
    const Cnf* cnf_ = nullptr;
    std::size_t i_ = 0;
  };

  explicit ClauseRange(const Cnf* cnf) : cnf_(cnf) {}
  iterator begin() const { return {cnf_, 0}; }
  iterator end() const { return {cnf_, cnf_->num_clauses()}; }

 private:
  const Cnf* cnf_;
};

inline Cnf::ClauseRange Cnf::clauses() const { return ClauseRange(this); }

/// Substitutes the given literals with true.  Satisfied clauses vanish,
/// falsified literals are removed, and an emptied clause turns the whole
/// formula into make_false().  Variables absent from the formula are ignored.
Cnf condition(const Cnf& cnf, std::span<const Lit> lits);
Cnf condition(const Cnf& cnf, Lit lit);

/// Reads DIMACS CNF.  Throws ParseError with the offending line.
Cnf parse_dimacs(std::istream& in);
Cnf parse_dimacs(std::string_view text);
Cnf read_dimacs_file(const std::string& path);

void write_dimacs(std::ostream& out, const Cnf& cnf);

}  // namespace amc
