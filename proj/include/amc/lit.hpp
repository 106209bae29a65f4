#pragma once

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <ostream>

namespace amc {

/// Variables are 1-based; 0 is never a valid variable.
using Var = std::uint32_t;

/// A literal packed as `var << 1 | negative`.  Ordering by code sorts by
/// variable first and puts the positive phase before the negative one.
class Lit {
 public:
  constexpr Lit() = default;
  constexpr Lit(Var var, bool negative) : code_(var << 1 | (negative ? 1u : 0u)) {}

  static constexpr Lit pos(Var var) { return Lit(var, false); }
  static constexpr Lit neg(Var var) { return Lit(var, true); }
  static constexpr Lit from_dimacs(std::int64_t d) {
    return d < 0 ? Lit(static_cast<Var>(-d), true) : Lit(static_cast<Var>(d), false);
  }
  static constexpr Lit from_code(std::uint32_t code) {
    Lit l;
    l.code_ = code;
    return l;
  }

  constexpr Var var() const { return code_ >> 1; }
  constexpr bool negative() const { return (code_ & 1u) != 0; }
  constexpr std::uint32_t code() const { return code_; }
  constexpr std::int64_t to_dimacs() const {
    return negative() ? -static_cast<std::int64_t>(var()) : static_cast<std::int64_t>(var());
  }

  constexpr Lit operator~() const { return from_code(code_ ^ 1u); }
  /// Literal of the same variable made true by assigning `value`.
  constexpr bool satisfied_by(bool value) const { return value != negative(); }

  constexpr auto operator<=>(const Lit&) const = default;

 private:
  std::uint32_t code_ = 0;
};

inline std::ostream& operator<<(std::ostream& os, Lit l) { return os << l.to_dimacs(); }

}  // namespace amc
