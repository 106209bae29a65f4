#include "amc/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "amc/errors.hpp"

namespace amc {

namespace {

// Clauses as bit masks over the positions of Vars(cnf).
struct MaskClause {
  std::uint32_t pos = 0, neg = 0;
  std::uint32_t last = 0;  // highest position mentioned
};

struct MaskCnf {
  std::size_t m = 0;
  bool has_empty = false;
  std::vector<MaskClause> clauses;  // sorted by last position
  std::vector<std::size_t> first_at;  // first clause index with last >= i
};

MaskCnf to_masks(const Cnf& cnf, const OracleLimit& limit) {
  const auto& vars = cnf.vars();
  if (vars.size() > limit.max_vars)
    throw ContractViolation("brute force refused: " + std::to_string(vars.size()) + " variables");
  MaskCnf out;
  out.m = vars.size();
  out.has_empty = cnf.is_false();
  for (auto c : cnf.clauses()) {
    MaskClause mc;
    for (Lit l : c) {
      const auto i = static_cast<std::uint32_t>(std::lower_bound(vars.begin(), vars.end(), l.var()) - vars.begin());
      (l.negative() ? mc.neg : mc.pos) |= 1u << i;
      mc.last = std::max(mc.last, i);
    }
    out.clauses.push_back(mc);
  }
  std::sort(out.clauses.begin(), out.clauses.end(),
            [](const MaskClause& a, const MaskClause& b) { return a.last < b.last; });
  out.first_at.assign(out.m + 1, out.clauses.size());
  for (std::size_t i = out.clauses.size(); i-- > 0;) {
    for (std::size_t p = 0; p <= out.clauses[i].last; ++p) out.first_at[p] = std::min(out.first_at[p], i);
  }
  return out;
}

bool satisfied(const MaskClause& c, std::uint32_t a) { return ((a & c.pos) | (~a & c.neg)) != 0; }

// Models extending the assignment of positions [0, depth).
std::uint64_t extend(const MaskCnf& f, std::uint32_t a, std::size_t depth) {
  if (depth == f.m) return 1;
  std::uint64_t total = 0;
  for (std::uint32_t b = 0; b < 2; ++b) {
    const std::uint32_t next = a | (b << depth);
    bool ok = true;
    for (std::size_t i = f.first_at[depth]; i < f.clauses.size() && f.clauses[i].last == depth; ++i) {
      if (!satisfied(f.clauses[i], next)) {
        ok = false;
        break;
      }
    }
    if (ok) total += extend(f, next, depth + 1);
  }
  return total;
}

Count scale(std::uint64_t models, const Cnf& cnf, std::size_t m) {
  Count c(mpz_class(std::to_string(models)));
  return c * pow2(static_cast<std::int64_t>(cnf.num_vars()) - static_cast<std::int64_t>(m));
}

}  // namespace

Count brute_count(const Cnf& cnf, OracleLimit limit) {
  const MaskCnf f = to_masks(cnf, limit);
  if (f.has_empty) return 0;
  const std::size_t split = std::min<std::size_t>(f.m, 6);
  const std::int64_t prefixes = std::int64_t{1} << split;
  std::uint64_t models = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : models)
  for (std::int64_t p = 0; p < prefixes; ++p) {
    const auto a = static_cast<std::uint32_t>(p);
    bool ok = true;
    for (const auto& c : f.clauses) {
      if (c.last >= split) break;
      if (!satisfied(c, a)) {
        ok = false;
        break;
      }
    }
    if (ok) models += extend(f, a, split);
  }
  return scale(models, cnf, f.m);
}

Count brute_count_serial(const Cnf& cnf, OracleLimit limit) {
  const MaskCnf f = to_masks(cnf, limit);
  if (f.has_empty) return 0;
  std::uint64_t models = 0;
  const std::uint64_t n = std::uint64_t{1} << f.m;
  for (std::uint64_t a = 0; a < n; ++a) {
    const auto w = static_cast<std::uint32_t>(a);
    models += std::all_of(f.clauses.begin(), f.clauses.end(), [w](const MaskClause& c) { return satisfied(c, w); });
  }
  return scale(models, cnf, f.m);
}

Count brute_marginal(const Cnf& cnf, Var x, OracleLimit limit) {
  const Count total = brute_count(cnf, limit);
  if (sgn(total) == 0) throw ContractViolation("marginal of an unsatisfiable formula");
  Cnf with_x = cnf;
  const Lit unit[1] = {Lit::pos(x)};
  with_x.add_clause(unit);
  Count r = brute_count(with_x, limit) / total;
  r.canonicalize();
  return r;
}

}  // namespace amc
