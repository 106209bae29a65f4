#include "amc/exact.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "amc/inference.hpp"
#include "amc/structure.hpp"

namespace amc {

std::size_t EasyConfig::bound() const {
  std::size_t param;
  if (width <= 32)
    param = nonunit_vars * 3 / 4;
  else if (width <= 64)
    param = nonunit_vars * 2 / 3;
  else
    param = nonunit_vars / 2;
  return std::min(cap, param);
}

EasyConfig EasyConfig::from_formula(const Cnf& cnf) {
  EasyConfig cfg;
  std::unordered_set<Var> seen;
  for (auto c : cnf.clauses()) {
    if (c.size() < 2) continue;
    for (Lit l : c) seen.insert(l.var());
  }
  cfg.nonunit_vars = seen.size();
  cfg.width = minfill_width(cnf, 65);
  return cfg;
}

bool easy_instance(const Cnf& cnf, std::size_t bound) { return cnf.vars().size() <= bound; }

bool easy_instance(const Cnf& cnf, const EasyConfig& cfg) { return easy_instance(cnf, cfg.bound()); }

namespace {

class Counter {
 public:
  Count density(const Cnf& f) {
    if (f.is_false()) return 0;
    if (f.is_true()) return 1;
    ComponentKey key = f.key();
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;

    Count result;
    const PropResult bcp = propagate(f);
    if (bcp.conflict()) {
      result = 0;
    } else {
      const Cnf residual = condition(f, bcp.implied);
      const auto comps = split_components(residual);
      if (residual.is_false()) {
        result = 0;
      } else if (comps.size() == 1) {
        result = branch(comps.front());
      } else {
        result = 1;
        for (const auto& c : comps) {
          result *= density(c);
          if (sgn(result) == 0) break;
        }
      }
      result /= pow2(static_cast<std::int64_t>(bcp.implied.size()));
    }
    result.canonicalize();
    cache_.emplace(std::move(key), result);
    return result;
  }

 private:
  Count branch(const Cnf& f) {
    const Var x = pick_good_var(f);
    Count r = density(condition(f, Lit::neg(x))) + density(condition(f, Lit::pos(x)));
    return r / 2;
  }

  std::unordered_map<ComponentKey, Count, ComponentKeyHash> cache_;
};

}  // namespace

Count exact_density(const Cnf& cnf) { return Counter().density(cnf); }

Count exact_count(const Cnf& cnf) { return exact_density(cnf) * pow2(cnf.num_vars()); }

}  // namespace amc
