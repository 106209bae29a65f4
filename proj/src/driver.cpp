#include "amc/driver.hpp"

#include <chrono>
#include <cmath>

#include "amc/errors.hpp"
#include "amc/pccdd.hpp"

namespace amc {

Count markov_lower_bound(const Count& estimate, double delta) {
  // delta to six decimals keeps the bound a short rational.
  Count d(static_cast<long>(std::llround(delta * 1e6)), 1000000);
  d.canonicalize();
  Count r = estimate * d;
  r.canonicalize();
  return r;
}

Count ledger_average(std::span<const Segment> ledger) {
  Count num = 0;
  std::uint64_t den = 0;
  for (const auto& s : ledger) {
    num += s.estimate * Count(static_cast<unsigned long>(s.calls));
    den += s.calls;
  }
  if (den == 0) return 0;
  Count r = num / Count(static_cast<unsigned long>(den));
  r.canonicalize();
  return r;
}

namespace {

class Run {
 public:
  Run(const Cnf& cnf, const RunConfig& cfg)
      : cfg_(cfg), sampler_(cnf, cfg.sampler, cfg.seed), start_(std::chrono::steady_clock::now()) {
    if (!(cfg.timeout > 0)) throw ContractViolation("timeout must be positive");
    if (!(cfg.delta > 0 && cfg.delta < 1)) throw ContractViolation("delta must lie in (0,1)");
    res_.lower = 0;
    res_.upper = pow2(cnf.num_vars());
  }

  RunResult go() {
    const PccddStore& s = sampler_.store();
    do {
      ++n_;
      const NodeId root = sampler_.micro_kc();
      if (!s.has_unknown(root)) {
        converge(count_full(s, root));
        return finish();
      }
      if (s.footprint() > cfg_.sampler.node_budget) {
        const Count z = estimate(s, root);
        tighten(root);
        res_.ledger.push_back({n_ - m_, z});
        z_ = (z_ * Count(static_cast<unsigned long>(m_)) + z * Count(static_cast<unsigned long>(n_ - m_))) /
             Count(static_cast<unsigned long>(n_));
        m_ = n_;
        sampler_.reset();
        ++res_.n_restarts;
      }
      if (cfg_.trace_interval != 0 && n_ % cfg_.trace_interval == 0) record();
    } while (elapsed() < cfg_.timeout && (!cfg_.max_calls || n_ < *cfg_.max_calls));

    if (n_ > m_) {
      const NodeId root = sampler_.root();
      res_.ledger.push_back({n_ - m_, estimate(s, root)});
      tighten(root);
    }
    res_.estimate = blended();
    return finish();
  }

 private:
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  // Alg. 1 running average including the live diagram.
  Count blended() const {
    if (n_ == m_) return z_;
    const Count live = estimate(sampler_.store(), sampler_.root());
    Count r = (z_ * Count(static_cast<unsigned long>(m_)) + live * Count(static_cast<unsigned long>(n_ - m_))) /
              Count(static_cast<unsigned long>(n_));
    r.canonicalize();
    return r;
  }

  void tighten(NodeId root) {
    const PccddStore& s = sampler_.store();
    const Count lo = bound(s, root, BoundMode::kLower);
    const Count hi = bound(s, root, BoundMode::kUpper);
    if (lo > res_.lower) res_.lower = lo;
    if (hi < res_.upper) res_.upper = hi;
  }

  void converge(const Count& exact) {
    res_.converged = true;
    res_.estimate = exact;
    res_.lower = exact;
    res_.upper = exact;
    res_.ledger.push_back({n_ - m_, exact});
    if (cfg_.trace_interval != 0) record();
  }

  void record() {
    TracePoint t;
    t.elapsed = elapsed();
    t.n_calls = n_;
    t.converged = res_.converged;
    if (res_.converged) {
      t.estimate = t.lower = t.upper = res_.estimate;
    } else {
      if (n_ > m_) tighten(sampler_.root());
      t.estimate = blended();
      t.lower = res_.lower;
      t.upper = res_.upper;
    }
    res_.trace.push_back(std::move(t));
  }

  RunResult finish() {
    res_.n_calls = n_;
    res_.elapsed = elapsed();
    res_.lower_bound = res_.converged ? res_.estimate : markov_lower_bound(res_.estimate, cfg_.delta);
    return std::move(res_);
  }

  const RunConfig& cfg_;
  Sampler sampler_;
  std::chrono::steady_clock::time_point start_;
  RunResult res_;
  std::uint64_t n_ = 0, m_ = 0;
  Count z_ = 0;
};

}  // namespace

RunResult partial_kc(const Cnf& cnf, const RunConfig& cfg) { return Run(cnf, cfg).go(); }

std::vector<Count> estimate_batch(const Cnf& cnf, const RunConfig& cfg, std::span<const std::uint64_t> seeds) {
  std::vector<Count> out(seeds.size());
  const auto n = static_cast<std::int64_t>(seeds.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) {
    RunConfig c = cfg;
    c.seed = seeds[static_cast<std::size_t>(i)];
    c.trace_interval = 0;
    out[static_cast<std::size_t>(i)] = partial_kc(cnf, c).estimate;
  }
  return out;
}

std::vector<Count> estimate_batch_serial(const Cnf& cnf, const RunConfig& cfg,
                                         std::span<const std::uint64_t> seeds) {
  std::vector<Count> out;
  out.reserve(seeds.size());
  for (std::uint64_t seed : seeds) {
    RunConfig c = cfg;
    c.seed = seed;
    c.trace_interval = 0;
    out.push_back(partial_kc(cnf, c).estimate);
  }
  return out;
}

}  // namespace amc
