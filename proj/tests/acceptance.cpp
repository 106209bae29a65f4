#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "amc/driver.hpp"
#include "amc/exact.hpp"
#include "amc/kernel.hpp"
#include "amc/oracle.hpp"
#include "amc/pccdd.hpp"
#include "amc/sampler.hpp"
#include "amc/structure.hpp"
#include "json.hpp"
#include "paper_example.hpp"
#include "random_cnf.hpp"

using namespace amc;
namespace t = amc::testing;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

#define REQUIRE(cond, msg)          \
  do {                              \
    if (!(cond)) return {false, msg}; \
  } while (0)

std::string str(const Count& c) { return to_string(c); }

Cnf sat_3cnf(std::mt19937_64& rng, Var lo, Var hi, double ratio_lo, double ratio_hi) {
  for (;;) {
    t::RandomCnfSpec s;
    s.vars = std::uniform_int_distribution<Var>(lo, hi)(rng);
    s.ratio = std::uniform_real_distribution<double>(ratio_lo, ratio_hi)(rng);
    s.min_width = s.max_width = 3;
    s.planted_equivs = std::uniform_int_distribution<unsigned>(0, 2)(rng);
    Cnf f = t::random_cnf(rng, s);
    if (sgn(brute_count(f)) > 0) return f;
  }
}

Outcome figure2b() {
  PccddStore s(7);
  const auto f = t::build_fig2b(s);
  const Count phi5 = estimate(s, s.child(f.decomp, 1));
  const Count inner = estimate(s, f.inner);
  const Count dec = estimate(s, f.decomp);
  const Count kern = estimate(s, f.kernel);
  const Count root = estimate(s, f.root);
  std::ostringstream d;
  d << "phi5=" << str(phi5) << " inner=" << str(inner) << " decomp=" << str(dec) << " kernel=" << str(kern)
    << " root=" << str(root);
  return {phi5 == 80 && inner == 80 && dec == 50 && kern == 40 && root == 45, d.str()};
}

Outcome example2() {
  const Cnf phi = t::example_phi();
  const Cnf phi1 = condition(phi, Lit::pos(1));
  REQUIRE(phi1.same_clauses(t::example_phi1()), "conditioning on x1");
  const auto raw = detect_lit_equ(phi1);
  const LitEquivSet eq = prime_closure(raw);
  REQUIRE(eq.consistent && eq.size() == 1 && eq.pairs[0] == (Equiv{2, Lit::pos(5)}), "equivalence x2<->x5");
  REQUIRE(construct_core(phi1, eq).same_clauses(t::example_phi2()), "core phi2");
  const Cnf phi4 = condition(phi, Lit::neg(1));
  REQUIRE(phi4.same_clauses(t::example_phi4()), "conditioning on -x1");
  const auto parts = split_components(phi4);
  REQUIRE(parts.size() == 2, "phi4 components");
  const Cnf phi3 = condition(t::example_phi2(), Lit::neg(2));
  REQUIRE(exact_count(phi3) == 96, "sub-count " + str(exact_count(phi3)));

  Sampler smp = t::example_sampler();
  const bool call1[2] = {true, false};
  const bool call2[3] = {false, false, true};
  smp.force_samples(call1);
  NodeId root = smp.micro_kc();
  const Count lo1 = bound(smp.store(), root, BoundMode::kLower);
  const Count e1 = estimate(smp.store(), root);
  REQUIRE(lo1 == 12 && e1 == 40, "call 1 lower=" + str(lo1) + " estimate=" + str(e1));
  smp.force_samples(call2);
  root = smp.micro_kc();
  const Count e2 = estimate(smp.store(), root);
  REQUIRE(e2 == 45, "call 2 estimate=" + str(e2));
  RunConfig cfg;
  cfg.timeout = 10;
  const auto r = partial_kc(phi, cfg);
  REQUIRE(r.converged && r.estimate == t::kExamplePhiCount, "run estimate=" + str(r.estimate));
  return {true, "phi1, x2<->x5, phi2, 2 components, 96, 40 then 45, converges to 55"};
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(1001);
  const int n = 240;
  int sat = 0;
  for (int i = 0; i < n; ++i) {
    const Cnf f = t::random_cnf(rng, t::random_spec(rng, 5, 16));
    const Count z = brute_count(f);
    if (sgn(z) > 0) ++sat;
    REQUIRE(exact_count(f) == z, "exact_count mismatch on instance " + std::to_string(i));
    Sampler smp(f, {}, 0);
    PccddStore full(f.num_vars());
    REQUIRE(count_full(full, smp.compile_full(full)) == z, "count_full mismatch on instance " + std::to_string(i));
  }
  return {true, std::to_string(n) + " instances, " + std::to_string(sat) + " satisfiable"};
}

Outcome sandwich() {
  std::mt19937_64 rng(1002);
  std::size_t checks = 0;
  for (int i = 0; i < 50; ++i) {
    const Cnf f = i % 2 == 0 ? sat_3cnf(rng, 10, 16, 2.0, 4.0) : t::random_sat_cnf(rng, 10, 16, 1.0, 2.5);
    const Count z = brute_count(f);
    SamplerConfig cfg;
    cfg.easy = i % 5 == 4;
    Sampler smp(f, cfg, static_cast<std::uint64_t>(i));
    Count lo = 0, hi = pow2(f.num_vars());
    for (int c = 0; c < 50; ++c) {
      const NodeId r = smp.micro_kc();
      const Count l = bound(smp.store(), r, BoundMode::kLower);
      const Count u = bound(smp.store(), r, BoundMode::kUpper);
      const std::string where = "instance " + std::to_string(i) + " call " + std::to_string(c);
      REQUIRE(l <= z && z <= u, "bounds miss count at " + where);
      REQUIRE(l >= lo && u <= hi, "bounds not monotone at " + where);
      lo = l;
      hi = u;
      ++checks;
    }
  }
  return {true, std::to_string(checks) + " checks"};
}

struct Moments {
  double mean = 0, se = 0;
};

Moments moments(const std::vector<double>& xs) {
  double sum = 0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  double ss = 0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double var = ss / static_cast<double>(xs.size() - 1);
  return {mean, std::sqrt(var / static_cast<double>(xs.size()))};
}

std::vector<Cnf> unbiased_suite() {
  std::mt19937_64 rng(1003);
  std::vector<Cnf> out;
  while (out.size() < 10) {
    out.push_back(out.size() % 2 == 0 ? sat_3cnf(rng, 10, 14, 2.5, 4.0) : t::random_sat_cnf(rng, 10, 14, 1.0, 2.0));
  }
  return out;
}

Outcome unbiased(bool restarts) {
  const int runs = 2000;
  double worst = 0;
  std::uint64_t min_restarts = ~std::uint64_t{0};
  std::ostringstream d;
  const auto suite = unbiased_suite();
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const Cnf& f = suite[i];
    const double z = brute_count(f).get_d();
    std::vector<double> xs;
    xs.reserve(runs);
    for (int s = 0; s < runs; ++s) {
      const std::uint64_t seed = 1000003ULL * i + static_cast<std::uint64_t>(s);
      if (!restarts) {
        SamplerConfig cfg;
        cfg.easy = false;
        Sampler smp(f, cfg, seed);
        xs.push_back(estimate(smp.store(), smp.micro_kc()).get_d());
      } else {
        RunConfig cfg;
        cfg.seed = seed;
        cfg.sampler.easy = false;
        cfg.sampler.node_budget = 1;
        cfg.max_calls = 4;
        cfg.trace_interval = 0;
        const auto r = partial_kc(f, cfg);
        if (!r.converged) min_restarts = std::min(min_restarts, r.n_restarts);
        xs.push_back(r.estimate.get_d());
      }
    }
    const Moments m = moments(xs);
    const double dev = std::abs(m.mean - z);
    const double score = m.se > 0 ? dev / m.se : (dev < 1e-9 * std::max(1.0, z) ? 0 : INFINITY);
    worst = std::max(worst, score);
    d << ' ' << std::fixed;
    d.precision(2);
    d << score;
  }
  std::string detail = "deviation in SE per instance:" + d.str();
  if (restarts) {
    if (min_restarts == ~std::uint64_t{0}) return {false, "every run converged, no restarts exercised"};
    detail += "; min restarts " + std::to_string(min_restarts);
    if (min_restarts < 3) return {false, detail};
  }
  return {worst <= 5.0, detail};
}

Outcome convergence() {
  std::mt19937_64 rng(1004);
  std::uint64_t calls = 0;
  for (int i = 0; i < 100; ++i) {
    const Cnf f = i % 3 == 0   ? t::random_cnf(rng, t::random_spec(rng, 8, 20))
                  : i % 3 == 1 ? sat_3cnf(rng, 12, 20, 2.0, 4.0)
                               : t::random_sat_cnf(rng, 12, 20, 1.0, 2.5);
    RunConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(i);
    cfg.timeout = 60;
    cfg.sampler.easy = i % 2 == 0;
    cfg.trace_interval = 0;
    const auto r = partial_kc(f, cfg);
    calls += r.n_calls;
    const Count z = brute_count(f);
    REQUIRE(r.converged, "instance " + std::to_string(i) + " did not converge");
    REQUIRE(r.estimate == z, "instance " + std::to_string(i) + " returned " + str(r.estimate) + " expected " + str(z));
  }
  return {true, "100 instances, " + std::to_string(calls) + " calls"};
}

Outcome part_whole() {
  std::mt19937_64 rng(1005);
  std::size_t checks = 0;
  for (int i = 0; i < 25; ++i) {
    const Cnf f = i % 2 == 0 ? sat_3cnf(rng, 6, 10, 2.0, 4.0) : t::random_sat_cnf(rng, 5, 10, 1.0, 2.5);
    SamplerConfig cfg;
    cfg.easy = false;
    cfg.debug_checks = true;
    Sampler smp(f, cfg, static_cast<std::uint64_t>(i));
    PccddStore full(f.num_vars());
    const NodeId whole = smp.compile_full(full);
    for (int c = 0; c < 1000; ++c) {
      const NodeId r = smp.micro_kc();
      REQUIRE(is_part_of(smp.store(), r, full, whole),
              "instance " + std::to_string(i) + " call " + std::to_string(c));
      ++checks;
      if (!smp.store().has_unknown(r)) break;
    }
  }
  return {true, std::to_string(checks) + " intermediate diagrams"};
}

Outcome markov() {
  std::mt19937_64 rng(1006);
  const Cnf f = sat_3cnf(rng, 12, 12, 3.0, 3.0);
  const Count z = brute_count(f);
  const int runs = 1000;
  int covered = 0, converged = 0;
  for (int s = 0; s < runs; ++s) {
    RunConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(s);
    cfg.delta = 0.2;
    cfg.max_calls = 2;
    cfg.trace_interval = 0;
    cfg.sampler.easy = false;
    const auto r = partial_kc(f, cfg);
    if (r.converged) ++converged;
    if (r.lower_bound <= z) ++covered;
  }
  const double frac = static_cast<double>(covered) / runs;
  std::ostringstream d;
  d << "coverage " << frac << " (" << converged << " converged runs)";
  return {frac >= 0.77, d.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> trace_estimates(const std::string& csv) {
  std::vector<std::string> out;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string cell;
    for (int i = 0; i < 3 && std::getline(row, cell, ','); ++i) {
    }
    out.push_back(cell);
  }
  return out;
}

Outcome determinism_library() {
  const Cnf f = t::random_cnf(1007, t::RandomCnfSpec{60, 2.0, 3, 3, 2});
  RunConfig cfg;
  cfg.seed = 5;
  cfg.max_calls = 30;
  const auto a = partial_kc(f, cfg);
  const auto b = partial_kc(f, cfg);
  REQUIRE(a.estimate == b.estimate && a.n_calls == b.n_calls && a.lower_bound == b.lower_bound, "results differ");
  REQUIRE(a.trace.size() == b.trace.size(), "trace lengths differ");
  for (std::size_t i = 0; i < a.trace.size(); ++i) REQUIRE(a.trace[i].estimate == b.trace[i].estimate, "trace differs");
  return {true, "library"};
}

Outcome determinism_cli(const std::string& amc, const std::string& work) {
  const Cnf f = t::random_cnf(1008, t::RandomCnfSpec{60, 2.0, 3, 3, 2});
  const std::string cnf = work + "/determinism.cnf";
  {
    std::ofstream out(cnf);
    write_dimacs(out, f);
  }
  std::string json[2], trace[2];
  for (int k = 0; k < 2; ++k) {
    const std::string tr = work + "/determinism" + std::to_string(k) + ".csv";
    const std::string js = work + "/determinism" + std::to_string(k) + ".json";
    const std::string cmd = "\"" + amc + "\" \"" + cnf + "\" --seed 9 --max-calls 25 --json --trace \"" + tr +
                            "\" > \"" + js + "\"";
    const int rc = std::system(cmd.c_str());
    REQUIRE(rc == 0, "cli exited with " + std::to_string(rc));
    auto j = nlohmann::ordered_json::parse(slurp(js));
    j.erase("elapsed_s");
    json[k] = j.dump();
    trace[k] = slurp(tr);
  }
  REQUIRE(json[0] == json[1], "json differs");
  const auto ta = trace_estimates(trace[0]);
  REQUIRE(!ta.empty() && ta == trace_estimates(trace[1]), "trace estimates differ");
  return {true, json[0]};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string amc = argc > 1 ? argv[1] : "";
  const std::string work = argc > 2 ? argv[2] : ".";

  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"figure-2b-estimate", figure2b},
      {"example-2-pipeline", example2},
      {"oracle-equivalence", oracle_equivalence},
      {"bounds-sandwich", sandwich},
      {"unbiased-single-call", [] { return unbiased(false); }},
      {"unbiased-with-restarts", [] { return unbiased(true); }},
      {"convergence-exact", convergence},
      {"part-whole", part_whole},
      {"markov-coverage", markov},
      {"determinism",
       [&] {
         Outcome o = determinism_library();
         if (!o.ok || amc.empty()) return o;
         Outcome c = determinism_cli(amc, work);
         c.detail = "library and cli: " + c.detail;
         return c;
       }},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %s (%.2fs) %s\n", o.ok ? "PASS" : "FAIL", c.name, secs, o.detail.c_str());
    std::fflush(stdout);
    if (!o.ok) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
