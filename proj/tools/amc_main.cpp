#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "amc/cnf.hpp"
#include "amc/count.hpp"
#include "amc/driver.hpp"
#include "amc/errors.hpp"
#include "amc/exact.hpp"
#include "json.hpp"

namespace {

constexpr int kExitUnsat = 10;
constexpr int kExitUsage = 2;

enum class Mode { kAnytime, kBounds, kExactEasy };

nlohmann::json log2_json(const amc::Count& c) {
  if (sgn(c) == 0) return nullptr;
  return amc::log2(c);
}

void write_trace(const std::string& path, const amc::RunResult& r) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trace file " + path);
  out << "elapsed_s,n_calls,estimate,lower,upper,converged\n";
  out.precision(6);
  out << std::fixed;
  for (const auto& t : r.trace) {
    out << t.elapsed << ',' << t.n_calls << ',' << amc::to_string(t.estimate) << ',' << amc::to_string(t.lower)
        << ',' << amc::to_string(t.upper) << ',' << (t.converged ? 1 : 0) << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anytime approximate model counter for CNF formulas"};
  std::string input;
  amc::RunConfig cfg;
  std::string trace_path;
  Mode mode = Mode::kAnytime;
  bool json = false;
  std::string heuristic = "score";
  std::uint64_t max_calls = 0;

  app.add_option("input", input, "DIMACS CNF file")->required()->check(CLI::ExistingFile);
  app.add_option("--timeout", cfg.timeout, "Seconds before the estimate is returned")
      ->default_val(60.0)
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "Random seed")->default_val(0);
  app.add_option("--delta", cfg.delta, "Markov lower bound holds with probability 1-delta")
      ->default_val(0.2)
      ->check(CLI::Number)
      ->check(CLI::Validator(
          [](std::string& v) {
            const double d = std::stod(v);
            return d > 0 && d < 1 ? std::string{} : std::string("delta must lie in (0,1)");
          },
          "(0,1)"));
  app.add_option("--node-budget", cfg.sampler.node_budget, "Nodes plus cache entries before a restart")
      ->check(CLI::PositiveNumber);
  app.add_option("--trace", trace_path, "Write an anytime trace CSV to this path");
  app.add_option("--trace-interval", cfg.trace_interval, "Calls between trace rows")->default_val(1);
  std::map<std::string, Mode> modes{
      {"anytime", Mode::kAnytime}, {"bounds", Mode::kBounds}, {"exact-easy", Mode::kExactEasy}};
  app.add_option("--mode", mode, "anytime, bounds or exact-easy")
      ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
  app.add_flag("--json", json, "Print one JSON object");
  app.add_option("--proj-size", cfg.sampler.proj_size, "Neighbours projected when estimating marginals");
  app.add_option("--kernel-ratio", cfg.sampler.kernel.min_binary_ratio, "Binary clause ratio that triggers kernelization")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--var-heuristic", heuristic, "score or min-index")->check(CLI::IsMember({"score", "min-index"}));
  app.add_option("--max-calls", max_calls, "Stop after this many calls")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  cfg.sampler.var_heuristic = heuristic == "min-index" ? amc::VarHeuristic::kMinIndex : amc::VarHeuristic::kScore;
  if (max_calls != 0) cfg.max_calls = max_calls;

  amc::Cnf cnf;
  try {
    cnf = amc::read_dimacs_file(input);
  } catch (const amc::ParseError& e) {
    std::cerr << input << ':' << e.line() << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  }

  amc::RunResult r;
  if (mode == Mode::kExactEasy) {
    const auto t0 = std::chrono::steady_clock::now();
    r.estimate = amc::exact_count(cnf);
    r.converged = true;
    r.lower = r.upper = r.lower_bound = r.estimate;
    r.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  } else {
    try {
      r = amc::partial_kc(cnf, cfg);
    } catch (const amc::ContractViolation& e) {
      std::cerr << e.what() << '\n';
      return kExitUsage;
    }
  }
  if (!trace_path.empty()) {
    try {
      write_trace(trace_path, r);
    } catch (const std::exception& e) {
      std::cerr << e.what() << '\n';
      return kExitUsage;
    }
  }

  if (json) {
    nlohmann::ordered_json j;
    j["estimate"] = amc::to_string(r.estimate);
    j["estimate_log2"] = log2_json(r.estimate);
    j["converged"] = r.converged;
    j["n_calls"] = r.n_calls;
    j["n_restarts"] = r.n_restarts;
    j["lower_bound"] = amc::to_string(r.lower_bound);
    if (mode == Mode::kBounds) {
      j["lower"] = amc::to_string(r.lower);
      j["upper"] = amc::to_string(r.upper);
    }
    j["elapsed_s"] = r.elapsed;
    j["seed"] = cfg.seed;
    std::cout << j.dump() << '\n';
  } else {
    std::cout << "c calls " << r.n_calls << " restarts " << r.n_restarts << " time " << r.elapsed << "s\n";
    if (mode == Mode::kBounds) {
      std::cout << "c lower " << amc::to_string(r.lower) << "\n";
      std::cout << "c upper " << amc::to_string(r.upper) << "\n";
    }
    std::cout << "c lower bound (1-delta) " << amc::to_string(r.lower_bound) << "\n";
    std::cout << (r.converged ? "s exact " : "s approx ") << amc::to_string(r.estimate) << "\n";
    if (sgn(r.estimate) != 0) std::cout << "c log2 " << amc::log2(r.estimate) << "\n";
  }
  return r.converged && sgn(r.estimate) == 0 ? kExitUnsat : 0;
}
