#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "amc/cnf.hpp"
#include "amc/count.hpp"
#include "amc/sampler.hpp"

namespace amc {

struct RunConfig {
  double timeout = 60.0;
  std::uint64_t seed = 0;
  SamplerConfig sampler;
  /// Calls between trace rows; 0 disables the trace.
  std::size_t trace_interval = 1;
  double delta = 0.2;
  /// Stops after this many calls even before the deadline.
  std::optional<std::uint64_t> max_calls;
};

struct TracePoint {
  double elapsed = 0;
  std::uint64_t n_calls = 0;
  Count estimate, lower, upper;
  bool converged = false;
};

/// One restart segment: calls made on one diagram and its final estimate.
struct Segment {
  std::uint64_t calls = 0;
  Count estimate;
};

struct RunResult {
  Count estimate;
  bool converged = false;
  std::uint64_t n_calls = 0;
  std::uint64_t n_restarts = 0;
  std::vector<Segment> ledger;
  Count lower_bound;
  /// Best deterministic bounds seen over all diagrams.
  Count lower, upper;
  double elapsed = 0;
  std::vector<TracePoint> trace;
};

/// The anytime loop: repeated MicroKC calls on one growing diagram until
/// the root has no Unknown leaves, the deadline passes or max_calls is
/// reached.  The diagram is dropped when its size exceeds the node budget
/// and the estimates of all diagrams are averaged by call count.
RunResult partial_kc(const Cnf& cnf, const RunConfig& cfg);

/// delta * estimate.
Count markov_lower_bound(const Count& estimate, double delta);

/// Sum of N_i * Z_i over N for a ledger.
Count ledger_average(std::span<const Segment> ledger);

/// Final estimates of independent runs, one per seed, in seed order.
/// Runs in parallel when built with OpenMP.
std::vector<Count> estimate_batch(const Cnf& cnf, const RunConfig& cfg, std::span<const std::uint64_t> seeds);
std::vector<Count> estimate_batch_serial(const Cnf& cnf, const RunConfig& cfg, std::span<const std::uint64_t> seeds);

}  // namespace amc
