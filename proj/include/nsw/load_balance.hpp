#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "nsw/core.hpp"

namespace nsw {

struct TargetInterval {
  Rational lo;
  Rational hi;

  friend bool operator==(const TargetInterval&, const TargetInterval&) = default;
};

// Target load balancing: put every job on some machine so that each machine
// load lands in its interval, up to a slack of epsilon * (largest job).
struct LoadBalanceTask {
  std::vector<Utility> jobs;
  std::vector<TargetInterval> machines;
  Rational epsilon{1};

  Utility vmax() const;
  Utility total() const;
  Rational slack() const { return epsilon * vmax(); }
  // Number of distinct (lo, hi) pairs.
  std::size_t machine_types() const;
  // Throws InvalidInput on nonpositive jobs, lo > hi, or epsilon <= 0.
  void validate() const;
};

struct LbAssignment {
  // Job indices per machine.
  std::vector<std::vector<std::size_t>> machine_jobs;
  std::vector<Utility> loads;
};

// Either an assignment, or the verdict that no assignment meets the exact
// intervals.
struct LoadBalanceOutcome {
  std::optional<LbAssignment> assignment;

  bool infeasible() const { return !assignment.has_value(); }
  static LoadBalanceOutcome rejected() { return {}; }
};

enum class LbBackend { Automatic, Exact, Relaxed };

LbBackend parse_backend(std::string_view name);
std::string_view backend_name(LbBackend backend);

// Largest job count accepted by solve_exact.
inline constexpr std::size_t kExactMaxJobs = 24;
// Automatic backend selection uses the exact solver up to this many jobs.
inline constexpr std::size_t kAutoExactMaxJobs = 18;
// verify_outcome only confirms Infeasible verdicts up to this many jobs.
inline constexpr std::size_t kBruteForceMaxJobs = 15;

// Exact decision: loads inside [lo, hi] or Infeasible. Depth-first over jobs
// in decreasing size with interchangeable-machine pruning, remaining-volume
// bounds and a memo of failed states. Throws CapacityError above
// kExactMaxJobs jobs.
LoadBalanceOutcome solve_exact(const LoadBalanceTask& task);

// Honors the slack contract: Infeasible only when the exact intervals are
// infeasible, and any assignment has every load within slack of its interval.
// quick_pass = false skips the local-search attempt and goes straight to the
// rounded search. Throws CapacityError if the rounded search exceeds its
// node budget.
LoadBalanceOutcome solve_relaxed(const LoadBalanceTask& task, bool quick_pass = true);

LoadBalanceOutcome solve(const LoadBalanceTask& task, LbBackend backend);

// Plain enumeration of every assignment (no memo, no symmetry). nullopt when
// the task has more than kBruteForceMaxJobs jobs.
std::optional<bool> brute_force_feasible(const LoadBalanceTask& task);

// True iff the assignment partitions the jobs with every load inside the
// slack-relaxed interval, or the Infeasible verdict is confirmed by brute
// force.
bool verify_outcome(const LoadBalanceTask& task, const LoadBalanceOutcome& outcome);

// Assignment loads all inside the unrelaxed intervals.
bool within_exact_intervals(const LoadBalanceTask& task, const LbAssignment& assignment);

}  // namespace nsw
