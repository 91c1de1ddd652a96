#include "nsw/load_balance.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "nsw/errors.hpp"

namespace nsw {

Utility LoadBalanceTask::vmax() const {
  return jobs.empty() ? 0 : *std::max_element(jobs.begin(), jobs.end());
}

Utility LoadBalanceTask::total() const {
  Utility t = 0;
  for (Utility v : jobs) t += v;
  return t;
}

std::size_t LoadBalanceTask::machine_types() const {
  std::vector<TargetInterval> seen;
  for (const auto& m : machines) {
    if (std::find(seen.begin(), seen.end(), m) == seen.end()) seen.push_back(m);
  }
  return seen.size();
}

void LoadBalanceTask::validate() const {
  if (epsilon <= 0) throw InvalidInput("epsilon must be positive");
  if (machines.empty()) throw InvalidInput("task needs at least one machine");
  Utility sum = 0;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    if (jobs[j] <= 0) throw InvalidInput("job " + std::to_string(j + 1) + " has nonpositive size");
    if (jobs[j] > (Utility{1} << 62) - sum) throw CapacityError("total job size exceeds 2^62");
    sum += jobs[j];
  }
  for (std::size_t k = 0; k < machines.size(); ++k) {
    if (machines[k].lo > machines[k].hi) {
      throw InvalidInput("machine " + std::to_string(k + 1) + " has lo > hi");
    }
  }
}

LbBackend parse_backend(std::string_view name) {
  if (name == "exact") return LbBackend::Exact;
  if (name == "relaxed") return LbBackend::Relaxed;
  if (name == "auto" || name == "automatic") return LbBackend::Automatic;
  throw InvalidInput("unknown load-balancing backend '" + std::string(name) + "'");
}

std::string_view backend_name(LbBackend backend) {
  switch (backend) {
    case LbBackend::Exact:
      return "exact";
    case LbBackend::Relaxed:
      return "relaxed";
    case LbBackend::Automatic:
      break;
  }
  return "auto";
}

LoadBalanceOutcome solve(const LoadBalanceTask& task, LbBackend backend) {
  switch (backend) {
    case LbBackend::Exact:
      return solve_exact(task);
    case LbBackend::Relaxed:
      return solve_relaxed(task);
    case LbBackend::Automatic:
      break;
  }
  return task.jobs.size() <= kAutoExactMaxJobs ? solve_exact(task) : solve_relaxed(task);
}

namespace {

// Loads are integers in [0, total], so integer bounds clamped to
// [-1, total + 1] decide membership exactly.
struct Bounds {
  std::vector<std::int64_t> lo;
  std::vector<std::int64_t> hi;
};

bool enumerate(const LoadBalanceTask& task, const Bounds& b, std::size_t job, std::vector<std::int64_t>& loads,
               std::int64_t remaining) {
  std::int64_t missing = 0;
  for (std::size_t k = 0; k < loads.size(); ++k) {
    if (loads[k] < b.lo[k]) missing += b.lo[k] - loads[k];
  }
  if (missing > remaining) return false;
  if (job == task.jobs.size()) {
    // An untouched machine is never checked against its upper end on the way.
    for (std::size_t k = 0; k < loads.size(); ++k) {
      if (loads[k] > b.hi[k]) return false;
    }
    return true;
  }
  const Utility v = task.jobs[job];
  for (std::size_t k = 0; k < loads.size(); ++k) {
    if (loads[k] + v > b.hi[k]) continue;
    loads[k] += v;
    const bool ok = enumerate(task, b, job + 1, loads, remaining - v);
    loads[k] -= v;
    if (ok) return true;
  }
  return false;
}

}  // namespace

std::optional<bool> brute_force_feasible(const LoadBalanceTask& task) {
  if (task.jobs.size() > kBruteForceMaxJobs) return std::nullopt;
  const BigInt lower = -1;
  const BigInt upper = BigInt(task.total()) + 1;
  auto clamp = [&](const BigInt& x) { return to_int64(std::clamp(x, lower, upper)); };
  Bounds b;
  for (const auto& m : task.machines) {
    b.lo.push_back(clamp(ceil_of(m.lo)));
    b.hi.push_back(clamp(floor_of(m.hi)));
  }
  std::vector<std::int64_t> loads(task.machines.size(), 0);
  return enumerate(task, b, 0, loads, task.total());
}

namespace {

bool is_partition(const LoadBalanceTask& task, const LbAssignment& a) {
  if (a.machine_jobs.size() != task.machines.size() || a.loads.size() != task.machines.size()) return false;
  std::vector<char> seen(task.jobs.size(), 0);
  for (std::size_t k = 0; k < a.machine_jobs.size(); ++k) {
    Utility load = 0;
    for (std::size_t j : a.machine_jobs[k]) {
      if (j >= task.jobs.size() || seen[j]) return false;
      seen[j] = 1;
      load += task.jobs[j];
    }
    if (load != a.loads[k]) return false;
  }
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

bool within(const LoadBalanceTask& task, const LbAssignment& a, const Rational& slack) {
  for (std::size_t k = 0; k < task.machines.size(); ++k) {
    const Rational load(a.loads[k]);
    if (load < task.machines[k].lo - slack || load > task.machines[k].hi + slack) return false;
  }
  return true;
}

}  // namespace

bool within_exact_intervals(const LoadBalanceTask& task, const LbAssignment& assignment) {
  return is_partition(task, assignment) && within(task, assignment, Rational(0));
}

bool verify_outcome(const LoadBalanceTask& task, const LoadBalanceOutcome& outcome) {
  if (outcome.assignment) {
    return is_partition(task, *outcome.assignment) && within(task, *outcome.assignment, task.slack());
  }
  const auto feasible = brute_force_feasible(task);
  return feasible.has_value() && !*feasible;
}

}  // namespace nsw
