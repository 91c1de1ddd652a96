#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nsw/core.hpp"
#include "nsw/load_balance.hpp"

namespace nsw {

// Guessed per-agent valuation levels mu - vmax + i * eps * vmax,
// i = 0 .. 2/eps - 1, for an instance with vmax < mu.
struct LevelGrid {
  Rational eps;
  Rational mu;
  Rational vmax;
  std::vector<Rational> levels;
  // levels[i] * scale, with scale = agents / eps making every level integral.
  std::vector<std::int64_t> scaled_levels;
  std::int64_t scale = 1;

  std::size_t size() const { return levels.size(); }
  Rational spacing() const { return eps * vmax; }
};

// Requires vmax < mu and 1/eps a positive integer; throws PreconditionError
// otherwise.
LevelGrid build_grid(const Instance& inst, const Rational& eps);

// A multiset of levels for the agents: counts[i] agents sit at level i.
struct Profile {
  std::vector<int> counts;

  int agents() const;
  // Level index per agent, ascending.
  std::vector<std::size_t> agent_levels() const;

  friend bool operator==(const Profile&, const Profile&) = default;
};

Profile profile_of(std::span<const std::size_t> agent_levels, std::size_t grid_size);

// Visits every profile of `agents` agents over `grid_size` levels once, in
// ascending lexicographic order of the count vector. The visitor returns false
// to stop early.
void enumerate_profiles(int agents, std::size_t grid_size, const std::function<bool(const Profile&)>& visit);

// C(agents + grid_size - 1, agents).
BigInt profile_count(int agents, std::size_t grid_size);

// True when the profile's exact-interval task is infeasible on volume alone:
// the lower ends already exceed the total utility, or the upper ends cannot
// reach it.
bool prune_profile(const Profile& profile, const LevelGrid& grid, const Instance& inst);

// Load-balancing task whose machine i (agent i) targets
// [level, level + eps * vmax] for the i-th entry of profile.agent_levels().
LoadBalanceTask profile_task(const Profile& profile, const LevelGrid& grid, const Instance& inst);

// Level index whose window [level, level + spacing] contains `value`; nullopt
// when the value lies outside the grid's span.
std::optional<std::size_t> bracketing_level(const LevelGrid& grid, const Rational& value);

// Largest eps' <= eps with integral 1/eps'.
Rational normalize_eps(const Rational& eps);
// 1 / ceil(max(192, 192 / eps)): the internal accuracy that yields an
// additive error of at most eps * vmax for the full pipeline.
Rational guarantee_eps(const Rational& eps);

enum class EpsMode { Raw, Guarantee };

EpsMode parse_mode(std::string_view name);

struct SolveOptions {
  LbBackend backend = LbBackend::Automatic;
  // Worker threads for profile evaluation; the result does not depend on it.
  int threads = 1;
};

struct SolveReport {
  Allocation allocation;
  WelfareValue welfare;
  std::string algorithm;  // "ptas", "greedy" or "exact"
  std::optional<Rational> eps_user;
  std::optional<Rational> eps_internal;
  std::string mode;
  std::string backend;
  std::uint64_t profiles_enumerated = 0;
  std::uint64_t profiles_pruned = 0;
  std::uint64_t lb_calls = 0;
  std::size_t removed_agents = 0;
  std::chrono::nanoseconds wall_time{0};
  // Set when every profile was rejected and the arbitrary starting
  // allocation was returned; indicates a load-balancing contract bug.
  bool anomaly = false;
  std::vector<std::string> warnings;
};

// Grid search over profiles with one load-balancing call per unpruned
// profile; keeps the best allocation, ties going to the earliest profile.
// Requires vmax < mu; eps is normalized to 1/ceil(1/eps).
SolveReport main_procedure(const Instance& inst, const Rational& eps, const SolveOptions& options = {});

// Full pipeline: zero-welfare short circuit when agents outnumber goods,
// preprocessing, main_procedure on the residual, recombination.
SolveReport max_nash_welfare(const Instance& inst, const Rational& eps_user, EpsMode mode,
                             const SolveOptions& options = {});

}  // namespace nsw
