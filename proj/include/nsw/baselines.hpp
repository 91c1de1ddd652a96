#pragma once

#include <cstdint>

#include "nsw/core.hpp"
#include "nsw/ptas.hpp"

namespace nsw {

struct OracleResult {
  Allocation allocation;
  WelfareValue opt_value;  // always carries the exact product
  std::uint64_t explored = 0;
};

// Assignments the oracle is willing to enumerate (agents^goods).
inline constexpr std::uint64_t kOracleMaxAssignments = 10'000'000;

// Exhaustive optimum. Goods are assigned in index order, each to an agent
// already in use or to the first unused one, so relabelled duplicates are
// skipped. Exact product comparison; ties keep the lexicographically first
// assignment vector. Throws CapacityError above kOracleMaxAssignments.
OracleResult brute_force_opt(const Instance& inst);

// Goods in decreasing utility (ties by index), each to an agent with the
// smallest current valuation (ties by index).
SolveReport greedy(const Instance& inst);

SolveReport exact_report(const Instance& inst);

// Envy-free up to one good under identical additive valuations: for every
// ordered pair (i, k) with a nonempty bundle k,
// v(bundle i) >= v(bundle k) - max good in bundle k.
bool check_ef1(const Instance& inst, const Allocation& alloc);

}  // namespace nsw
