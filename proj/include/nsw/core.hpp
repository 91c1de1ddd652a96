#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nsw/arith.hpp"

namespace nsw {

using Utility = std::int64_t;
using GoodIndex = std::size_t;

// Agents with identical additive valuations over goods with positive
// integer utilities. Immutable after construction.
class Instance {
 public:
  Instance(int agents, std::vector<Utility> utilities);

  int agents() const { return agents_; }
  std::size_t goods() const { return utilities_.size(); }
  std::span<const Utility> utilities() const { return utilities_; }
  Utility utility(GoodIndex j) const { return utilities_[j]; }

  Utility vmax() const { return vmax_; }
  Utility total() const { return total_; }
  // total / agents, exact.
  Rational mean() const;
  // vmax < mean, compared as agents * vmax < total.
  bool vmax_below_mean() const;

  // Same goods, every utility multiplied by `factor`.
  Instance scaled(Utility factor) const;

 private:
  int agents_;
  std::vector<Utility> utilities_;
  Utility vmax_ = 0;
  Utility total_ = 0;
};

// A partition of an instance's goods into one bundle per agent. Bundles are
// kept sorted; valuations are cached bundle sums.
class Allocation {
 public:
  Allocation() = default;

  // Throws InvalidAllocation on a duplicate, missing or out-of-range good,
  // or on a bundle count different from inst.agents().
  static Allocation from_bundles(const Instance& inst, std::vector<std::vector<GoodIndex>> bundles);
  // agent_of_good[j] is the agent receiving good j.
  static Allocation from_assignment(const Instance& inst, std::span<const int> agent_of_good);

  std::size_t agents() const { return bundles_.size(); }
  std::size_t goods() const { return goods_; }
  const std::vector<std::vector<GoodIndex>>& bundles() const { return bundles_; }
  const std::vector<GoodIndex>& bundle(std::size_t agent) const { return bundles_[agent]; }
  std::span<const Utility> valuations() const { return valuations_; }
  bool has_empty_bundle() const;

  // agent index per good.
  std::vector<int> assignment() const;

  friend bool operator==(const Allocation&, const Allocation&) = default;

 private:
  std::vector<std::vector<GoodIndex>> bundles_;
  std::vector<Utility> valuations_;
  std::size_t goods_ = 0;
};

struct WelfareValue {
  // ln of the geometric mean; -inf when some bundle is empty.
  double log_value = 0.0;
  // Product of bundle valuations; present for instances of moderate size.
  std::optional<BigInt> exact_product;
  int agents = 0;

  bool is_zero() const;
  // Geometric mean itself.
  double value() const;
};

// Exact product comparison when both sides carry one (and have the same agent
// count); otherwise log-domain comparison where differences below
// kLogTolerance compare equal.
std::partial_ordering compare(const WelfareValue& a, const WelfareValue& b);

inline constexpr double kLogTolerance = 1e-9;

// Agents above which exact products are not formed.
inline constexpr int kExactProductMaxAgents = 1024;

WelfareValue welfare_of(std::span<const Utility> valuations);

// Geometric mean of bundle valuations. Throws InvalidAllocation if `alloc`
// does not partition the goods of `inst`.
WelfareValue nash_welfare(const Instance& inst, const Allocation& alloc);

// Power mean with exponent q; q == 0 gives the geometric mean. Returns
// nullopt when some bundle is empty and q <= 0.
std::optional<double> generalized_mean(const Instance& inst, const Allocation& alloc, const Rational& q);

struct IngestResult {
  Instance instance{1, {}};
  // Every kept raw utility times `scale` is the stored integer utility.
  Utility scale = 1;
  // Original (0-based) index of each kept good, in order.
  std::vector<GoodIndex> kept;
  // Original indices of zero-utility goods that were dropped.
  std::vector<GoodIndex> dropped;
  std::vector<std::string> warnings;
};

// Scales rational utilities by their least common denominator. Zero
// utilities are dropped with a warning; negative ones are rejected.
IngestResult ingest_instance(std::span<const Rational> raw, int agents);
IngestResult ingest_instance(std::span<const std::string> raw, int agents);

}  // namespace nsw
