#pragma once

#include <optional>
#include <vector>

#include "nsw/core.hpp"

namespace nsw {

struct PreprocessResult {
  // Goods stripped, in removal order. Removed agents take the lowest agent
  // indices: agent r receives removed_goods[r] and residual agent i becomes
  // agent k + i.
  std::vector<GoodIndex> removed_goods;
  // Original index of each residual good, in order.
  std::vector<GoodIndex> residual_goods;
  // The residual instance; nullopt when every agent was removed.
  std::optional<Instance> residual;
  int original_agents = 0;
  std::size_t original_goods = 0;

  std::size_t removed_agents() const { return removed_goods.size(); }
  int residual_agents() const { return original_agents - static_cast<int>(removed_goods.size()); }
};

// Repeatedly strips a good whose utility is at least the mean of the current
// residual instance, paired with one agent. On exit the residual (if any)
// satisfies vmax < mean. Among qualifying goods the largest is taken, ties by
// smallest index. Requires goods >= agents.
PreprocessResult preprocess(const Instance& inst);

// Each removed agent gets its paired good as a singleton; residual agents
// keep their bundles (residual indices mapped back to original ones).
Allocation recombine(const Instance& inst, const PreprocessResult& pre, const std::optional<Allocation>& residual_alloc);

}  // namespace nsw
