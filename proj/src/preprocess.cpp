#include "nsw/preprocess.hpp"

#include "nsw/errors.hpp"

namespace nsw {

PreprocessResult preprocess(const Instance& inst) {
  if (inst.goods() < static_cast<std::size_t>(inst.agents())) {
    throw PreconditionError("preprocess needs at least as many goods as agents");
  }
  PreprocessResult out;
  out.original_agents = inst.agents();
  out.original_goods = inst.goods();

  std::vector<char> removed(inst.goods(), 0);
  BigInt remaining_total = inst.total();
  int remaining_agents = inst.agents();

  while (remaining_agents > 0) {
    // v_j >= total/agents  <=>  agents * v_j >= total
    std::optional<GoodIndex> pick;
    for (GoodIndex j = 0; j < inst.goods(); ++j) {
      if (removed[j]) continue;
      if (BigInt(inst.utility(j)) * remaining_agents < remaining_total) continue;
      if (!pick || inst.utility(j) > inst.utility(*pick)) pick = j;
    }
    if (!pick) break;
    removed[*pick] = 1;
    out.removed_goods.push_back(*pick);
    remaining_total -= inst.utility(*pick);
    --remaining_agents;
  }

  std::vector<Utility> rest;
  for (GoodIndex j = 0; j < inst.goods(); ++j) {
    if (removed[j]) continue;
    out.residual_goods.push_back(j);
    rest.push_back(inst.utility(j));
  }
  if (remaining_agents > 0) {
    out.residual.emplace(remaining_agents, std::move(rest));
  }
  return out;
}

Allocation recombine(const Instance& inst, const PreprocessResult& pre, const std::optional<Allocation>& residual_alloc) {
  if (inst.agents() != pre.original_agents || inst.goods() != pre.original_goods) {
    throw InvalidInput("preprocess result does not belong to this instance");
  }
  const int kept_agents = pre.residual_agents();
  std::vector<std::vector<GoodIndex>> bundles(inst.agents());
  if (kept_agents > 0) {
    if (!residual_alloc || residual_alloc->agents() != static_cast<std::size_t>(kept_agents) ||
        residual_alloc->goods() != pre.residual_goods.size()) {
      throw InvalidInput("residual allocation does not match the residual instance");
    }
    const std::size_t k = pre.removed_agents();
    for (int i = 0; i < kept_agents; ++i) {
      for (GoodIndex j : residual_alloc->bundle(i)) bundles[k + i].push_back(pre.residual_goods[j]);
    }
  } else if (residual_alloc && residual_alloc->agents() != 0) {
    throw InvalidInput("residual allocation given for an empty residual instance");
  }
  for (std::size_t r = 0; r < pre.removed_goods.size(); ++r) {
    bundles[r].push_back(pre.removed_goods[r]);
  }
  return Allocation::from_bundles(inst, std::move(bundles));
}

}  // namespace nsw
