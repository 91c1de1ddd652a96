#include <algorithm>
#include <numeric>
#include <unordered_set>

#include <boost/container_hash/hash.hpp>

#include "nsw/errors.hpp"
#include "nsw/load_balance.hpp"

namespace nsw {

namespace {

struct KeyHash {
  std::size_t operator()(const std::vector<std::int64_t>& key) const {
    return boost::hash_range(key.begin(), key.end());
  }
};

// Integer load bounds are enough: every load is an integer.
struct IntegerBounds {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
};

constexpr std::size_t kMemoLimit = 1u << 21;

class ExactSearch {
 public:
  ExactSearch(const LoadBalanceTask& task, std::vector<IntegerBounds> bounds)
      : jobs_(task.jobs), bounds_(std::move(bounds)) {
    order_.resize(jobs_.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) { return jobs_[a] > jobs_[b]; });
    suffix_.assign(jobs_.size() + 1, 0);
    for (std::size_t p = jobs_.size(); p-- > 0;) suffix_[p] = suffix_[p + 1] + jobs_[order_[p]];

    // Machines with equal bounds are interchangeable.
    type_.resize(bounds_.size());
    std::vector<std::pair<std::int64_t, std::int64_t>> seen;
    for (std::size_t k = 0; k < bounds_.size(); ++k) {
      const auto b = std::make_pair(bounds_[k].lo, bounds_[k].hi);
      auto it = std::find(seen.begin(), seen.end(), b);
      type_[k] = static_cast<std::int64_t>(it - seen.begin());
      if (it == seen.end()) seen.push_back(b);
    }
    loads_.assign(bounds_.size(), 0);
    owner_.assign(jobs_.size(), 0);
  }

  bool run() { return descend(0); }

  LbAssignment result() const {
    LbAssignment out;
    out.machine_jobs.resize(bounds_.size());
    out.loads = loads_;
    for (std::size_t j = 0; j < jobs_.size(); ++j) out.machine_jobs[owner_[j]].push_back(j);
    return out;
  }

 private:
  bool volume_ok(std::size_t pos) const {
    std::int64_t need = 0;
    std::int64_t room = 0;
    for (std::size_t k = 0; k < bounds_.size(); ++k) {
      need += std::max<std::int64_t>(0, bounds_[k].lo - loads_[k]);
      room += bounds_[k].hi - loads_[k];
    }
    return need <= suffix_[pos] && suffix_[pos] <= room;
  }

  std::vector<std::int64_t> key(std::size_t pos) const {
    std::vector<std::int64_t> k;
    k.reserve(2 * bounds_.size() + 1);
    std::vector<std::pair<std::int64_t, std::int64_t>> state;
    state.reserve(bounds_.size());
    for (std::size_t m = 0; m < bounds_.size(); ++m) state.emplace_back(type_[m], loads_[m]);
    std::sort(state.begin(), state.end());
    k.push_back(static_cast<std::int64_t>(pos));
    for (auto [t, l] : state) {
      k.push_back(t);
      k.push_back(l);
    }
    return k;
  }

  bool descend(std::size_t pos) {
    if (!volume_ok(pos)) return false;
    if (pos == order_.size()) return true;  // volume_ok with nothing left means every lo is met
    auto memo_key = key(pos);
    if (failed_.contains(memo_key)) return false;

    const std::size_t job = order_[pos];
    const std::int64_t size = jobs_[job];
    std::vector<std::pair<std::int64_t, std::int64_t>> tried;
    for (std::size_t k = 0; k < bounds_.size(); ++k) {
      if (loads_[k] + size > bounds_[k].hi) continue;
      const auto sig = std::make_pair(type_[k], loads_[k]);
      if (std::find(tried.begin(), tried.end(), sig) != tried.end()) continue;
      tried.push_back(sig);
      loads_[k] += size;
      owner_[job] = k;
      if (descend(pos + 1)) return true;
      loads_[k] -= size;
    }
    if (failed_.size() < kMemoLimit) failed_.insert(std::move(memo_key));
    return false;
  }

  const std::vector<Utility>& jobs_;
  std::vector<IntegerBounds> bounds_;
  std::vector<std::size_t> order_;
  std::vector<std::int64_t> suffix_;
  std::vector<std::int64_t> type_;
  std::vector<std::int64_t> loads_;
  std::vector<std::size_t> owner_;
  std::unordered_set<std::vector<std::int64_t>, KeyHash> failed_;
};

}  // namespace

LoadBalanceOutcome solve_exact(const LoadBalanceTask& task) {
  task.validate();
  if (task.jobs.size() > kExactMaxJobs) {
    throw CapacityError("exact load balancing is limited to " + std::to_string(kExactMaxJobs) + " jobs (task has " +
                        std::to_string(task.jobs.size()) + "); use the relaxed backend");
  }
  const std::int64_t total = task.total();
  std::vector<IntegerBounds> bounds;
  bounds.reserve(task.machines.size());
  for (const auto& m : task.machines) {
    // Clamp to [0, total]: loads never leave that range.
    const BigInt lo = std::max<BigInt>(ceil_of(m.lo), 0);
    const BigInt hi = std::min<BigInt>(floor_of(m.hi), total);
    if (lo > hi) return LoadBalanceOutcome::rejected();
    bounds.push_back({to_int64(lo), to_int64(hi)});
  }
  if (task.machines.empty()) {
    if (task.jobs.empty()) return {LbAssignment{}};
    return LoadBalanceOutcome::rejected();
  }
  ExactSearch search(task, std::move(bounds));
  if (!search.run()) return LoadBalanceOutcome::rejected();
  return {search.result()};
}

}  // namespace nsw
