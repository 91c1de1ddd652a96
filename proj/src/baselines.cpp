#include "nsw/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nsw/errors.hpp"

namespace nsw {

namespace {

class Exhaustive {
 public:
  explicit Exhaustive(const Instance& inst)
      : inst_(inst), owner_(inst.goods(), 0), loads_(inst.agents(), 0) {
    // Products below 2^120 are formed in 128-bit arithmetic.
    narrow_ = static_cast<double>(inst.agents()) * std::log2(static_cast<double>(inst.total()) + 1.0) < 120.0;
  }

  void run() { descend(0, 0); }

  std::vector<int> best_owner;
  BigInt best_product = -1;
  std::uint64_t explored = 0;

 private:
  void descend(std::size_t good, int used) {
    if (good == inst_.goods()) {
      ++explored;
      if (narrow_) {
        __int128 p = 1;
        for (Utility l : loads_) p *= l;
        if (p > best_narrow_) {
          best_narrow_ = p;
          best_owner = owner_;
        }
        return;
      }
      BigInt p = 1;
      for (Utility l : loads_) p *= l;
      if (p > best_product) {
        best_product = std::move(p);
        best_owner = owner_;
      }
      return;
    }
    const int limit = std::min(used + 1, inst_.agents());
    for (int a = 0; a < limit; ++a) {
      owner_[good] = a;
      loads_[a] += inst_.utility(good);
      descend(good + 1, std::max(used, a + 1));
      loads_[a] -= inst_.utility(good);
    }
  }

  const Instance& inst_;
  bool narrow_ = false;
  __int128 best_narrow_ = -1;
  std::vector<int> owner_;
  std::vector<Utility> loads_;
};

}  // namespace

OracleResult brute_force_opt(const Instance& inst) {
  BigInt space = 1;
  for (std::size_t j = 0; j < inst.goods(); ++j) {
    space *= inst.agents();
    if (space > kOracleMaxAssignments) {
      throw CapacityError("brute force would enumerate " + std::to_string(inst.agents()) + "^" +
                          std::to_string(inst.goods()) + " assignments (limit " +
                          std::to_string(kOracleMaxAssignments) + ")");
    }
  }
  Exhaustive search(inst);
  search.run();
  OracleResult out;
  out.allocation = Allocation::from_assignment(inst, search.best_owner);
  out.opt_value = nash_welfare(inst, out.allocation);
  if (!out.opt_value.exact_product) {
    BigInt p = 1;
    for (Utility v : out.allocation.valuations()) p *= v;
    out.opt_value.exact_product = std::move(p);
  }
  out.explored = search.explored;
  return out;
}

SolveReport greedy(const Instance& inst) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::size_t> order(inst.goods());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return inst.utility(a) > inst.utility(b); });
  std::vector<Utility> load(inst.agents(), 0);
  std::vector<int> owner(inst.goods(), 0);
  for (std::size_t j : order) {
    const auto it = std::min_element(load.begin(), load.end());
    const int a = static_cast<int>(it - load.begin());
    owner[j] = a;
    load[a] += inst.utility(j);
  }
  SolveReport report;
  report.algorithm = "greedy";
  report.allocation = Allocation::from_assignment(inst, owner);
  report.welfare = nash_welfare(inst, report.allocation);
  report.wall_time = std::chrono::steady_clock::now() - start;
  return report;
}

SolveReport exact_report(const Instance& inst) {
  const auto start = std::chrono::steady_clock::now();
  OracleResult r = brute_force_opt(inst);
  SolveReport report;
  report.algorithm = "exact";
  report.allocation = std::move(r.allocation);
  report.welfare = std::move(r.opt_value);
  report.wall_time = std::chrono::steady_clock::now() - start;
  return report;
}

bool check_ef1(const Instance& inst, const Allocation& alloc) {
  (void)nash_welfare(inst, alloc);  // shape check
  const auto vals = alloc.valuations();
  for (std::size_t k = 0; k < alloc.agents(); ++k) {
    if (alloc.bundle(k).empty()) continue;
    Utility top = 0;
    for (GoodIndex j : alloc.bundle(k)) top = std::max(top, inst.utility(j));
    for (std::size_t i = 0; i < alloc.agents(); ++i) {
      if (i != k && vals[i] < vals[k] - top) return false;
    }
  }
  return true;
}

}  // namespace nsw
