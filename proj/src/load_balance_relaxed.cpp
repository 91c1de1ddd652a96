// Relaxed target load balancing.
//
// With slack d = eps * vmax: jobs above d/2 are big, the rest small. A machine
// with upper target u holds at most C_k = ceil(2u/d) - 1 big jobs in any
// exact solution, so rounding big jobs down to multiples of g = d / (4C),
// C = max C_k, costs less than d/4 per machine. A search over machines decides
// how many big jobs of each rounded size each machine takes, together with a
// small-job volume in units of q = d/4. Small jobs are then poured greedily
// toward the chosen volumes, which misses each target by at most d/2.
//
// Every exact solution induces a feasible search state, so Infeasible is only
// reported for exactly infeasible tasks; every state the search accepts ends
// within d of each interval once the small jobs are poured.
//
// The search is exponential in the number of distinct rounded sizes, so a
// greedy pass with local search runs first and the search carries a node
// budget; exhausting it raises CapacityError rather than guessing a verdict.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
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

constexpr std::size_t kMemoLimit = 1u << 21;
constexpr std::uint64_t kNodeBudget = 20'000'000;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

// All quantities below are in units of g.
struct MachineLimits {
  std::int64_t max_big = 0;  // C_k
  std::int64_t upper = 0;    // floor(u / g)
  std::int64_t lower = 0;    // ceil(l / g) - 2C
};

struct Choice {
  std::vector<std::int64_t> take;  // big jobs per size class
  std::int64_t volume = 0;         // small volume in units of q
};

class RoundedSearch {
 public:
  RoundedSearch(std::vector<std::int64_t> class_size, std::vector<std::int64_t> class_count,
                std::vector<MachineLimits> machines, std::int64_t unit, std::int64_t volume_lo,
                std::int64_t volume_hi)
      : size_(std::move(class_size)),
        count_(std::move(class_count)),
        machines_(std::move(machines)),
        unit_(unit),
        volume_lo_(volume_lo),
        volume_hi_(volume_hi) {
    suffix_upper_.assign(machines_.size() + 1, 0);
    suffix_lower_.assign(machines_.size() + 1, 0);
    for (std::size_t k = machines_.size(); k-- > 0;) {
      suffix_upper_[k] = suffix_upper_[k + 1] + machines_[k].upper;
      suffix_lower_[k] = suffix_lower_[k + 1] + machines_[k].lower;
    }
    choices_.resize(machines_.size());
  }

  bool run() { return place(0, count_, 0); }
  const std::vector<Choice>& choices() const { return choices_; }

 private:
  bool place(std::size_t k, std::vector<std::int64_t>& remaining, std::int64_t volume) {
    if (++nodes_ > kNodeBudget) {
      throw CapacityError("relaxed load balancing exceeded its search budget (" + std::to_string(size_.size()) +
                          " rounded job sizes)");
    }
    std::int64_t rounded_left = 0;
    for (std::size_t t = 0; t < size_.size(); ++t) rounded_left += remaining[t] * size_[t];
    if (k == machines_.size()) {
      return rounded_left == 0 && volume >= volume_lo_ && volume <= volume_hi_;
    }
    if (rounded_left > suffix_upper_[k]) return false;
    if (rounded_left + (volume_hi_ - volume) * unit_ < suffix_lower_[k]) return false;

    std::vector<std::int64_t> key;
    key.reserve(remaining.size() + 2);
    key.push_back(static_cast<std::int64_t>(k));
    key.push_back(volume);
    key.insert(key.end(), remaining.begin(), remaining.end());
    if (failed_.contains(key)) return false;

    std::vector<std::int64_t> take(size_.size(), 0);
    const bool ok = pick(k, 0, take, 0, 0, remaining, volume);
    if (!ok && failed_.size() < kMemoLimit) failed_.insert(std::move(key));
    return ok;
  }

  // Chooses how many jobs of class t and later go to machine k.
  bool pick(std::size_t k, std::size_t t, std::vector<std::int64_t>& take, std::int64_t taken, std::int64_t rounded,
            std::vector<std::int64_t>& remaining, std::int64_t volume) {
    const MachineLimits& m = machines_[k];
    const bool last = k + 1 == machines_.size();
    if (t == size_.size()) {
      std::int64_t w_lo = std::max<std::int64_t>(0, ceil_div(m.lower - rounded, unit_));
      std::int64_t w_hi = std::min(floor_div(m.upper - rounded, unit_), volume_hi_ - volume);
      if (last) w_lo = std::max(w_lo, volume_lo_ - volume);
      for (std::int64_t w = w_lo; w <= w_hi; ++w) {
        for (std::size_t c = 0; c < size_.size(); ++c) remaining[c] -= take[c];
        const bool ok = place(k + 1, remaining, volume + w);
        for (std::size_t c = 0; c < size_.size(); ++c) remaining[c] += take[c];
        if (ok) {
          choices_[k] = {take, w};
          return true;
        }
      }
      return false;
    }
    // The last machine takes everything that is left.
    std::int64_t most = std::min(remaining[t], m.max_big - taken);
    std::int64_t least = 0;
    if (last) {
      if (remaining[t] > m.max_big - taken) return false;
      least = most = remaining[t];
    }
    for (std::int64_t x = most; x >= least; --x) {
      const std::int64_t r = rounded + x * size_[t];
      if (r > m.upper) continue;
      take[t] = x;
      if (pick(k, t + 1, take, taken + x, r, remaining, volume)) return true;
    }
    take[t] = 0;
    return false;
  }

  std::vector<std::int64_t> size_;
  std::vector<std::int64_t> count_;
  std::vector<MachineLimits> machines_;
  std::int64_t unit_;
  std::int64_t volume_lo_;
  std::int64_t volume_hi_;
  std::vector<std::int64_t> suffix_upper_;
  std::vector<std::int64_t> suffix_lower_;
  std::vector<Choice> choices_;
  std::unordered_set<std::vector<std::int64_t>, KeyHash> failed_;
  std::uint64_t nodes_ = 0;
};

// Largest jobs first, each to the machine furthest below the middle of its
// interval, then single moves and pairwise swaps while they shrink the total
// distance to the intervals. Returns an assignment only if every load lies
// within the slack window.
std::optional<LbAssignment> local_search(const LoadBalanceTask& task) {
  const std::size_t n = task.machines.size();
  const std::size_t m = task.jobs.size();
  std::vector<long double> lo(n), hi(n), mid(n);
  for (std::size_t k = 0; k < n; ++k) {
    lo[k] = task.machines[k].lo.convert_to<long double>();
    hi[k] = task.machines[k].hi.convert_to<long double>();
    mid[k] = (lo[k] + hi[k]) / 2;
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return task.jobs[a] > task.jobs[b]; });
  std::vector<std::size_t> owner(m);
  std::vector<long double> load(n, 0);
  for (std::size_t j : order) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < n; ++k) {
      if (mid[k] - load[k] > mid[best] - load[best]) best = k;
    }
    owner[j] = best;
    load[best] += static_cast<long double>(task.jobs[j]);
  }
  auto dist = [&](std::size_t k, long double x) {
    return x < lo[k] ? lo[k] - x : (x > hi[k] ? x - hi[k] : 0.0L);
  };
  for (int round = 0; round < 64; ++round) {
    bool improved = false;
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t a = owner[j];
      const auto v = static_cast<long double>(task.jobs[j]);
      for (std::size_t b = 0; b < n; ++b) {
        if (b == a) continue;
        const long double before = dist(a, load[a]) + dist(b, load[b]);
        const long double after = dist(a, load[a] - v) + dist(b, load[b] + v);
        if (after < before) {
          load[a] -= v;
          load[b] += v;
          owner[j] = b;
          improved = true;
          break;
        }
      }
    }
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        const std::size_t a = owner[i];
        const std::size_t b = owner[j];
        if (a == b || task.jobs[i] == task.jobs[j]) continue;
        const auto delta = static_cast<long double>(task.jobs[j] - task.jobs[i]);
        const long double before = dist(a, load[a]) + dist(b, load[b]);
        const long double after = dist(a, load[a] + delta) + dist(b, load[b] - delta);
        if (after < before) {
          load[a] += delta;
          load[b] -= delta;
          std::swap(owner[i], owner[j]);
          improved = true;
        }
      }
    }
    if (!improved) break;
  }
  LbAssignment out;
  out.machine_jobs.resize(n);
  out.loads.assign(n, 0);
  for (std::size_t j = 0; j < m; ++j) {
    out.machine_jobs[owner[j]].push_back(j);
    out.loads[owner[j]] += task.jobs[j];
  }
  if (!verify_outcome(task, LoadBalanceOutcome{out})) return std::nullopt;
  return out;
}

LbAssignment empty_assignment(std::size_t machines) {
  LbAssignment a;
  a.machine_jobs.resize(machines);
  a.loads.assign(machines, 0);
  return a;
}

}  // namespace

LoadBalanceOutcome solve_relaxed(const LoadBalanceTask& task, bool quick_pass) {
  task.validate();
  const std::size_t n = task.machines.size();
  if (task.jobs.empty()) {
    for (const auto& m : task.machines) {
      if (m.lo > 0 || m.hi < 0) return LoadBalanceOutcome::rejected();
    }
    return {empty_assignment(n)};
  }
  if (n == 0) return LoadBalanceOutcome::rejected();

  // Necessary conditions for an exact solution.
  const Rational total(task.total());
  Rational lo_sum = 0;
  Rational hi_sum = 0;
  for (const auto& m : task.machines) {
    if (m.hi < 0) return LoadBalanceOutcome::rejected();
    lo_sum += m.lo;
    hi_sum += m.hi;
  }
  if (total < lo_sum || total > hi_sum) return LoadBalanceOutcome::rejected();
  if (quick_pass) {
    if (auto quick = local_search(task)) return {std::move(*quick)};
  }

  const Rational slack = task.slack();
  const Rational half = slack / 2;

  std::vector<std::int64_t> max_big(n);
  std::int64_t cap = 1;
  for (std::size_t k = 0; k < n; ++k) {
    max_big[k] = std::max<std::int64_t>(0, to_int64(ceil_of(task.machines[k].hi / half)) - 1);
    cap = std::max(cap, max_big[k]);
  }
  const Rational grain = half / (2 * cap);  // g
  const std::int64_t unit = cap;             // q = cap * g

  std::map<std::int64_t, std::vector<std::size_t>, std::greater<>> classes;
  std::vector<std::size_t> small;
  Rational small_volume = 0;
  for (std::size_t j = 0; j < task.jobs.size(); ++j) {
    const Rational v(task.jobs[j]);
    if (v > half) {
      classes[to_int64(floor_of(v / grain))].push_back(j);
    } else {
      small.push_back(j);
      small_volume += v;
    }
  }

  std::vector<MachineLimits> limits(n);
  for (std::size_t k = 0; k < n; ++k) {
    limits[k].max_big = max_big[k];
    limits[k].upper = to_int64(floor_of(task.machines[k].hi / grain));
    limits[k].lower = to_int64(ceil_of(task.machines[k].lo / grain)) - 2 * cap;
  }
  const Rational q = grain * unit;
  const std::int64_t volume_hi = to_int64(floor_of(small_volume / q));
  const std::int64_t volume_lo = std::max<std::int64_t>(0, volume_hi - static_cast<std::int64_t>(n) + 1);

  std::vector<std::int64_t> class_size;
  std::vector<std::int64_t> class_count;
  std::vector<std::vector<std::size_t>> class_jobs;
  for (auto& [size, members] : classes) {
    class_size.push_back(size);
    class_count.push_back(static_cast<std::int64_t>(members.size()));
    class_jobs.push_back(members);
  }

  RoundedSearch search(class_size, class_count, limits, unit, volume_lo, volume_hi);
  if (!search.run()) return LoadBalanceOutcome::rejected();

  LbAssignment out = empty_assignment(n);
  std::vector<std::size_t> next(class_jobs.size(), 0);
  std::vector<Rational> target(n);
  Rational planned = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const Choice& c = search.choices()[k];
    for (std::size_t t = 0; t < c.take.size(); ++t) {
      for (std::int64_t i = 0; i < c.take[t]; ++i) {
        const std::size_t j = class_jobs[t][next[t]++];
        out.machine_jobs[k].push_back(j);
        out.loads[k] += task.jobs[j];
      }
    }
    target[k] = q * c.volume;
    planned += target[k];
  }
  // Spread the unplanned small volume, at most q per machine.
  Rational spare = small_volume - planned;
  for (std::size_t k = 0; k < n && spare > 0; ++k) {
    const Rational extra = std::min(spare, q);
    target[k] += extra;
    spare -= extra;
  }

  std::stable_sort(small.begin(), small.end(), [&](std::size_t a, std::size_t b) { return task.jobs[a] > task.jobs[b]; });
  std::vector<Rational> poured(n, Rational(0));
  for (std::size_t j : small) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < n; ++k) {
      if (target[k] - poured[k] > target[best] - poured[best]) best = k;
    }
    poured[best] += task.jobs[j];
    out.machine_jobs[best].push_back(j);
    out.loads[best] += task.jobs[j];
  }
  for (auto& jobs : out.machine_jobs) std::sort(jobs.begin(), jobs.end());

  if (!verify_outcome(task, LoadBalanceOutcome{out})) {
    throw std::logic_error("relaxed load balancing produced loads outside the slack window");
  }
  return {std::move(out)};
}

}  // namespace nsw
