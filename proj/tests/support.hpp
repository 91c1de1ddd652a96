#pragma once

// Reference computations used as ground truth by the tests. They share no
// code with the library beyond the Instance and task containers.

#include <cstdint>
#include <algorithm>
#include <random>
#include <stdexcept>
#include <vector>

#include "nsw/core.hpp"
#include "nsw/load_balance.hpp"

namespace testing_support {

using nsw::BigInt;
using nsw::Instance;
using nsw::Rational;
using nsw::Utility;

// Plain enumeration of all agents^goods assignments.
struct Optimum {
  BigInt product = 0;
  // Every assignment attaining the product, as bundle valuations.
  std::vector<std::vector<Utility>> valuations;
  std::vector<int> first_assignment;
};

// Products are formed in 128 bits, so the instance must keep
// total^agents below 2^127 (checked).
inline Optimum reference_optimum(const Instance& inst) {
  const int n = inst.agents();
  const std::size_t m = inst.goods();
  BigInt bound = 1;
  for (int i = 0; i < n; ++i) bound *= inst.total() + 1;
  if (bound >= (BigInt(1) << 126)) throw std::out_of_range("reference_optimum: products exceed 128 bits");
  std::vector<int> who(m, 0);
  std::vector<Utility> val(n, 0);
  __int128 best = -1;
  Optimum out;
  while (true) {
    std::fill(val.begin(), val.end(), 0);
    for (std::size_t j = 0; j < m; ++j) val[who[j]] += inst.utility(j);
    __int128 p = 1;
    for (Utility v : val) p *= v;
    if (p > best) {
      best = p;
      out.valuations.clear();
      out.first_assignment = who;
    }
    if (p == best) out.valuations.push_back(val);
    std::size_t j = 0;
    while (j < m && who[j] == n - 1) who[j++] = 0;
    if (j == m) break;
    ++who[j];
  }
  // Rebuild the product exactly from the first optimum.
  std::fill(val.begin(), val.end(), 0);
  for (std::size_t j = 0; j < m; ++j) val[out.first_assignment[j]] += inst.utility(j);
  out.product = 1;
  for (Utility v : val) out.product *= v;
  return out;
}

inline BigInt product_of(std::span<const Utility> v) {
  BigInt p = 1;
  for (Utility x : v) p *= x;
  return p;
}

// base^n.
inline BigInt ipow(const BigInt& base, int n) {
  BigInt r = 1;
  for (int i = 0; i < n; ++i) r *= base;
  return r;
}

inline Instance random_instance(std::mt19937_64& rng, int n, std::size_t m, Utility lo, Utility hi) {
  std::uniform_int_distribution<Utility> draw(lo, hi);
  std::vector<Utility> v(m);
  for (auto& x : v) x = draw(rng);
  return Instance(n, v);
}

using nsw::LoadBalanceTask;

// Depth-first over jobs in input order, each job tried on every machine.
// Prunes only on loads already above their upper end and on the remaining
// volume being too small to lift every machine to its lower end.
inline bool reference_feasible(const LoadBalanceTask& t) {
  const std::size_t k = t.machines.size();
  std::vector<Rational> load(k, Rational(0));
  std::vector<Utility> suffix(t.jobs.size() + 1, 0);
  for (std::size_t j = t.jobs.size(); j-- > 0;) suffix[j] = suffix[j + 1] + t.jobs[j];
  auto rec = [&](auto&& self, std::size_t j) -> bool {
    Rational missing = 0;
    for (std::size_t i = 0; i < k; ++i) {
      if (load[i] > t.machines[i].hi) return false;
      if (load[i] < t.machines[i].lo) missing += t.machines[i].lo - load[i];
    }
    if (missing > suffix[j]) return false;
    if (j == t.jobs.size()) return true;
    for (std::size_t i = 0; i < k; ++i) {
      load[i] += t.jobs[j];
      const bool ok = self(self, j + 1);
      load[i] -= t.jobs[j];
      if (ok) return true;
    }
    return false;
  };
  return rec(rec, 0);
}

inline LoadBalanceTask random_task(std::mt19937_64& rng) {
  const std::size_t m = 1 + rng() % 12;
  const std::size_t k = 1 + rng() % 4;
  const Utility hi_job = 1 + static_cast<Utility>(rng() % 30);
  LoadBalanceTask t;
  for (std::size_t j = 0; j < m; ++j) t.jobs.push_back(1 + static_cast<Utility>(rng() % hi_job));
  const Utility total = t.total();
  // Half of the tasks hide a planted assignment inside their intervals;
  // the rest aim near an even split or anywhere.
  const bool planted = rng() % 2;
  std::vector<Utility> planted_load(k, 0);
  for (Utility v : t.jobs) planted_load[rng() % k] += v;
  for (std::size_t i = 0; i < k; ++i) {
    if (planted) {
      const Rational below(static_cast<long long>(rng() % (hi_job + 1)), 1 + static_cast<long long>(rng() % 3));
      const Rational above(static_cast<long long>(rng() % (hi_job + 1)), 1 + static_cast<long long>(rng() % 3));
      t.machines.push_back({planted_load[i] - below, planted_load[i] + above});
      continue;
    }
    Rational center = rng() % 2 ? Rational(total, static_cast<long long>(k)) : Rational(static_cast<long long>(rng() % (total + 1)));
    Rational lo = center - Rational(static_cast<long long>(rng() % (2 * hi_job + 1)), 3);
    Rational width = Rational(static_cast<long long>(rng() % (hi_job + 1)), 1 + static_cast<long long>(rng() % 4));
    t.machines.push_back({lo, lo + width});
  }
  // Share endpoints sometimes so machine types repeat.
  if (!planted && k > 1 && rng() % 2) t.machines[1] = t.machines[0];
  static const Rational eps_choices[] = {Rational(1), Rational(1, 2), Rational(1, 5), Rational(1, 10), Rational(1, 48)};
  t.epsilon = eps_choices[rng() % 5];
  return t;
}

}  // namespace testing_support
