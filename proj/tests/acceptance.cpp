// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Ground truth comes from the plain enumeration in
// support.hpp, not from the library's own oracle.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "nsw/baselines.hpp"
#include "nsw/generator.hpp"
#include "nsw/preprocess.hpp"
#include "nsw/ptas.hpp"
#include "support.hpp"

using namespace nsw;
using testing_support::ipow;
using testing_support::Optimum;
using testing_support::reference_optimum;

namespace {

constexpr double kLogTol = 1e-9;

struct Case {
  Instance inst;
  Optimum opt;
};

// 200 seeded instances: agents in {2, 3, 4}, goods in 4..10, utilities
// uniform in [1, 20].
std::vector<Case> build_corpus() {
  std::vector<Case> out;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    std::mt19937_64 rng(seed);
    const int n = 2 + static_cast<int>(seed % 3);
    const std::size_t m = 4 + rng() % 7;
    Instance inst = testing_support::random_instance(rng, n, m, 1, 20);
    Optimum opt = reference_optimum(inst);
    out.push_back({std::move(inst), std::move(opt)});
  }
  return out;
}

double log_opt(const Case& c) { return log_of(c.opt.product) / c.inst.agents(); }

// f >= OPT - slack, as ln(f + slack) >= ln(OPT) - 1e-9.
bool additive_ok(const WelfareValue& f, const Case& c, double slack) {
  const double fv = f.is_zero() ? 0.0 : f.value();
  return std::log(fv + slack) >= log_opt(c) - kLogTol;
}

// f >= OPT / (1 + 20 eps), exactly on products.
bool multiplicative_ok(const WelfareValue& f, const Case& c, const Rational& eps) {
  const Rational ratio = 1 + 20 * eps;
  const int n = c.inst.agents();
  return *f.exact_product * ipow(numerator(ratio), n) >= c.opt.product * ipow(denominator(ratio), n);
}

int failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail) {
  std::printf("criterion %2d %s: %s (%s)\n", id, pass ? "PASS" : "FAIL", what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

void criterion_1(const std::vector<Case>& corpus) {
  const auto start = std::chrono::steady_clock::now();
  const Rational eps(1, 5);
  int full_bad = 0, main_bad = 0, main_cases = 0;
  double worst_full = 0, worst_main = 0;
  for (const auto& c : corpus) {
    const double vmax = static_cast<double>(c.inst.vmax());
    const auto full = max_nash_welfare(c.inst, eps, EpsMode::Raw);
    if (!additive_ok(full.welfare, c, 192.0 / 5.0 * vmax)) ++full_bad;
    worst_full = std::max(worst_full, (std::exp(log_opt(c)) - full.welfare.value()) / vmax);
    if (!c.inst.vmax_below_mean()) continue;
    ++main_cases;
    const auto r = main_procedure(c.inst, eps);
    if (!additive_ok(r.welfare, c, 48.0 / 5.0 * vmax)) ++main_bad;
    worst_main = std::max(worst_main, (std::exp(log_opt(c)) - r.welfare.value()) / vmax);
  }
  const double secs = seconds_since(start);
  report(1, full_bad == 0 && main_bad == 0 && main_cases > 0 && secs < 300,
         "additive bounds at eps = 1/5",
         fmt("pipeline %d/200 violate OPT - 38.4 vmax, main procedure %d/%d violate OPT - 9.6 vmax; "
             "worst gap/vmax %.4f and %.4f; %.1f s",
             full_bad, main_bad, main_cases, worst_full, worst_main, secs));
}

void criterion_2() {
  const auto start = std::chrono::steady_clock::now();
  int bad = 0, count = 0;
  double worst = 0;
  std::uint64_t profiles = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    std::mt19937_64 rng(1000 + seed);
    const std::size_t m = 2 + rng() % 5;
    const Instance inst = testing_support::random_instance(rng, 2, m, 1, 20);
    const Case c{inst, reference_optimum(inst)};
    const auto r = max_nash_welfare(inst, 1, EpsMode::Guarantee, {LbBackend::Exact});
    if (*r.eps_internal != Rational(1, 192)) ++bad;
    if (!additive_ok(r.welfare, c, static_cast<double>(inst.vmax()))) ++bad;
    worst = std::max(worst, std::exp(log_opt(c)) - r.welfare.value());
    profiles += r.profiles_enumerated;
    ++count;
  }
  const double secs = seconds_since(start);
  report(2, bad == 0 && secs < 600, "guarantee mode, eps_internal = 1/192, f >= OPT - vmax",
         fmt("%d instances with 2 agents and at most 6 goods, %d violations, observed max gap %.3g, "
             "%llu profiles, %.1f s",
             count, bad, worst, static_cast<unsigned long long>(profiles), secs));
}

void criterion_3(const std::vector<Case>& corpus) {
  int bad = 0, checks = 0;
  for (const Rational eps : {Rational(1, 5), Rational(1, 4)}) {
    for (const auto& c : corpus) {
      ++checks;
      if (!multiplicative_ok(max_nash_welfare(c.inst, eps, EpsMode::Raw).welfare, c, eps)) ++bad;
      if (!c.inst.vmax_below_mean()) continue;
      ++checks;
      if (!multiplicative_ok(main_procedure(c.inst, eps).welfare, c, eps)) ++bad;
    }
  }
  report(3, bad == 0, "f >= OPT / (1 + 20 eps) for eps in {1/5, 1/4}", fmt("%d violations in %d checks", bad, checks));
}

void criterion_4(const std::vector<Case>& corpus) {
  int bad = 0, optima = 0, cases = 0;
  for (const auto& c : corpus) {
    if (!c.inst.vmax_below_mean()) continue;
    ++cases;
    const BigInt n = c.inst.agents();
    const BigInt total = c.inst.total();
    const BigInt vmax = c.inst.vmax();
    for (const auto& val : c.opt.valuations) {
      ++optima;
      for (Utility v : val) {
        // With mu = total / n, all four bounds multiplied through by n (or 2n).
        const BigInt nv = n * v;
        const bool near_mean = total - n * vmax < nv && nv < total + n * vmax;
        const bool within_double = total < 2 * nv && nv < 2 * total;
        if (!near_mean || !within_double) ++bad;
      }
    }
  }
  report(4, bad == 0 && cases > 0, "optimal bundles within (mu - vmax, mu + vmax) and (mu/2, 2 mu)",
         fmt("%d instances, %d optimal allocations, %d agent violations", cases, optima, bad));
}

void criterion_5() {
  int bad = 0, planted = 0, stripped = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    std::mt19937_64 rng(5000 + seed);
    const int n = 2 + static_cast<int>(seed % 3);
    const std::size_t m = static_cast<std::size_t>(n) + 1 + rng() % (10 - n);
    Instance inst = testing_support::random_instance(rng, n, m, 1, 20);
    if (seed % 2 == 0) {
      GeneratorSpec spec;
      spec.agents = n;
      spec.goods = m;
      spec.distribution = Distribution::WithBigGoods;
      spec.big_count = 1 + seed / 2 % static_cast<std::uint64_t>(n - 1);
      spec.seed = seed;
      inst = generate(spec);
      ++planted;
    }
    const auto pre = preprocess(inst);
    stripped += pre.removed_agents() > 0;
    const BigInt opt = reference_optimum(inst).product;
    BigInt removed = 1;
    for (GoodIndex j : pre.removed_goods) removed *= inst.utility(j);
    if (!pre.residual) {
      if (removed != opt) ++bad;
      if (*nash_welfare(inst, recombine(inst, pre, std::nullopt)).exact_product != opt) ++bad;
      continue;
    }
    const Instance& res = *pre.residual;
    if (BigInt(res.vmax()) * res.agents() >= BigInt(res.total())) ++bad;
    const Optimum res_opt = reference_optimum(res);
    if (removed * res_opt.product != opt) ++bad;
    const auto full = recombine(inst, pre, Allocation::from_assignment(res, res_opt.first_assignment));
    if (*nash_welfare(inst, full).exact_product != opt) ++bad;
  }
  report(5, bad == 0 && stripped >= planted, "preprocessing keeps vmax < mu and preserves OPT exactly",
         fmt("200 instances, %d with planted big goods, %d stripped, %d violations", planted, stripped, bad));
}

void criterion_6() {
  std::mt19937_64 rng(6006);
  int unsound = 0, outside = 0, not_exact = 0, feasible = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const LoadBalanceTask t = testing_support::random_task(rng);
    const bool ok = testing_support::reference_feasible(t);
    feasible += ok;
    for (auto backend : {LbBackend::Exact, LbBackend::Relaxed}) {
      const auto out = solve(t, backend);
      if (out.infeasible()) {
        unsound += ok;
        continue;
      }
      const auto& a = *out.assignment;
      std::vector<int> seen(t.jobs.size(), 0);
      bool partition = a.machine_jobs.size() == t.machines.size();
      for (std::size_t k = 0; partition && k < t.machines.size(); ++k) {
        Utility load = 0;
        for (std::size_t j : a.machine_jobs[k]) {
          ++seen[j];
          load += t.jobs[j];
        }
        const Rational l(load);
        if (l < t.machines[k].lo - t.slack() || l > t.machines[k].hi + t.slack()) ++outside;
        if (backend == LbBackend::Exact && (l < t.machines[k].lo || l > t.machines[k].hi)) ++not_exact;
      }
      for (int s : seen) partition = partition && s == 1;
      if (!partition) ++outside;
    }
  }
  report(6, unsound == 0 && outside == 0 && not_exact == 0, "load balancing contract on 500 fuzzed tasks",
         fmt("%d exactly feasible; false Infeasible %d, outside slack or not a partition %d, exact backend "
             "outside [l, u] %d",
             feasible, unsound, outside, not_exact));
}

void criterion_7(const std::vector<Case>& corpus) {
  int bad = 0;
  for (const auto& c : corpus) {
    const auto oracle = brute_force_opt(c.inst);
    if (*oracle.opt_value.exact_product != c.opt.product) ++bad;
    if (!check_ef1(c.inst, oracle.allocation)) ++bad;
  }
  report(7, bad == 0, "oracle maximizers are EF1", fmt("200 instances, %d failures", bad));
}

void criterion_8(const std::vector<Case>& corpus) {
  int bad = 0;
  double worst = 1;
  for (const auto& c : corpus) {
    const auto g = greedy(c.inst);
    const int n = c.inst.agents();
    if (*g.welfare.exact_product * ipow(1061, n) < c.opt.product * ipow(1000, n)) ++bad;
    worst = std::max(worst, std::exp(log_opt(c) - g.welfare.log_value));
  }
  report(8, bad == 0, "greedy f >= OPT / 1.061", fmt("200 instances, %d violations, worst ratio %.5f", bad, worst));
}

void criterion_9(const std::vector<Case>& corpus) {
  int bad = 0;
  for (int seed = 0; seed < 50; ++seed) {
    const Instance& inst = corpus[static_cast<std::size_t>(seed)].inst;
    const Instance doubled = inst.scaled(2);
    const auto a = max_nash_welfare(inst, Rational(1, 5), EpsMode::Raw);
    const auto b = max_nash_welfare(doubled, Rational(1, 5), EpsMode::Raw);
    const auto again = max_nash_welfare(inst, Rational(1, 5), EpsMode::Raw);
    if (*b.welfare.exact_product != *a.welfare.exact_product * ipow(2, inst.agents())) ++bad;
    if (a.allocation.bundles() != b.allocation.bundles()) ++bad;
    if (!(again.allocation == a.allocation)) ++bad;
  }
  report(9, bad == 0, "determinism and scale equivariance under doubling", fmt("50 seeds, %d failures", bad));
}

void criterion_10() {
  std::mt19937_64 rng(10);
  Instance inst = testing_support::random_instance(rng, 4, 12, 1, 20);
  while (!inst.vmax_below_mean()) inst = testing_support::random_instance(rng, 4, 12, 1, 20);
  const auto start = std::chrono::steady_clock::now();
  const auto r = main_procedure(inst, Rational(1, 5));
  const double secs = seconds_since(start);
  report(10, r.profiles_enumerated == 715 && secs < 60 && !r.anomaly, "runtime smoke, 4 agents, 12 goods, eps = 1/5",
         fmt("%llu profiles enumerated (715 expected), %llu pruned, %.3f s",
             static_cast<unsigned long long>(r.profiles_enumerated), static_cast<unsigned long long>(r.profiles_pruned),
             secs));
}

}  // namespace

int main() {
  const auto corpus = build_corpus();
  const std::vector<std::function<void()>> steps{
      [&] { criterion_1(corpus); }, [] { criterion_2(); },        [&] { criterion_3(corpus); },
      [&] { criterion_4(corpus); }, [] { criterion_5(); },        [] { criterion_6(); },
      [&] { criterion_7(corpus); }, [&] { criterion_8(corpus); }, [&] { criterion_9(corpus); },
      [] { criterion_10(); },
  };
  for (std::size_t i = 0; i < steps.size(); ++i) {
    try {
      steps[i]();
    } catch (const std::exception& e) {
      report(static_cast<int>(i + 1), false, "threw", e.what());
    }
  }
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
