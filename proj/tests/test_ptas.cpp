#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "nsw/errors.hpp"
#include "nsw/preprocess.hpp"
#include "nsw/ptas.hpp"
#include "support.hpp"

using namespace nsw;
using testing_support::ipow;
using testing_support::reference_optimum;

namespace {

std::vector<Rational> rationals(std::initializer_list<std::pair<long long, long long>> xs) {
  std::vector<Rational> out;
  for (auto [p, q] : xs) out.emplace_back(p, q);
  return out;
}

BigInt binomial(long long n, long long k) {
  BigInt r = 1;
  for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// ln(f + slack) >= ln(opt) - 1e-9 with opt from its exact product.
bool additive_bound(const WelfareValue& f, const BigInt& opt_product, int n, double slack) {
  const double log_opt = log_of(opt_product) / n;
  const double fv = f.is_zero() ? 0.0 : f.value();
  return std::log(fv + slack) >= log_opt - 1e-9;
}

// P_f * (1 + 20 eps)^n >= P_opt, exactly.
bool multiplicative_bound(const WelfareValue& f, const BigInt& opt_product, int n, const Rational& eps) {
  const Rational ratio = 1 + 20 * eps;
  return *f.exact_product * ipow(numerator(ratio), n) >= opt_product * ipow(denominator(ratio), n);
}

std::vector<Instance> corpus(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::vector<Instance> out;
  for (int i = 0; i < count; ++i) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const std::size_t m = 4 + rng() % 7;
    out.push_back(testing_support::random_instance(rng, n, m, 1, 20));
  }
  return out;
}

}  // namespace

TEST_CASE("level grid") {
  SUBCASE("ten levels of 0.6") {
    const Instance inst(2, {3, 2, 2, 1});
    const auto g = build_grid(inst, Rational(1, 5));
    CHECK(g.levels == rationals({{1, 1}, {8, 5}, {11, 5}, {14, 5}, {17, 5}, {4, 1}, {23, 5}, {26, 5}, {29, 5}, {32, 5}}));
    CHECK(g.spacing() == Rational(3, 5));
    // Integral after scaling by agents / eps.
    CHECK(g.scale == 10);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(Rational(g.scaled_levels[i]) == g.levels[i] * g.scale);
  }
  SUBCASE("four levels of 2") {
    const Instance inst(2, {4, 4, 4, 4, 4});
    const auto g = build_grid(inst, Rational(1, 2));
    CHECK(g.levels == rationals({{6, 1}, {8, 1}, {10, 1}, {12, 1}}));
  }
  SUBCASE("eps one gives two levels") {
    const Instance inst(3, {5, 4, 4, 3, 2});
    const auto g = build_grid(inst, 1);
    CHECK(g.levels == std::vector<Rational>{inst.mean() - 5, inst.mean()});
  }
  SUBCASE("preconditions") {
    CHECK_THROWS_AS(build_grid(Instance(2, {4, 4}), Rational(1, 2)), PreconditionError);
    CHECK_THROWS_AS(build_grid(Instance(2, {3, 2, 2, 1}), Rational(2, 5)), PreconditionError);
  }
}

TEST_CASE("profile enumeration") {
  auto count = [](int n, std::size_t levels) {
    std::uint64_t c = 0;
    std::vector<Profile> seen;
    enumerate_profiles(n, levels, [&](const Profile& p) {
      CHECK(p.agents() == n);
      CHECK(p.counts.size() == levels);
      if (!seen.empty()) CHECK(std::lexicographical_compare(seen.back().counts.begin(), seen.back().counts.end(),
                                                            p.counts.begin(), p.counts.end()));
      seen.push_back(p);
      ++c;
      return true;
    });
    return c;
  };
  CHECK(count(2, 2) == 3);
  CHECK(count(1, 4) == 4);
  CHECK(count(3, 10) == 220);
  CHECK(profile_count(2, 2) == 3);
  CHECK(profile_count(1, 4) == 4);
  CHECK(profile_count(3, 10) == 220);
  CHECK(profile_count(4, 10) == 715);
  for (int n = 1; n <= 5; ++n) {
    for (std::size_t l = 1; l <= 8; ++l) CHECK(BigInt(count(n, l)) == binomial(n + static_cast<long long>(l) - 1, n));
  }

  Profile first;
  enumerate_profiles(3, 4, [&](const Profile& p) {
    first = p;
    return false;
  });
  CHECK(first.counts == std::vector<int>{0, 0, 0, 3});

  const std::vector<std::size_t> levels{0, 2, 2};
  const Profile p = profile_of(levels, 4);
  CHECK(p.counts == std::vector<int>{1, 0, 2, 0});
  CHECK(p.agent_levels() == levels);
}

TEST_CASE("sum pruning") {
  const Instance inst(2, {3, 2, 2, 1});
  const auto g = build_grid(inst, Rational(1, 5));
  // Levels 3.4 and 3.4: 6.8 <= 8 <= 8.0.
  CHECK_FALSE(prune_profile(profile_of(std::vector<std::size_t>{4, 4}, g.size()), g, inst));
  // Levels 5.8 and 6.4 already exceed the total.
  CHECK(prune_profile(profile_of(std::vector<std::size_t>{8, 9}, g.size()), g, inst));
  // Levels 1 and 1 cannot reach it: 2 + 1.2 < 8.
  CHECK(prune_profile(profile_of(std::vector<std::size_t>{0, 0}, g.size()), g, inst));
  // Window edge: 4.0 + 4.0 = 8 is kept.
  CHECK_FALSE(prune_profile(profile_of(std::vector<std::size_t>{5, 5}, g.size()), g, inst));

  // Pruning only discards exactly infeasible tasks.
  enumerate_profiles(2, g.size(), [&](const Profile& p) {
    if (prune_profile(p, g, inst)) CHECK(solve_exact(profile_task(p, g, inst)).infeasible());
    return true;
  });
}

TEST_CASE("profile task shares intervals per level") {
  const Instance inst(3, {5, 4, 4, 3, 2, 2});
  const auto g = build_grid(inst, Rational(1, 2));
  const Profile p = profile_of(std::vector<std::size_t>{1, 1, 2}, g.size());
  const auto t = profile_task(p, g, inst);
  REQUIRE(t.machines.size() == 3);
  CHECK(t.machines[0] == t.machines[1]);
  CHECK(t.machine_types() == 2);
  CHECK(t.machines[2].lo == g.levels[2]);
  CHECK(t.machines[2].hi == g.levels[2] + g.spacing());
  CHECK(t.epsilon == Rational(1, 2));
}

TEST_CASE("eps mapping") {
  CHECK(normalize_eps(Rational(1, 5)) == Rational(1, 5));
  CHECK(normalize_eps(Rational(2, 9)) == Rational(1, 5));
  CHECK(normalize_eps(Rational(3)) == 1);
  CHECK(guarantee_eps(1) == Rational(1, 192));
  CHECK(guarantee_eps(Rational(1, 2)) == Rational(1, 384));
  CHECK(guarantee_eps(5) == Rational(1, 192));
  CHECK(guarantee_eps(Rational(2, 7)) == Rational(1, 672));
  CHECK_THROWS_AS(normalize_eps(0), InvalidInput);
  CHECK(parse_mode("raw") == EpsMode::Raw);
  CHECK(parse_mode("guarantee") == EpsMode::Guarantee);
  CHECK_THROWS_AS(parse_mode("fast"), InvalidInput);
}

TEST_CASE("main procedure examples") {
  SUBCASE("balanced four") {
    const Instance inst(2, {3, 2, 2, 1});
    const auto r = main_procedure(inst, Rational(1, 5), {LbBackend::Exact});
    CHECK(*r.welfare.exact_product == 16);
    CHECK(r.profiles_enumerated == 55);
    CHECK(r.lb_calls + r.profiles_pruned == r.profiles_enumerated);
    CHECK_FALSE(r.anomaly);
  }
  SUBCASE("single agent") {
    const Instance inst(1, {1, 2, 3});
    const auto r = main_procedure(inst, Rational(1, 5));
    CHECK(*r.welfare.exact_product == 6);
    CHECK(r.allocation.bundle(0).size() == 3);
  }
  SUBCASE("big good violates the precondition") {
    CHECK_THROWS_AS(main_procedure(Instance(2, {1, 1}), Rational(1, 2)), PreconditionError);
  }
}

TEST_CASE("full pipeline examples") {
  SUBCASE("more agents than goods") {
    const Instance inst(3, {7, 9});
    const auto r = max_nash_welfare(inst, Rational(1, 5), EpsMode::Raw);
    CHECK(r.welfare.is_zero());
    std::size_t nonempty = 0;
    for (const auto& b : r.allocation.bundles()) nonempty += b.size() == 1;
    CHECK(nonempty == 2);
  }
  SUBCASE("one big good") {
    const Instance inst(2, {10, 1, 1, 1});
    const auto r = max_nash_welfare(inst, Rational(1, 2), EpsMode::Raw);
    CHECK(r.allocation.bundles() == std::vector<std::vector<GoodIndex>>{{0}, {1, 2, 3}});
    CHECK(*r.welfare.exact_product == 30);
    CHECK(r.welfare.value() == doctest::Approx(std::sqrt(30.0)).epsilon(1e-12));
    CHECK(r.removed_agents == 1);
    CHECK(reference_optimum(inst).product == 30);
  }
  SUBCASE("every agent stripped") {
    const Instance inst(2, {2, 2});
    const auto r = max_nash_welfare(inst, Rational(1, 2), EpsMode::Raw);
    CHECK(r.allocation.bundles() == std::vector<std::vector<GoodIndex>>{{0}, {1}});
    CHECK(r.welfare.value() == doctest::Approx(2.0));
    CHECK(r.profiles_enumerated == 0);
  }
  SUBCASE("equal split of two units") {
    const Instance inst(2, {1, 1});
    const auto r = max_nash_welfare(inst, Rational(1, 2), EpsMode::Raw);
    CHECK(*r.welfare.exact_product == 1);
  }
  SUBCASE("guarantee mode maps eps") {
    const Instance inst(2, {3, 2, 2, 1});
    const auto r = max_nash_welfare(inst, 1, EpsMode::Guarantee);
    CHECK(*r.eps_internal == Rational(1, 192));
    CHECK(*r.eps_user == 1);
    CHECK(r.mode == "guarantee");
    CHECK(*r.welfare.exact_product == 16);
  }
}

TEST_CASE("bounds and optimum windows on random instances") {
  const Rational eps(1, 5);
  const double v_slack = 48.0 / 5.0;
  int with_precondition = 0;
  for (const Instance& inst : corpus(31, 60)) {
    const int n = inst.agents();
    const auto opt = reference_optimum(inst);
    const auto full = max_nash_welfare(inst, eps, EpsMode::Raw, {LbBackend::Exact});
    CHECK(additive_bound(full.welfare, opt.product, n, 192.0 / 5.0 * inst.vmax()));
    CHECK(multiplicative_bound(full.welfare, opt.product, n, eps));
    CHECK(*full.welfare.exact_product <= opt.product);
    if (!inst.vmax_below_mean()) continue;
    ++with_precondition;

    for (auto backend : {LbBackend::Exact, LbBackend::Relaxed}) {
      const auto r = main_procedure(inst, eps, {backend});
      CHECK(additive_bound(r.welfare, opt.product, n, v_slack * inst.vmax()));
      CHECK(multiplicative_bound(r.welfare, opt.product, n, eps));
      CHECK(BigInt(r.profiles_enumerated) == profile_count(n, 10));
      CHECK_FALSE(r.anomaly);
    }

    const Rational mu = inst.mean();
    const auto grid = build_grid(inst, eps);
    for (const auto& val : opt.valuations) {
      std::vector<std::size_t> levels;
      for (Utility v : val) {
        // Strict windows around the mean.
        CHECK(mu - inst.vmax() < v);
        CHECK(v < mu + inst.vmax());
        CHECK(mu / 2 < v);
        CHECK(v < 2 * mu);
        const auto level = bracketing_level(grid, Rational(v));
        REQUIRE(level.has_value());
        CHECK(grid.levels[*level] <= v);
        CHECK(v <= grid.levels[*level] + grid.spacing());
        levels.push_back(*level);
      }
      std::sort(levels.begin(), levels.end());
      const Profile p = profile_of(levels, grid.size());
      CHECK_FALSE(prune_profile(p, grid, inst));
      CHECK_FALSE(solve_exact(profile_task(p, grid, inst)).infeasible());
    }
  }
  CHECK(with_precondition > 10);
}

TEST_CASE("determinism across runs and threads") {
  for (const Instance& inst : corpus(77, 20)) {
    const auto a = max_nash_welfare(inst, Rational(1, 4), EpsMode::Raw);
    const auto b = max_nash_welfare(inst, Rational(1, 4), EpsMode::Raw);
    const auto c = max_nash_welfare(inst, Rational(1, 4), EpsMode::Raw, {LbBackend::Automatic, 3});
    CHECK(a.allocation == b.allocation);
    CHECK(a.allocation == c.allocation);
    CHECK(a.lb_calls == c.lb_calls);
  }
}

TEST_CASE("bracketing level edges") {
  const Instance inst(2, {3, 2, 2, 1});
  const auto g = build_grid(inst, Rational(1, 5));
  CHECK(bracketing_level(g, 1) == std::optional<std::size_t>(0));
  CHECK(bracketing_level(g, 7) == std::optional<std::size_t>(9));
  CHECK_FALSE(bracketing_level(g, Rational(99, 100)).has_value());
  CHECK_FALSE(bracketing_level(g, Rational(701, 100)).has_value());
  CHECK(bracketing_level(g, 4) == std::optional<std::size_t>(5));
}
