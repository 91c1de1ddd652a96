#include "nsw/generator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "nsw/errors.hpp"

namespace nsw {

Distribution parse_distribution(std::string_view name) {
  if (name == "uniform") return Distribution::UniformInteger;
  if (name == "power-law") return Distribution::PowerLaw;
  if (name == "with-big-goods") return Distribution::WithBigGoods;
  throw InvalidInput("unknown distribution '" + std::string(name) + "'");
}

namespace {

void check(const GeneratorSpec& spec) {
  if (spec.agents < 1) throw InvalidInput("need at least one agent");
  if (spec.goods < 1) throw InvalidInput("need at least one good");
  switch (spec.distribution) {
    case Distribution::UniformInteger:
      if (spec.lo < 1 || spec.lo > spec.hi) throw InvalidInput("uniform range must satisfy 1 <= lo <= hi");
      break;
    case Distribution::PowerLaw:
      if (!(spec.alpha > 0.0)) throw InvalidInput("power-law alpha must be positive");
      if (spec.cap < 1) throw InvalidInput("power-law cap must be at least 1");
      break;
    case Distribution::WithBigGoods:
      if (spec.lo < 1 || spec.lo > spec.hi) throw InvalidInput("uniform range must satisfy 1 <= lo <= hi");
      if (spec.big_count < 1 || spec.big_count > spec.goods) throw InvalidInput("big-good count must be in [1, goods]");
      if (spec.big_count >= static_cast<std::size_t>(spec.agents)) {
        throw InvalidInput("big-good count must be smaller than the agent count");
      }
      if (spec.big_factor < 1) throw InvalidInput("big-good factor must be at least 1");
      break;
  }
}

}  // namespace

Instance generate(const GeneratorSpec& spec) {
  check(spec);
  std::mt19937_64 rng(spec.seed);
  std::vector<Utility> v;
  v.reserve(spec.goods);

  switch (spec.distribution) {
    case Distribution::UniformInteger: {
      std::uniform_int_distribution<Utility> draw(spec.lo, spec.hi);
      for (std::size_t j = 0; j < spec.goods; ++j) v.push_back(draw(rng));
      break;
    }
    case Distribution::PowerLaw: {
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      for (std::size_t j = 0; j < spec.goods; ++j) {
        const double x = std::pow(1.0 - unit(rng), -1.0 / spec.alpha);
        const double capped = std::min(std::floor(x), static_cast<double>(spec.cap));
        v.push_back(std::max<Utility>(1, static_cast<Utility>(capped)));
      }
      break;
    }
    case Distribution::WithBigGoods: {
      std::uniform_int_distribution<Utility> draw(spec.lo, spec.hi);
      const std::size_t base_count = spec.goods - spec.big_count;
      Utility base_total = 0;
      Utility base_max = 0;
      for (std::size_t j = 0; j < base_count; ++j) {
        v.push_back(draw(rng));
        base_total += v.back();
        base_max = std::max(base_max, v.back());
      }
      const auto n = static_cast<Utility>(spec.agents);
      const auto c = static_cast<Utility>(spec.big_count);
      // b * (n - c) >= base_total puts every planted good at or above mu;
      // n * base_max < base_total + c * b keeps every other good below it.
      const Utility at_mean = (base_total + (n - c) - 1) / (n - c);
      const Utility clear_base = (n * base_max - base_total) / c + 1;
      const Utility big = std::max({spec.big_factor * at_mean, clear_base, spec.lo});
      for (std::size_t i = 0; i < spec.big_count; ++i) v.push_back(big);
      std::shuffle(v.begin(), v.end(), rng);
      break;
    }
  }

  Instance inst(spec.agents, std::move(v));
  if (spec.distribution == Distribution::WithBigGoods) {
    std::size_t planted = 0;
    for (Utility u : inst.utilities()) {
      if (BigInt(u) * inst.agents() >= BigInt(inst.total())) ++planted;
    }
    if (planted != spec.big_count) {
      throw std::logic_error("generator planted " + std::to_string(planted) + " goods at or above the mean, expected " +
                             std::to_string(spec.big_count));
    }
  }
  return inst;
}

}  // namespace nsw
