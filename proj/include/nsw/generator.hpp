#pragma once

#include <cstdint>
#include <string_view>

#include "nsw/core.hpp"

namespace nsw {

enum class Distribution {
  UniformInteger,  // uniform integers in [lo, hi]
  PowerLaw,        // floor of a Pareto(alpha) draw, capped at cap
  WithBigGoods,    // uniform [lo, hi] plus big_count goods of utility >= mu
};

Distribution parse_distribution(std::string_view name);

struct GeneratorSpec {
  int agents = 2;
  std::size_t goods = 4;
  Distribution distribution = Distribution::UniformInteger;
  Utility lo = 1;
  Utility hi = 20;
  double alpha = 2.0;
  Utility cap = 100;
  std::size_t big_count = 1;
  Utility big_factor = 3;
  std::uint64_t seed = 0;
};

// Deterministic given the GeneratorSpec. Throws InvalidInput on an invalid one.
Instance generate(const GeneratorSpec& spec);

}  // namespace nsw
