#include "nsw/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "nsw/errors.hpp"

namespace nsw {

namespace {

// Totals stay far from the int64 edge so scaled grid arithmetic has headroom.
constexpr Utility kMaxTotal = Utility{1} << 62;

}  // namespace

Instance::Instance(int agents, std::vector<Utility> utilities)
    : agents_(agents), utilities_(std::move(utilities)) {
  if (agents_ < 1) {
    throw InvalidInput("instance needs at least one agent, got " + std::to_string(agents_));
  }
  for (std::size_t j = 0; j < utilities_.size(); ++j) {
    const Utility v = utilities_[j];
    if (v <= 0) {
      throw InvalidInput("utility of good " + std::to_string(j + 1) + " is not positive: " + std::to_string(v));
    }
    if (v > kMaxTotal - total_) {
      throw CapacityError("total utility exceeds 2^62");
    }
    total_ += v;
    vmax_ = std::max(vmax_, v);
  }
}

Rational Instance::mean() const { return Rational(total_, agents_); }

bool Instance::vmax_below_mean() const {
  return BigInt(vmax_) * agents_ < BigInt(total_);
}

Instance Instance::scaled(Utility factor) const {
  std::vector<Utility> out(utilities_.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = to_int64(BigInt(utilities_[j]) * factor);
  }
  return Instance(agents_, std::move(out));
}

Allocation Allocation::from_bundles(const Instance& inst, std::vector<std::vector<GoodIndex>> bundles) {
  if (bundles.size() != static_cast<std::size_t>(inst.agents())) {
    throw InvalidAllocation("allocation has " + std::to_string(bundles.size()) + " bundles for " +
                            std::to_string(inst.agents()) + " agents");
  }
  std::vector<char> seen(inst.goods(), 0);
  Allocation out;
  out.goods_ = inst.goods();
  out.valuations_.assign(bundles.size(), 0);
  for (std::size_t i = 0; i < bundles.size(); ++i) {
    for (GoodIndex j : bundles[i]) {
      if (j >= inst.goods()) {
        throw InvalidAllocation("good index " + std::to_string(j + 1) + " out of range");
      }
      if (seen[j]) {
        throw InvalidAllocation("good " + std::to_string(j + 1) + " assigned twice");
      }
      seen[j] = 1;
      out.valuations_[i] += inst.utility(j);
    }
    std::sort(bundles[i].begin(), bundles[i].end());
  }
  if (auto it = std::find(seen.begin(), seen.end(), 0); it != seen.end()) {
    throw InvalidAllocation("good " + std::to_string(it - seen.begin() + 1) + " is not assigned");
  }
  out.bundles_ = std::move(bundles);
  return out;
}

Allocation Allocation::from_assignment(const Instance& inst, std::span<const int> agent_of_good) {
  if (agent_of_good.size() != inst.goods()) {
    throw InvalidAllocation("assignment covers " + std::to_string(agent_of_good.size()) + " of " +
                            std::to_string(inst.goods()) + " goods");
  }
  std::vector<std::vector<GoodIndex>> bundles(inst.agents());
  for (std::size_t j = 0; j < agent_of_good.size(); ++j) {
    const int a = agent_of_good[j];
    if (a < 0 || a >= inst.agents()) {
      throw InvalidAllocation("good " + std::to_string(j + 1) + " assigned to unknown agent " + std::to_string(a));
    }
    bundles[a].push_back(j);
  }
  return from_bundles(inst, std::move(bundles));
}

bool Allocation::has_empty_bundle() const {
  return std::any_of(bundles_.begin(), bundles_.end(), [](const auto& b) { return b.empty(); });
}

std::vector<int> Allocation::assignment() const {
  std::vector<int> out(goods_, -1);
  for (std::size_t i = 0; i < bundles_.size(); ++i) {
    for (GoodIndex j : bundles_[i]) out[j] = static_cast<int>(i);
  }
  return out;
}

bool WelfareValue::is_zero() const {
  if (exact_product) return *exact_product == 0;
  return std::isinf(log_value) && log_value < 0;
}

double WelfareValue::value() const { return is_zero() ? 0.0 : std::exp(log_value); }

std::partial_ordering compare(const WelfareValue& a, const WelfareValue& b) {
  if (a.exact_product && b.exact_product && a.agents == b.agents) {
    const int c = a.exact_product->compare(*b.exact_product);
    return c <=> 0;
  }
  const bool az = a.is_zero();
  const bool bz = b.is_zero();
  if (az || bz) return bz <=> az;
  if (std::abs(a.log_value - b.log_value) <= kLogTolerance) return std::partial_ordering::equivalent;
  return a.log_value <=> b.log_value;
}

WelfareValue welfare_of(std::span<const Utility> valuations) {
  WelfareValue w;
  w.agents = static_cast<int>(valuations.size());
  if (valuations.empty()) {
    // Empty product over zero agents.
    w.exact_product = BigInt(1);
    return w;
  }
  long double sum = 0.0L;
  bool zero = false;
  for (Utility v : valuations) {
    if (v <= 0) {
      zero = true;
      break;
    }
    sum += std::log(static_cast<long double>(v));
  }
  w.log_value = zero ? -std::numeric_limits<double>::infinity()
                     : static_cast<double>(sum / static_cast<long double>(valuations.size()));
  if (valuations.size() <= static_cast<std::size_t>(kExactProductMaxAgents)) {
    BigInt p = 1;
    for (Utility v : valuations) p *= v;
    w.exact_product = std::move(p);
  }
  return w;
}

namespace {

void check_matches(const Instance& inst, const Allocation& alloc) {
  if (alloc.agents() != static_cast<std::size_t>(inst.agents()) || alloc.goods() != inst.goods()) {
    throw InvalidAllocation("allocation shape does not match the instance");
  }
  for (std::size_t i = 0; i < alloc.agents(); ++i) {
    Utility sum = 0;
    for (GoodIndex j : alloc.bundle(i)) sum += inst.utility(j);
    if (sum != alloc.valuations()[i]) {
      throw InvalidAllocation("allocation valuations do not match the instance utilities");
    }
  }
}

}  // namespace

WelfareValue nash_welfare(const Instance& inst, const Allocation& alloc) {
  check_matches(inst, alloc);
  return welfare_of(alloc.valuations());
}

std::optional<double> generalized_mean(const Instance& inst, const Allocation& alloc, const Rational& q) {
  check_matches(inst, alloc);
  const auto vals = alloc.valuations();
  const bool has_zero = std::any_of(vals.begin(), vals.end(), [](Utility v) { return v == 0; });
  if (q == 0) {
    if (has_zero) return std::nullopt;
    return nash_welfare(inst, alloc).value();
  }
  if (has_zero && q < 0) return std::nullopt;
  const long double qd = q.convert_to<long double>();
  // log-sum-exp over q*ln(v) keeps extreme exponents finite.
  std::vector<long double> terms;
  for (Utility v : vals) {
    if (v == 0) continue;  // contributes 0^q = 0 for q > 0
    terms.push_back(qd * std::log(static_cast<long double>(v)));
  }
  if (terms.empty()) return 0.0;
  const long double peak = *std::max_element(terms.begin(), terms.end());
  long double acc = 0.0L;
  for (long double t : terms) acc += std::exp(t - peak);
  const long double log_mean = peak + std::log(acc) - std::log(static_cast<long double>(vals.size()));
  return static_cast<double>(std::exp(log_mean / qd));
}

IngestResult ingest_instance(std::span<const Rational> raw, int agents) {
  IngestResult out;
  BigInt lcd = 1;
  for (std::size_t j = 0; j < raw.size(); ++j) {
    if (raw[j] < 0) {
      throw InvalidInput("utility of good " + std::to_string(j + 1) + " is negative: " + to_string(raw[j]));
    }
    if (raw[j] == 0) {
      out.dropped.push_back(j);
      out.warnings.push_back("good " + std::to_string(j + 1) + " has zero utility and was dropped");
      continue;
    }
    out.kept.push_back(j);
    const BigInt& den = boost::multiprecision::denominator(raw[j]);
    lcd = boost::multiprecision::lcm(lcd, den);
  }
  std::vector<Utility> utilities;
  utilities.reserve(out.kept.size());
  for (GoodIndex j : out.kept) {
    Rational scaled = raw[j] * lcd;
    utilities.push_back(to_int64(boost::multiprecision::numerator(scaled)));
  }
  out.scale = to_int64(lcd);
  out.instance = Instance(agents, std::move(utilities));
  return out;
}

IngestResult ingest_instance(std::span<const std::string> raw, int agents) {
  std::vector<Rational> parsed;
  parsed.reserve(raw.size());
  for (const auto& s : raw) parsed.push_back(parse_rational(s));
  return ingest_instance(std::span<const Rational>(parsed), agents);
}

}  // namespace nsw
