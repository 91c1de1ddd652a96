#include "nsw/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>

#include "nsw/errors.hpp"

namespace nsw {

std::string number_text(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer() || j.is_number_unsigned() || j.is_number_float()) return j.dump();
  throw InvalidInput("expected a number, got " + j.dump());
}

double round15(double x) {
  if (!std::isfinite(x)) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return std::strtod(buf, nullptr);
}

IngestResult instance_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("utilities")) {
    throw InvalidInput("instance JSON needs \"n\" and \"utilities\"");
  }
  if (!j.at("n").is_number_integer()) throw InvalidInput("\"n\" must be an integer");
  const auto n = j.at("n").get<long long>();
  if (n < 1 || n > std::numeric_limits<int>::max()) throw InvalidInput("\"n\" must be a positive integer");
  if (!j.at("utilities").is_array()) throw InvalidInput("\"utilities\" must be an array");
  std::vector<std::string> raw;
  for (const auto& u : j.at("utilities")) raw.push_back(number_text(u));
  return ingest_instance(std::span<const std::string>(raw), static_cast<int>(n));
}

json instance_to_json(const Instance& inst) {
  return json{{"n", inst.agents()}, {"utilities", std::vector<Utility>(inst.utilities().begin(), inst.utilities().end())}};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

json bundles_to_json(const IngestResult& ingest, const Allocation& alloc) {
  json out = json::array();
  for (std::size_t i = 0; i < alloc.agents(); ++i) {
    std::vector<std::size_t> goods;
    for (GoodIndex j : alloc.bundle(i)) goods.push_back(ingest.kept.at(j) + 1);
    if (i == 0) {
      for (GoodIndex d : ingest.dropped) goods.push_back(d + 1);
      std::sort(goods.begin(), goods.end());
    }
    out.push_back(goods);
  }
  return out;
}

Allocation bundles_from_json(const IngestResult& ingest, const json& bundles) {
  if (!bundles.is_array()) throw InvalidAllocation("\"bundles\" must be an array");
  std::size_t original_goods = ingest.kept.size() + ingest.dropped.size();
  std::vector<long long> to_kept(original_goods, -1);
  for (std::size_t k = 0; k < ingest.kept.size(); ++k) to_kept[ingest.kept[k]] = static_cast<long long>(k);
  std::vector<std::vector<GoodIndex>> out;
  std::vector<char> seen(original_goods, 0);
  for (const auto& b : bundles) {
    std::vector<GoodIndex> goods;
    for (const auto& g : b) {
      if (!g.is_number_integer()) throw InvalidAllocation("good indices must be integers");
      const auto idx = g.get<long long>();
      if (idx < 1 || static_cast<std::size_t>(idx) > original_goods) {
        throw InvalidAllocation("good index " + std::to_string(idx) + " out of range");
      }
      if (seen[idx - 1]) throw InvalidAllocation("good " + std::to_string(idx) + " assigned twice");
      seen[idx - 1] = 1;
      const long long kept = to_kept[idx - 1];
      if (kept >= 0) goods.push_back(static_cast<GoodIndex>(kept));
    }
    out.push_back(std::move(goods));
  }
  for (std::size_t j = 0; j < original_goods; ++j) {
    if (!seen[j]) throw InvalidAllocation("good " + std::to_string(j + 1) + " is not assigned");
  }
  return Allocation::from_bundles(ingest.instance, std::move(out));
}

namespace {

json rational_or_null(const std::optional<Rational>& r) {
  if (!r) return nullptr;
  return to_string(*r);
}

}  // namespace

json report_to_json(const SolveReport& report, const IngestResult& ingest, const json& source_instance) {
  const double log_scaled = report.welfare.log_value;
  const bool zero = report.welfare.is_zero();
  const double log_nsw = zero ? -std::numeric_limits<double>::infinity()
                              : log_scaled - std::log(static_cast<double>(ingest.scale));
  json out;
  out["bundles"] = bundles_to_json(ingest, report.allocation);
  out["nsw"] = zero ? 0.0 : round15(std::exp(log_nsw));
  // JSON has no infinity; an empty bundle is reported as null.
  out["log_nsw"] = zero ? json(nullptr) : json(round15(log_nsw));
  out["algorithm"] = report.algorithm;
  out["mode"] = report.mode.empty() ? json(nullptr) : json(report.mode);
  out["lb_backend"] = report.backend.empty() ? json(nullptr) : json(report.backend);
  out["eps_user"] = rational_or_null(report.eps_user);
  out["eps_internal"] = rational_or_null(report.eps_internal);
  out["profiles_enumerated"] = report.profiles_enumerated;
  out["profiles_pruned"] = report.profiles_pruned;
  out["lb_calls"] = report.lb_calls;
  out["removed_agents"] = report.removed_agents;
  out["wall_time_ms"] = std::chrono::duration<double, std::milli>(report.wall_time).count();
  out["anomaly"] = report.anomaly;
  out["warnings"] = report.warnings;
  out["scale"] = ingest.scale;
  out["instance"] = source_instance;
  return out;
}

LoadBalanceTask task_from_json(const json& j) {
  if (!j.is_object() || !j.contains("jobs") || !j.contains("machines")) {
    throw InvalidInput("task JSON needs \"jobs\" and \"machines\"");
  }
  LoadBalanceTask task;
  for (const auto& v : j.at("jobs")) {
    const Rational r = parse_rational(number_text(v));
    if (boost::multiprecision::denominator(r) != 1) throw InvalidInput("job sizes must be integers");
    task.jobs.push_back(to_int64(boost::multiprecision::numerator(r)));
  }
  for (const auto& m : j.at("machines")) {
    if (!m.contains("l") || !m.contains("u")) throw InvalidInput("machine needs \"l\" and \"u\"");
    task.machines.push_back({parse_rational(number_text(m.at("l"))), parse_rational(number_text(m.at("u")))});
  }
  task.epsilon = j.contains("eps") ? parse_rational(number_text(j.at("eps"))) : Rational(1);
  task.validate();
  return task;
}

json task_to_json(const LoadBalanceTask& task) {
  json machines = json::array();
  for (const auto& m : task.machines) machines.push_back({{"l", to_string(m.lo)}, {"u", to_string(m.hi)}});
  return json{{"jobs", task.jobs}, {"machines", machines}, {"eps", to_string(task.epsilon)}};
}

json outcome_to_json(const LoadBalanceTask& task, const LoadBalanceOutcome& outcome) {
  json out;
  out["slack"] = to_string(task.slack());
  out["machine_types"] = task.machine_types();
  if (outcome.infeasible()) {
    out["outcome"] = "infeasible";
    return out;
  }
  out["outcome"] = "assignment";
  json machines = json::array();
  for (std::size_t k = 0; k < outcome.assignment->machine_jobs.size(); ++k) {
    std::vector<std::size_t> jobs;
    for (std::size_t j : outcome.assignment->machine_jobs[k]) jobs.push_back(j + 1);
    machines.push_back({{"jobs", jobs}, {"load", outcome.assignment->loads[k]}});
  }
  out["machines"] = machines;
  out["exact"] = within_exact_intervals(task, *outcome.assignment);
  return out;
}

}  // namespace nsw
