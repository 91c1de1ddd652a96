#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "nsw/core.hpp"
#include "nsw/load_balance.hpp"
#include "nsw/ptas.hpp"

namespace nsw {

using nlohmann::json;

// {"n": int, "utilities": [number | "p/q" ...]}
IngestResult instance_from_json(const json& j);
json instance_to_json(const Instance& inst);

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

// Exact decimal text of a JSON number, or the string itself.
std::string number_text(const json& j);

// Rounds to 15 significant digits.
double round15(double x);

// Bundles in the caller's original 1-based good numbering; goods dropped at
// ingestion (zero utility) are listed with the first agent.
json bundles_to_json(const IngestResult& ingest, const Allocation& alloc);
// Inverse of bundles_to_json; every original good must appear exactly once.
Allocation bundles_from_json(const IngestResult& ingest, const json& bundles);

// {"bundles": [...], "nsw": x, "log_nsw": y} plus every report field, and
// the source instance under "instance". Welfare is reported in the caller's
// units (divided by the ingestion scale).
json report_to_json(const SolveReport& report, const IngestResult& ingest, const json& source_instance);

// {"jobs": [...], "machines": [{"l": .., "u": ..}...], "eps": "p/q"}
LoadBalanceTask task_from_json(const json& j);
json task_to_json(const LoadBalanceTask& task);
json outcome_to_json(const LoadBalanceTask& task, const LoadBalanceOutcome& outcome);

}  // namespace nsw
