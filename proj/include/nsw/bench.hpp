#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "nsw/core.hpp"
#include "nsw/ptas.hpp"

namespace nsw {

struct NamedInstance {
  std::string name;
  IngestResult ingest;
};

// Every *.json file of a directory, ordered by file name.
std::vector<NamedInstance> load_corpus(const std::filesystem::path& dir);

struct BenchConfig {
  std::vector<std::string> algos{"ptas", "greedy"};  // ptas | greedy | exact
  std::vector<Rational> eps{Rational(1, 5)};
  EpsMode mode = EpsMode::Raw;
  bool with_oracle = false;
  SolveOptions solve;
  int threads = 1;  // instances solved concurrently
};

struct BenchRow {
  std::string instance;
  std::string algo;
  std::string eps;  // empty for greedy / exact
  double nsw = 0.0;
  std::optional<double> log_nsw;
  std::optional<double> opt;
  std::optional<double> additive_gap;  // opt - nsw
  std::optional<double> mult_ratio;    // opt / nsw
  std::uint64_t lb_calls = 0;
  double wall_ms = 0.0;
  Utility vmax = 0;  // in scaled units; not a CSV column
  Utility scale = 1;
};

inline constexpr const char* kBenchHeader =
    "instance,algo,eps,nsw,log_nsw,opt,additive_gap,mult_ratio,lb_calls,wall_ms";

// Rows sorted by (instance, algo, eps). Oracle columns stay empty, with a
// warning, when the oracle is off or exceeds its size guard.
std::vector<BenchRow> run_bench(const std::vector<NamedInstance>& corpus, const BenchConfig& config,
                                std::vector<std::string>& warnings);

void write_csv(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace nsw
