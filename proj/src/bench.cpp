#include "nsw/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>
#include <tuple>

#include "nsw/baselines.hpp"
#include "nsw/errors.hpp"
#include "nsw/io.hpp"

namespace nsw {

std::vector<NamedInstance> load_corpus(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw InvalidInput(dir.string() + " is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<NamedInstance> out;
  for (const auto& f : files) out.push_back({f.stem().string(), instance_from_json(read_json_file(f))});
  return out;
}

namespace {

BenchRow make_row(const NamedInstance& item, const std::string& algo, const std::string& eps, const SolveReport& r,
                  const std::optional<WelfareValue>& opt) {
  BenchRow row;
  row.instance = item.name;
  row.algo = algo;
  row.eps = eps;
  row.lb_calls = r.lb_calls;
  row.wall_ms = std::chrono::duration<double, std::milli>(r.wall_time).count();
  row.vmax = item.ingest.instance.vmax();
  row.scale = item.ingest.scale;
  const double log_scale = std::log(static_cast<double>(item.ingest.scale));
  if (!r.welfare.is_zero()) {
    row.log_nsw = r.welfare.log_value - log_scale;
    row.nsw = std::exp(*row.log_nsw);
  }
  if (opt) {
    row.opt = opt->is_zero() ? 0.0 : std::exp(opt->log_value - log_scale);
    if (compare(r.welfare, *opt) == std::partial_ordering::equivalent) {
      row.additive_gap = 0.0;
      row.mult_ratio = 1.0;
    } else {
      row.additive_gap = *row.opt - row.nsw;
      row.mult_ratio = row.nsw > 0.0 ? *row.opt / row.nsw : INFINITY;
    }
  }
  return row;
}

}  // namespace

std::vector<BenchRow> run_bench(const std::vector<NamedInstance>& corpus, const BenchConfig& config,
                                std::vector<std::string>& warnings) {
  for (const auto& a : config.algos) {
    if (a != "ptas" && a != "greedy" && a != "exact") throw InvalidInput("unknown algorithm '" + a + "'");
  }
  if (!config.with_oracle) warnings.push_back("oracle disabled: opt, additive_gap and mult_ratio left empty");

  std::vector<BenchRow> rows;
  std::mutex lock;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;

  auto work = [&] {
    for (std::size_t i = next++; i < corpus.size(); i = next++) {
      const NamedInstance& item = corpus[i];
      const Instance& inst = item.ingest.instance;
      std::optional<WelfareValue> opt;
      std::vector<BenchRow> local;
      std::vector<std::string> notes;
      try {
        if (config.with_oracle) {
          try {
            opt = brute_force_opt(inst).opt_value;
          } catch (const CapacityError& e) {
            notes.push_back(item.name + ": " + e.what() + "; oracle columns left empty");
          }
        }
        for (const auto& algo : config.algos) {
          if (algo == "ptas") {
            for (const auto& eps : config.eps) {
              local.push_back(make_row(item, algo, to_string(eps), max_nash_welfare(inst, eps, config.mode, config.solve), opt));
            }
          } else if (algo == "greedy") {
            local.push_back(make_row(item, algo, "", greedy(inst), opt));
          } else {
            local.push_back(make_row(item, algo, "", exact_report(inst), opt));
          }
        }
      } catch (...) {
        std::lock_guard g(lock);
        if (!failure) failure = std::current_exception();
        return;
      }
      std::lock_guard g(lock);
      rows.insert(rows.end(), local.begin(), local.end());
      warnings.insert(warnings.end(), notes.begin(), notes.end());
    }
  };

  const int threads = std::max(1, config.threads);
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  std::sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
    return std::tie(a.instance, a.algo, a.eps) < std::tie(b.instance, b.algo, b.eps);
  });
  std::sort(warnings.begin() + (config.with_oracle ? 0 : 1), warnings.end());
  return rows;
}

namespace {

std::string cell(const std::optional<double>& x) {
  if (!x) return "";
  if (std::isinf(*x)) return *x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", *x);
  return buf;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << kBenchHeader << '\n';
  for (const auto& r : rows) {
    out << r.instance << ',' << r.algo << ',' << r.eps << ',' << cell(r.nsw) << ',' << cell(r.log_nsw) << ','
        << cell(r.opt) << ',' << cell(r.additive_gap) << ',' << cell(r.mult_ratio) << ',' << r.lb_calls << ','
        << cell(r.wall_ms) << '\n';
  }
}

}  // namespace nsw
