// nsw: generate instances, solve them, verify reports, run benchmarks.
//
// Exit codes: 0 success, 1 solver anomaly or failed check, 2 usage error.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "nsw/baselines.hpp"
#include "nsw/bench.hpp"
#include "nsw/errors.hpp"
#include "nsw/generator.hpp"
#include "nsw/io.hpp"
#include "nsw/preprocess.hpp"
#include "nsw/ptas.hpp"

namespace {

using namespace nsw;

constexpr int kOk = 0;
constexpr int kAnomaly = 1;
constexpr int kUsage = 2;

// NSW_LB_BACKEND replaces the default backend; an explicit flag wins.
LbBackend pick_backend(const std::string& flag) {
  if (!flag.empty()) return parse_backend(flag);
  if (const char* env = std::getenv("NSW_LB_BACKEND"); env != nullptr && *env != '\0') return parse_backend(env);
  return LbBackend::Automatic;
}

void emit(const json& j, const std::string& output) {
  if (output.empty() || output == "-") {
    std::cout << j.dump(2) << '\n';
  } else {
    write_json_file(output, j);
  }
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, sep);) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// ---- gen ----

struct GenArgs {
  GeneratorSpec spec;
  std::string dist = "uniform";
  std::string output;
};

int run_gen(GenArgs& a) {
  a.spec.distribution = parse_distribution(a.dist);
  const Instance inst = generate(a.spec);
  emit(instance_to_json(inst), a.output);
  return kOk;
}

// ---- solve ----

struct SolveArgs {
  std::string algo = "ptas";
  std::string eps = "1/5";
  std::string mode = "raw";
  std::string backend;
  std::string input;
  std::string output;
  int threads = 1;
};

int run_solve(const SolveArgs& a) {
  const json source = read_json_file(a.input);
  const IngestResult ingest = instance_from_json(source);
  print_warnings(ingest.warnings);
  SolveReport report = [&] {
    if (a.algo == "greedy") return greedy(ingest.instance);
    if (a.algo == "exact") return exact_report(ingest.instance);
    if (a.algo != "ptas") throw InvalidInput("unknown algorithm '" + a.algo + "'");
    SolveOptions options{pick_backend(a.backend), a.threads};
    return max_nash_welfare(ingest.instance, parse_rational(a.eps), parse_mode(a.mode), options);
  }();
  print_warnings(report.warnings);
  emit(report_to_json(report, ingest, source), a.output);
  if (report.anomaly) {
    std::cerr << "anomaly: every profile was rejected; the arbitrary allocation was returned\n";
    return kAnomaly;
  }
  return kOk;
}

// ---- lb ----

struct LbArgs {
  std::string input;
  std::string backend;
};

int run_lb(const LbArgs& a) {
  const LoadBalanceTask task = task_from_json(read_json_file(a.input));
  const LbBackend backend = pick_backend(a.backend);
  const LoadBalanceOutcome outcome = solve(task, backend);
  json out = outcome_to_json(task, outcome);
  out["backend"] = std::string(backend_name(backend));
  std::cout << out.dump(2) << '\n';
  return kOk;
}

// ---- check ----

int run_check(const std::string& report_path) {
  const json report = read_json_file(report_path);
  if (!report.contains("instance") || !report.contains("bundles")) {
    throw InvalidInput(report_path + ": report needs \"instance\" and \"bundles\"");
  }
  const IngestResult ingest = instance_from_json(report.at("instance"));
  const Allocation alloc = bundles_from_json(ingest, report.at("bundles"));
  const bool ok = check_ef1(ingest.instance, alloc);
  std::cout << "ef1: " << (ok ? "yes" : "no") << '\n';
  return ok ? kOk : kAnomaly;
}

// ---- verify ----

struct VerifyArgs {
  std::string input;
  std::string report;
  std::string eps;
  bool oracle = false;
};

void print_removal_trace(const Instance& inst, const PreprocessResult& pre, const IngestResult& ingest) {
  BigInt total = inst.total();
  int agents = inst.agents();
  std::cout << "preprocess: " << pre.removed_agents() << " agent(s) removed\n";
  for (std::size_t r = 0; r < pre.removed_goods.size(); ++r) {
    const GoodIndex j = pre.removed_goods[r];
    const Rational mean(total, agents);
    std::cout << "  step " << r + 1 << ": good " << ingest.kept[j] + 1 << " utility " << inst.utility(j)
              << " >= mean " << to_string(mean) << " of " << agents << " agent(s) -> agent " << r + 1 << '\n';
    total -= inst.utility(j);
    --agents;
  }
  if (pre.residual) {
    std::cout << "  residual: " << pre.residual->agents() << " agent(s), " << pre.residual->goods()
              << " good(s), vmax " << pre.residual->vmax() << " < mean " << to_string(pre.residual->mean()) << '\n';
  } else {
    std::cout << "  residual: empty\n";
  }
}

// ln(f + slack) >= ln(opt), with the slack given in scaled units.
bool additive_ok(const WelfareValue& f, const WelfareValue& opt, double slack) {
  if (opt.is_zero()) return true;
  const double fv = f.is_zero() ? 0.0 : f.value();
  return std::log(fv + slack) >= opt.log_value - kLogTolerance;
}

// f * ratio >= opt for a rational ratio.
bool ratio_ok(const WelfareValue& f, const WelfareValue& opt, const Rational& ratio) {
  if (opt.is_zero()) return true;
  if (f.is_zero()) return false;
  if (f.exact_product && opt.exact_product) {
    const int n = f.agents;
    return *f.exact_product * pow(numerator(ratio), n) >= *opt.exact_product * pow(denominator(ratio), n);
  }
  return f.log_value + std::log(to_double(ratio)) >= opt.log_value - kLogTolerance;
}

int run_verify(const VerifyArgs& a) {
  const json source = read_json_file(a.input);
  const IngestResult ingest = instance_from_json(source);
  const Instance& inst = ingest.instance;
  bool ok = true;
  auto report_check = [&](const std::string& name, bool pass) {
    std::cout << (pass ? "ok   " : "FAIL ") << name << '\n';
    ok = ok && pass;
  };

  std::cout << "instance: " << inst.agents() << " agent(s), " << inst.goods() << " good(s), scale " << ingest.scale
            << '\n';
  if (inst.goods() >= static_cast<std::size_t>(inst.agents())) {
    const PreprocessResult pre = preprocess(inst);
    print_removal_trace(inst, pre, ingest);
    if (pre.residual) {
      report_check("residual vmax < mean", pre.residual->vmax_below_mean());
      report_check("preprocess idempotent", preprocess(*pre.residual).removed_agents() == 0);
    }
  } else {
    std::cout << "preprocess: skipped, fewer goods than agents\n";
  }

  if (a.report.empty()) return ok ? kOk : kAnomaly;

  const json report = read_json_file(a.report);
  const Allocation alloc = bundles_from_json(ingest, report.at("bundles"));
  report_check("bundles partition the goods", true);
  const WelfareValue f = nash_welfare(inst, alloc);
  const double nsw = f.is_zero() ? 0.0 : std::exp(f.log_value - std::log(static_cast<double>(ingest.scale)));
  const double claimed = report.at("nsw").get<double>();
  report_check("reported nsw matches bundles", std::abs(nsw - claimed) <= 1e-12 * std::max(1.0, std::abs(nsw)));

  const std::string algo = report.value("algorithm", "");
  std::optional<Rational> eps_internal;
  if (report.contains("eps_internal") && report.at("eps_internal").is_string()) {
    eps_internal = parse_rational(report.at("eps_internal").get<std::string>());
  }
  if (!a.eps.empty()) {
    const Rational expect = normalize_eps(parse_rational(a.eps));
    if (eps_internal) report_check("eps matches --eps", *eps_internal == expect);
    eps_internal = expect;
  }

  if (!a.oracle) return ok ? kOk : kAnomaly;
  std::optional<OracleResult> opt;
  try {
    opt = brute_force_opt(inst);
  } catch (const CapacityError& e) {
    std::cout << "oracle skipped: " << e.what() << '\n';
    return ok ? kOk : kAnomaly;
  }
  const double opt_value = opt->opt_value.is_zero()
                               ? 0.0
                               : std::exp(opt->opt_value.log_value - std::log(static_cast<double>(ingest.scale)));
  std::cout << "oracle: OPT " << opt_value << ", gap " << opt_value - nsw << '\n';
  report_check("welfare at most OPT", compare(f, opt->opt_value) != std::partial_ordering::greater);
  if (algo == "exact") {
    report_check("exact equals OPT", compare(f, opt->opt_value) == std::partial_ordering::equivalent);
  } else if (algo == "greedy") {
    report_check("greedy within 1.061 of OPT", ratio_ok(f, opt->opt_value, Rational(1061, 1000)));
  } else if (algo == "ptas" && eps_internal) {
    const double slack = 192.0 * to_double(*eps_internal) * static_cast<double>(inst.vmax());
    report_check("ptas within 192 eps vmax of OPT", additive_ok(f, opt->opt_value, slack));
  }
  return ok ? kOk : kAnomaly;
}

// ---- bench ----

struct BenchArgs {
  std::string corpus;
  std::string algos = "ptas,greedy";
  std::string eps = "1/5";
  std::string mode = "raw";
  std::string backend;
  std::string output;
  bool with_oracle = false;
  int threads = 1;
};

int run_bench_cmd(const BenchArgs& a) {
  BenchConfig config;
  config.algos = split(a.algos, ',');
  config.eps.clear();
  for (const auto& e : split(a.eps, ',')) config.eps.push_back(parse_rational(e));
  config.mode = parse_mode(a.mode);
  config.with_oracle = a.with_oracle;
  config.solve.backend = pick_backend(a.backend);
  config.threads = a.threads;
  std::vector<std::string> warnings;
  const auto rows = run_bench(load_corpus(a.corpus), config, warnings);
  print_warnings(warnings);
  if (a.output.empty() || a.output == "-") {
    write_csv(std::cout, rows);
  } else {
    std::ofstream out(a.output);
    if (!out) throw InvalidInput("cannot write " + a.output);
    write_csv(out, rows);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nash social welfare for identical additive valuations"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Write a random instance as JSON");
  gen_cmd->add_option("--n", gen.spec.agents, "agents")->required();
  gen_cmd->add_option("--m", gen.spec.goods, "goods")->required();
  gen_cmd->add_option("--dist", gen.dist, "uniform | power-law | with-big-goods")->capture_default_str();
  gen_cmd->add_option("--lo", gen.spec.lo, "uniform lower bound")->capture_default_str();
  gen_cmd->add_option("--hi", gen.spec.hi, "uniform upper bound")->capture_default_str();
  gen_cmd->add_option("--alpha", gen.spec.alpha, "power-law exponent")->capture_default_str();
  gen_cmd->add_option("--cap", gen.spec.cap, "power-law cap")->capture_default_str();
  gen_cmd->add_option("--count", gen.spec.big_count, "planted big goods")->capture_default_str();
  gen_cmd->add_option("--factor", gen.spec.big_factor, "big-good multiple of the mean")->capture_default_str();
  gen_cmd->add_option("--seed", gen.spec.seed, "64-bit seed")->capture_default_str();
  gen_cmd->add_option("--output,-o", gen.output, "output file (stdout if omitted)");

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "Solve an instance and write a report");
  solve_cmd->add_option("--algo", solve_args.algo, "ptas | greedy | exact")->capture_default_str();
  solve_cmd->add_option("--eps", solve_args.eps, "accuracy as p/q or decimal")->capture_default_str();
  solve_cmd->add_option("--mode", solve_args.mode, "raw | guarantee")->capture_default_str();
  solve_cmd->add_option("--lb-backend", solve_args.backend, "exact | relaxed | auto (default: $NSW_LB_BACKEND or auto)");
  solve_cmd->add_option("--input,-i", solve_args.input, "instance JSON")->required();
  solve_cmd->add_option("--output,-o", solve_args.output, "report JSON (stdout if omitted)");
  solve_cmd->add_option("--threads", solve_args.threads, "profile worker threads")->capture_default_str();

  LbArgs lb;
  auto* lb_cmd = app.add_subcommand("lb", "Solve one target load-balancing task");
  lb_cmd->add_option("--input,-i", lb.input, "task JSON")->required();
  lb_cmd->add_option("--backend", lb.backend, "exact | relaxed | auto (default: $NSW_LB_BACKEND or auto)");

  std::string ef1_report;
  auto* check_cmd = app.add_subcommand("check", "Check a report's allocation");
  check_cmd->add_option("--ef1", ef1_report, "report JSON to test for EF1")->required();

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Print the preprocessing trace and validate a report");
  verify_cmd->add_option("--input,-i", verify.input, "instance JSON")->required();
  verify_cmd->add_option("--report", verify.report, "report JSON to validate");
  verify_cmd->add_option("--eps", verify.eps, "expected accuracy");
  verify_cmd->add_flag("--oracle", verify.oracle, "compare against the exhaustive optimum");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Benchmark a corpus of instances as CSV");
  bench_cmd->footer(std::string("CSV columns: ") + kBenchHeader +
                    "\n  additive_gap = opt - nsw, mult_ratio = opt / nsw; opt columns need --with-oracle.");
  bench_cmd->add_option("--corpus", bench.corpus, "directory of instance JSON files")->required();
  bench_cmd->add_option("--algos", bench.algos, "comma-separated: ptas, greedy, exact")->capture_default_str();
  bench_cmd->add_option("--eps", bench.eps, "comma-separated accuracies for ptas")->capture_default_str();
  bench_cmd->add_option("--mode", bench.mode, "raw | guarantee")->capture_default_str();
  bench_cmd->add_option("--lb-backend", bench.backend, "exact | relaxed | auto");
  bench_cmd->add_flag("--with-oracle", bench.with_oracle, "fill opt, additive_gap and mult_ratio");
  bench_cmd->add_option("--threads", bench.threads, "instances solved in parallel")->capture_default_str();
  bench_cmd->add_option("--output,-o", bench.output, "CSV file (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*solve_cmd) return run_solve(solve_args);
    if (*lb_cmd) return run_lb(lb);
    if (*check_cmd) return run_check(ef1_report);
    if (*verify_cmd) return run_verify(verify);
    if (*bench_cmd) return run_bench_cmd(bench);
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kAnomaly;
  }
  return kUsage;
}
