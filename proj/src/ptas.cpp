#include "nsw/ptas.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "nsw/errors.hpp"
#include "nsw/preprocess.hpp"

namespace nsw {

namespace {

bool unit_fraction(const Rational& eps) {
  return eps > 0 && boost::multiprecision::numerator(eps) == 1;
}

}  // namespace

LevelGrid build_grid(const Instance& inst, const Rational& eps) {
  if (!unit_fraction(eps)) {
    throw PreconditionError("grid needs 1/eps to be a positive integer, got eps = " + to_string(eps));
  }
  if (!inst.vmax_below_mean()) {
    const auto u = inst.utilities();
    const auto it = std::max_element(u.begin(), u.end());
    throw PreconditionError("grid needs vmax < mu, but good " + std::to_string(it - u.begin() + 1) + " has utility " +
                            std::to_string(inst.vmax()) + " >= mu = " + to_string(inst.mean()));
  }
  LevelGrid g;
  g.eps = eps;
  g.mu = inst.mean();
  g.vmax = Rational(inst.vmax());
  const BigInt steps = 2 * boost::multiprecision::denominator(eps);
  if (steps > 1'000'000) throw CapacityError("grid with " + steps.str() + " levels is too large");
  const std::size_t count = steps.convert_to<std::size_t>();
  const Rational spacing = g.spacing();
  const Rational first = g.mu - g.vmax;
  g.scale = to_int64(BigInt(inst.agents()) * boost::multiprecision::denominator(eps));
  g.levels.reserve(count);
  g.scaled_levels.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    g.levels.push_back(first + spacing * i);
    g.scaled_levels.push_back(to_int64(boost::multiprecision::numerator(Rational(g.levels.back() * g.scale))));
  }
  return g;
}

int Profile::agents() const {
  int n = 0;
  for (int c : counts) n += c;
  return n;
}

std::vector<std::size_t> Profile::agent_levels() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < counts.size(); ++i) out.insert(out.end(), counts[i], i);
  return out;
}

Profile profile_of(std::span<const std::size_t> agent_levels, std::size_t grid_size) {
  Profile p;
  p.counts.assign(grid_size, 0);
  for (std::size_t level : agent_levels) {
    if (level >= grid_size) throw InvalidInput("level index outside the grid");
    ++p.counts[level];
  }
  return p;
}

namespace {

bool enumerate_from(Profile& p, std::size_t pos, int left, const std::function<bool(const Profile&)>& visit) {
  if (pos + 1 == p.counts.size()) {
    p.counts[pos] = left;
    const bool go_on = visit(p);
    p.counts[pos] = 0;
    return go_on;
  }
  for (int c = 0; c <= left; ++c) {
    p.counts[pos] = c;
    if (!enumerate_from(p, pos + 1, left - c, visit)) {
      p.counts[pos] = 0;
      return false;
    }
  }
  p.counts[pos] = 0;
  return true;
}

}  // namespace

void enumerate_profiles(int agents, std::size_t grid_size, const std::function<bool(const Profile&)>& visit) {
  if (agents < 0) throw InvalidInput("negative agent count");
  if (grid_size == 0) {
    if (agents == 0) visit(Profile{});
    return;
  }
  Profile p;
  p.counts.assign(grid_size, 0);
  enumerate_from(p, 0, agents, visit);
}

BigInt profile_count(int agents, std::size_t grid_size) {
  if (grid_size == 0) return agents == 0 ? 1 : 0;
  // C(agents + grid_size - 1, agents), built incrementally to stay integral.
  BigInt r = 1;
  for (int k = 1; k <= agents; ++k) {
    r = r * (BigInt(grid_size) - 1 + k) / k;
  }
  return r;
}

bool prune_profile(const Profile& profile, const LevelGrid& grid, const Instance& inst) {
  using wide = __int128;
  wide low = 0;
  for (std::size_t i = 0; i < profile.counts.size(); ++i) {
    if (profile.counts[i] != 0) low += static_cast<wide>(profile.counts[i]) * grid.scaled_levels[i];
  }
  // spacing * scale = vmax * agents
  const wide spacing = static_cast<wide>(inst.vmax()) * inst.agents();
  const wide high = low + spacing * profile.agents();
  const wide total = static_cast<wide>(inst.total()) * grid.scale;
  return low > total || high < total;
}

namespace {

LoadBalanceTask task_for_levels(std::span<const std::size_t> agent_levels, const LevelGrid& grid, const Instance& inst) {
  LoadBalanceTask task;
  task.jobs.assign(inst.utilities().begin(), inst.utilities().end());
  task.epsilon = grid.eps;
  const Rational spacing = grid.spacing();
  for (std::size_t level : agent_levels) {
    task.machines.push_back({grid.levels[level], grid.levels[level] + spacing});
  }
  return task;
}

}  // namespace

LoadBalanceTask profile_task(const Profile& profile, const LevelGrid& grid, const Instance& inst) {
  return task_for_levels(profile.agent_levels(), grid, inst);
}

std::optional<std::size_t> bracketing_level(const LevelGrid& grid, const Rational& value) {
  if (grid.levels.empty()) return std::nullopt;
  const Rational offset = (value - grid.levels.front()) / grid.spacing();
  if (offset < 0) return std::nullopt;
  BigInt index = floor_of(offset);
  if (index >= grid.size()) {
    // The top window's upper end still belongs to the last level.
    if (offset == grid.size()) index = grid.size() - 1;
    else return std::nullopt;
  }
  return index.convert_to<std::size_t>();
}

Rational normalize_eps(const Rational& eps) {
  if (eps <= 0) throw InvalidInput("eps must be positive");
  return Rational(BigInt(1), ceil_of(1 / eps));
}

Rational guarantee_eps(const Rational& eps) {
  if (eps <= 0) throw InvalidInput("eps must be positive");
  return Rational(BigInt(1), ceil_of(std::max(Rational(192), Rational(192) / eps)));
}

EpsMode parse_mode(std::string_view name) {
  if (name == "raw") return EpsMode::Raw;
  if (name == "guarantee") return EpsMode::Guarantee;
  throw InvalidInput("unknown mode '" + std::string(name) + "'");
}

namespace {

struct Candidate {
  std::uint64_t order = 0;
  Allocation allocation;
  WelfareValue welfare;
};

// Higher welfare wins; equal welfare goes to the earlier profile.
bool better(const Candidate& a, const std::optional<Candidate>& b) {
  if (!b) return true;
  const auto c = compare(a.welfare, b->welfare);
  if (c == std::partial_ordering::greater) return true;
  if (c == std::partial_ordering::less) return false;
  return a.order < b->order;
}

Allocation arbitrary_allocation(const Instance& inst) {
  std::vector<int> owner(inst.goods());
  for (std::size_t j = 0; j < owner.size(); ++j) owner[j] = static_cast<int>(j % inst.agents());
  return Allocation::from_assignment(inst, owner);
}

}  // namespace

SolveReport main_procedure(const Instance& inst, const Rational& eps, const SolveOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  SolveReport report;
  report.algorithm = "ptas";
  report.eps_internal = normalize_eps(eps);
  report.backend = std::string(backend_name(options.backend));
  const LevelGrid grid = build_grid(inst, *report.eps_internal);

  struct Pending {
    std::uint64_t order;
    std::vector<std::size_t> levels;
  };
  std::vector<Pending> pending;
  std::uint64_t order = 0;
  enumerate_profiles(inst.agents(), grid.size(), [&](const Profile& p) {
    if (prune_profile(p, grid, inst)) {
      ++report.profiles_pruned;
    } else {
      pending.push_back({order, p.agent_levels()});
    }
    ++order;
    return true;
  });
  report.profiles_enumerated = order;
  report.lb_calls = pending.size();

  auto evaluate = [&](const Pending& item) -> std::optional<Candidate> {
    const LoadBalanceOutcome outcome = solve(task_for_levels(item.levels, grid, inst), options.backend);
    if (outcome.infeasible()) return std::nullopt;
    Candidate c;
    c.order = item.order;
    c.allocation = Allocation::from_bundles(inst, outcome.assignment->machine_jobs);
    c.welfare = welfare_of(c.allocation.valuations());
    return c;
  };

  std::optional<Candidate> best;
  const std::size_t workers = std::clamp<std::size_t>(options.threads, 1, std::max<std::size_t>(pending.size(), 1));
  if (workers <= 1) {
    for (const auto& item : pending) {
      auto c = evaluate(item);
      if (c && better(*c, best)) best = std::move(c);
    }
  } else {
    std::vector<std::optional<Candidate>> local(workers);
    std::vector<std::exception_ptr> errors(workers);
    std::atomic<std::size_t> next{0};
    {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            for (std::size_t i = next++; i < pending.size(); i = next++) {
              auto c = evaluate(pending[i]);
              if (c && better(*c, local[w])) local[w] = std::move(c);
            }
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    for (auto& c : local) {
      if (c && better(*c, best)) best = std::move(c);
    }
  }

  if (best) {
    report.allocation = std::move(best->allocation);
  } else {
    report.allocation = arbitrary_allocation(inst);
    report.anomaly = true;
    report.warnings.push_back("every profile was rejected by load balancing; returning an arbitrary allocation");
  }
  report.welfare = nash_welfare(inst, report.allocation);
  report.wall_time = std::chrono::steady_clock::now() - start;
  return report;
}

SolveReport max_nash_welfare(const Instance& inst, const Rational& eps_user, EpsMode mode, const SolveOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  if (eps_user <= 0) throw InvalidInput("eps must be positive");
  const Rational eps = mode == EpsMode::Guarantee ? guarantee_eps(eps_user) : normalize_eps(eps_user);

  SolveReport report;
  if (inst.goods() < static_cast<std::size_t>(inst.agents())) {
    // Some agent must go empty-handed: every allocation has welfare zero.
    report.algorithm = "ptas";
    report.backend = std::string(backend_name(options.backend));
    report.allocation = arbitrary_allocation(inst);
  } else {
    const PreprocessResult pre = preprocess(inst);
    std::optional<Allocation> residual_alloc;
    if (pre.residual) {
      report = main_procedure(*pre.residual, eps, options);
      residual_alloc = std::move(report.allocation);
    } else {
      report.algorithm = "ptas";
      report.backend = std::string(backend_name(options.backend));
    }
    report.allocation = recombine(inst, pre, residual_alloc);
    report.removed_agents = pre.removed_agents();
  }
  report.eps_user = eps_user;
  report.eps_internal = eps;
  report.mode = mode == EpsMode::Guarantee ? "guarantee" : "raw";
  if (mode == EpsMode::Guarantee) {
    report.warnings.insert(report.warnings.begin(),
                           "guarantee mode uses eps = " + to_string(eps) +
                               "; profile enumeration grows exponentially in 1/eps");
  }
  report.welfare = nash_welfare(inst, report.allocation);
  report.wall_time = std::chrono::steady_clock::now() - start;
  return report;
}

}  // namespace nsw
