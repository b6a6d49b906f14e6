#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "qcl/allocator.hpp"
#include "qcl/confidence_fn.hpp"
#include "qcl/fault_tree.hpp"
#include "qcl/rng.hpp"

namespace qcl {

/// Benchmark of predicted confidence gain: random fault trees and spending
/// profiles, each strategy distributing the same budgets, scored by the
/// predicted system confidence.
struct Rq1Config {
  int n_fts = 0;
  int n_sps = 0;
  double sp_lo = 0.0;
  double sp_hi = 0.0;
  std::vector<double> budgets;
  int ft_leaves = 6;
  ConfidenceExpr conf_family = builtin(Exponential{0.99, 1.0});
  std::uint64_t seed = 0;
};

/// Benchmark of realized reliability: hidden faults are seeded per
/// component, testing is simulated under each strategy's split, and the
/// score is the average system reliability after fault removal.
struct Rq2Config {
  int n_fts = 0;
  int n_sps = 0;
  int n_fds = 0;
  int n_runs = 0;
  double sp_lo = 0.0;
  double sp_hi = 0.0;
  std::vector<double> budgets;
  double test_cost = 10.0;
  double observability = 0.1;
  std::uint64_t seed = 0;
};

// The reliability benchmark reuses the same tree size and confidence family
// as the confidence benchmark.
inline constexpr int kRq2FtLeaves = 6;
inline ConfidenceExpr rq2_conf_family() { return builtin(Exponential{0.99, 1.0}); }

/// Hidden fault counts per component.
struct FaultAssignment {
  std::map<std::string, int> faults;
};

/// One aggregated line of a benchmark: the mean score of a strategy at one
/// budget, its relative difference to the annealing strategy, and the
/// standard error over instances.
struct ExperimentRow {
  double budget = 0.0;
  std::string strategy;
  double score = 0.0;
  double rel_diff_pct = 0.0;
  double std_error = 0.0;
  int n_instances = 0;
};

inline void validate(const Rq1Config& cfg) {
  if (cfg.n_fts < 1 || cfg.n_sps < 1) throw BadParameter("need n_fts, n_sps >= 1");
  if (cfg.ft_leaves < 2) throw BadParameter("need ft_leaves >= 2");
  if (!(cfg.sp_lo < cfg.sp_hi)) throw BadParameter("sp range must satisfy lo < hi");
  if (cfg.budgets.empty()) throw BadParameter("budget list is empty");
  for (size_t i = 0; i < cfg.budgets.size(); ++i) {
    if (cfg.budgets[i] < 0.0) throw BadParameter("budgets must be >= 0");
    if (i > 0 && cfg.budgets[i] < cfg.budgets[i - 1]) {
      throw BadParameter("budgets must be sorted");
    }
  }
}

inline void validate(const Rq2Config& cfg) {
  if (cfg.n_fts < 1 || cfg.n_sps < 1 || cfg.n_fds < 1 || cfg.n_runs < 1) {
    throw BadParameter("need n_fts, n_sps, n_fds, n_runs >= 1");
  }
  if (!(cfg.sp_lo < cfg.sp_hi)) throw BadParameter("sp range must satisfy lo < hi");
  if (cfg.budgets.empty()) throw BadParameter("budget list is empty");
  for (size_t i = 0; i < cfg.budgets.size(); ++i) {
    if (cfg.budgets[i] < 0.0) throw BadParameter("budgets must be >= 0");
    if (i > 0 && cfg.budgets[i] < cfg.budgets[i - 1]) {
      throw BadParameter("budgets must be sorted");
    }
  }
  if (!(cfg.test_cost > 0.0)) throw BadParameter("test_cost must be > 0");
  if (!(cfg.observability > 0.0 && cfg.observability <= 1.0)) {
    throw BadParameter("observability must be in (0,1]");
  }
}

namespace detail {

inline const std::vector<std::string>& strategy_order() {
  static const std::vector<std::string> order{"sa", "uniform", "proportional"};
  return order;
}

inline AllocationResult run_strategy(const AllocationProblem& problem,
                                     const std::string& strategy,
                                     std::uint64_t seed) {
  if (strategy == "sa") return solve_sa(problem, SAParams{}, seed);
  if (strategy == "uniform") return solve_uniform(problem);
  if (strategy == "proportional") return solve_proportional(problem);
  throw BadParameter("unknown strategy '" + strategy + "'");
}

/// Kahan-compensated accumulator for per-(budget, strategy) scores.
struct ScoreAccumulator {
  double sum = 0.0;
  double compensation = 0.0;
  double sum_squares = 0.0;
  int count = 0;

  void add(double value) {
    const double y = value - compensation;
    const double t = sum + y;
    compensation = (t - sum) - y;
    sum = t;
    sum_squares += value * value;
    ++count;
  }

  double mean() const { return count == 0 ? 0.0 : sum / count; }

  double std_error() const {
    if (count < 2) return 0.0;
    const double m = mean();
    double variance = (sum_squares - static_cast<double>(count) * m * m) /
                      static_cast<double>(count - 1);
    variance = std::max(variance, 0.0);
    return std::sqrt(variance / static_cast<double>(count));
  }
};

inline std::vector<ExperimentRow> rows_from_accumulators(
    const std::vector<double>& budgets,
    const std::vector<std::vector<ScoreAccumulator>>& acc) {
  std::vector<ExperimentRow> rows;
  const auto& strategies = strategy_order();
  for (size_t b = 0; b < budgets.size(); ++b) {
    const double sa_mean = acc[b][0].mean();
    for (size_t s = 0; s < strategies.size(); ++s) {
      ExperimentRow row;
      row.budget = budgets[b];
      row.strategy = strategies[s];
      row.score = acc[b][s].mean();
      row.std_error = acc[b][s].std_error();
      row.n_instances = acc[b][s].count;
      const double headroom = 1.0 - sa_mean;
      row.rel_diff_pct = (s == 0 || headroom <= 0.0)
                             ? 0.0
                             : 100.0 * (row.score - sa_mean) / headroom;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace detail

/// Predicted-confidence benchmark. For every (fault tree, spending profile,
/// budget, strategy) the strategy's split is scored with the allocation
/// objective; scores aggregate into one row per (budget, strategy).
/// Fully deterministic in the seed.
inline std::vector<ExperimentRow> run_rq1(const Rq1Config& cfg) {
  validate(cfg);
  const auto& strategies = detail::strategy_order();
  std::vector<std::vector<detail::ScoreAccumulator>> acc(
      cfg.budgets.size(), std::vector<detail::ScoreAccumulator>(strategies.size()));

  for (int ift = 0; ift < cfg.n_fts; ++ift) {
    const FaultTree ft = random_ft(cfg.ft_leaves, mix_seed(cfg.seed, {1, (std::uint64_t)ift}));
    const std::vector<std::string> leaves = basic_events(ft);
    for (int isp = 0; isp < cfg.n_sps; ++isp) {
      Rng sp_rng(mix_seed(cfg.seed, {2, (std::uint64_t)ift, (std::uint64_t)isp}));
      std::vector<ComponentModel> components;
      components.reserve(leaves.size());
      for (const std::string& leaf : leaves) {
        components.push_back({leaf, cfg.conf_family, sp_rng.uniform(cfg.sp_lo, cfg.sp_hi)});
      }
      for (size_t b = 0; b < cfg.budgets.size(); ++b) {
        AllocationProblem problem{ft, components, cfg.budgets[b]};
        for (size_t s = 0; s < strategies.size(); ++s) {
          const std::uint64_t solver_seed = mix_seed(
              cfg.seed, {3, (std::uint64_t)ift, (std::uint64_t)isp, (std::uint64_t)b});
          acc[b][s].add(
              detail::run_strategy(problem, strategies[s], solver_seed).predicted_after);
        }
      }
    }
  }
  return detail::rows_from_accumulators(cfg.budgets, acc);
}

/// Samples one hidden fault count per component: geometrically distributed
/// with P(N = k) = (1-c)^k c where c is the component's current confidence,
/// so higher confidence means fewer faults on average (mean (1-c)/c).
inline FaultAssignment seed_faults(const std::map<std::string, double>& sp,
                                   const ConfidenceExpr& conf_family,
                                   std::uint64_t rng_seed) {
  Rng rng(rng_seed);
  FaultAssignment fa;
  for (const auto& [name, spent] : sp) {
    const double c = evaluate(conf_family, spent);
    if (c == 0.0) {
      throw DegenerateConfidence("component '" + name +
                                 "' has zero confidence, fault count has no mean");
    }
    fa.faults[name] = static_cast<int>(rng.geometric(c));
  }
  return fa;
}

/// Chance that one fault survives testing a component with r resources:
/// floor(r / cost) full tests each miss it with probability 1 - obs, and the
/// leftover budget runs one partial test with proportionally reduced
/// detection chance.
inline double fault_survival_prob(double r, double test_cost, double observability) {
  const long long full_tests = static_cast<long long>(std::floor(r / test_cost));
  const double leftover = r - static_cast<double>(full_tests) * test_cost;
  double survive = std::pow(1.0 - observability, static_cast<double>(full_tests));
  survive *= 1.0 - observability * (leftover / test_cost);
  return survive;
}

/// Simulates the testing phase: every fault of every component survives each
/// test independently. Returns the surviving fault counts; never increases
/// any count. Components without a split entry receive no testing.
inline FaultAssignment simulate_testing(const FaultAssignment& fa, const Split& split,
                                        double test_cost, double observability,
                                        std::uint64_t rng_seed) {
  Rng rng(rng_seed);
  FaultAssignment out;
  for (const auto& [name, count] : fa.faults) {
    auto it = split.find(name);
    const double r = it == split.end() ? 0.0 : it->second;
    const double survive = fault_survival_prob(r, test_cost, observability);
    int remaining = 0;
    for (int fault = 0; fault < count; ++fault) {
      if (rng.bernoulli(survive)) ++remaining;
    }
    out.faults[name] = remaining;
  }
  return out;
}

/// System reliability in operation: a component with n' residual faults
/// fails with probability 1 - (1-obs)^n', and component failures propagate
/// through the fault tree classically.
inline double system_reliability(const FaultTree& ft, const FaultAssignment& fa,
                                 double observability) {
  std::map<std::string, double> leaf_failure;
  for (const std::string& name : basic_events(ft)) {
    auto it = fa.faults.find(name);
    if (it == fa.faults.end()) {
      throw UnknownBasicEvent("no fault count for basic event '" + name + "'");
    }
    leaf_failure[name] =
        1.0 - std::pow(1.0 - observability, static_cast<double>(it->second));
  }
  return 1.0 - failure_prob(ft, leaf_failure);
}

/// Realized-reliability benchmark: allocate per (tree, spending profile,
/// budget, strategy), then for every fault distribution simulate the testing
/// phase n_runs times and average the resulting system reliability.
/// One instance = one (tree, profile, distribution) triple.
inline std::vector<ExperimentRow> run_rq2(const Rq2Config& cfg) {
  validate(cfg);
  const auto& strategies = detail::strategy_order();
  const ConfidenceExpr family = rq2_conf_family();
  std::vector<std::vector<detail::ScoreAccumulator>> acc(
      cfg.budgets.size(), std::vector<detail::ScoreAccumulator>(strategies.size()));

  for (int ift = 0; ift < cfg.n_fts; ++ift) {
    const FaultTree ft = random_ft(kRq2FtLeaves, mix_seed(cfg.seed, {11, (std::uint64_t)ift}));
    const std::vector<std::string> leaves = basic_events(ft);
    for (int isp = 0; isp < cfg.n_sps; ++isp) {
      Rng sp_rng(mix_seed(cfg.seed, {12, (std::uint64_t)ift, (std::uint64_t)isp}));
      std::map<std::string, double> sp;
      std::vector<ComponentModel> components;
      components.reserve(leaves.size());
      for (const std::string& leaf : leaves) {
        const double spent = sp_rng.uniform(cfg.sp_lo, cfg.sp_hi);
        sp[leaf] = spent;
        components.push_back({leaf, family, spent});
      }

      // Allocations are shared by all fault distributions of this instance.
      std::vector<std::vector<Split>> splits(cfg.budgets.size());
      for (size_t b = 0; b < cfg.budgets.size(); ++b) {
        AllocationProblem problem{ft, components, cfg.budgets[b]};
        for (size_t s = 0; s < strategies.size(); ++s) {
          const std::uint64_t solver_seed = mix_seed(
              cfg.seed, {13, (std::uint64_t)ift, (std::uint64_t)isp, (std::uint64_t)b});
          splits[b].push_back(
              detail::run_strategy(problem, strategies[s], solver_seed).split);
        }
      }

      for (int ifd = 0; ifd < cfg.n_fds; ++ifd) {
        const FaultAssignment fa = seed_faults(
            sp, family,
            mix_seed(cfg.seed, {14, (std::uint64_t)ift, (std::uint64_t)isp, (std::uint64_t)ifd}));
        for (size_t b = 0; b < cfg.budgets.size(); ++b) {
          for (size_t s = 0; s < strategies.size(); ++s) {
            detail::ScoreAccumulator over_runs;
            for (int run = 0; run < cfg.n_runs; ++run) {
              const std::uint64_t run_seed =
                  mix_seed(cfg.seed, {15, (std::uint64_t)ift, (std::uint64_t)isp,
                                      (std::uint64_t)ifd, (std::uint64_t)b,
                                      (std::uint64_t)s, (std::uint64_t)run});
              const FaultAssignment after = simulate_testing(
                  fa, splits[b][s], cfg.test_cost, cfg.observability, run_seed);
              over_runs.add(system_reliability(ft, after, cfg.observability));
            }
            acc[b][s].add(over_runs.mean());
          }
        }
      }
    }
  }
  return detail::rows_from_accumulators(cfg.budgets, acc);
}

namespace detail {

inline std::string format_number(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.9g", v);
  return buffer;
}

}  // namespace detail

/// CSV output, one row per (budget, strategy), gnuplot/spreadsheet-ready.
inline void write_csv(std::ostream& os, std::string_view experiment,
                      const std::vector<ExperimentRow>& rows) {
  os << "experiment,budget,strategy,score,rel_diff_pct,stderr,n_instances\n";
  for (const ExperimentRow& row : rows) {
    os << experiment << ',' << detail::format_number(row.budget) << ','
       << row.strategy << ',' << detail::format_number(row.score) << ','
       << detail::format_number(row.rel_diff_pct) << ','
       << detail::format_number(row.std_error) << ',' << row.n_instances << '\n';
  }
}

}  // namespace qcl
