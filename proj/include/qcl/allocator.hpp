#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qcl/confidence_fn.hpp"
#include "qcl/fault_tree.hpp"
#include "qcl/rng.hpp"

namespace qcl {

/// Budget split over components, keyed by basic-event name.
using Split = std::map<std::string, double>;

/// The optimization instance: a system architecture, one confidence model
/// per basic event, and the testing budget to distribute.
struct AllocationProblem {
  FaultTree ft;
  std::vector<ComponentModel> components;
  double budget = 0.0;
};

inline void validate_problem(const AllocationProblem& problem) {
  validate_ft(problem.ft);
  if (problem.budget < 0.0) throw BadParameter("budget must be >= 0");
  if (problem.components.empty()) throw BadParameter("no components given");

  std::set<std::string> leaves;
  for (const std::string& name : basic_events(problem.ft)) leaves.insert(name);
  std::set<std::string> given;
  for (const ComponentModel& component : problem.components) {
    if (!given.insert(component.name).second) {
      throw SchemaError("duplicate component '" + component.name + "'");
    }
    if (component.spent < 0.0) {
      throw BadParameter("component '" + component.name + "' has negative spent");
    }
    if (!leaves.count(component.name)) {
      throw UnknownBasicEvent("component '" + component.name +
                              "' is not a basic event of the fault tree");
    }
  }
  for (const std::string& name : leaves) {
    if (!given.count(name)) {
      throw UnknownBasicEvent("no component model for basic event '" + name + "'");
    }
  }
}

struct AllocationResult {
  Split split;
  double predicted_before = 0.0;
  double predicted_after = 0.0;
  std::string strategy;
};

/// Simulated-annealing schedule: geometric cooling with transfer moves whose
/// size tracks the temperature down to a floor. The initial temperature sits
/// at the scale of typical objective differences, so early iterations explore
/// and the long tail hill-climbs. Solution quality is pinned by tests against
/// the grid oracle rather than by the schedule itself.
struct SAParams {
  int iterations = 20000;
  double initial_temp = 0.02;
  double cooling = 0.9993;
  double min_move_fraction = 1e-3;  // move sizes never shrink below budget * this / 2
};

namespace detail {

/// Index-based view of a problem: component order matches the reliability
/// polynomial's leaf order, so the objective can run on flat vectors.
struct CompiledProblem {
  ReliabilityPolynomial poly;
  std::vector<const ComponentModel*> components;  // leaf order
  double budget;

  explicit CompiledProblem(const AllocationProblem& problem)
      : poly(problem.ft), budget(problem.budget) {
    std::map<std::string, const ComponentModel*> by_name;
    for (const ComponentModel& component : problem.components) {
      by_name[component.name] = &component;
    }
    for (const std::string& name : poly.leaf_order()) {
      components.push_back(by_name.at(name));
    }
  }

  size_t size() const { return components.size(); }

  double objective(std::span<const double> split, std::vector<double>& scratch) const {
    scratch.resize(components.size());
    for (size_t i = 0; i < components.size(); ++i) {
      scratch[i] = evaluate(components[i]->expr, components[i]->spent + split[i]);
    }
    return poly.eval_ordered(scratch);
  }

  Split to_split(std::span<const double> values) const {
    Split split;
    for (size_t i = 0; i < components.size(); ++i) {
      split[components[i]->name] = values[i];
    }
    return split;
  }

  double zero_objective(std::vector<double>& scratch) const {
    std::vector<double> zeros(components.size(), 0.0);
    return objective(zeros, scratch);
  }
};

}  // namespace detail

/// Predicted system confidence after distributing `split` on top of the
/// components' past spending.
inline double objective(const AllocationProblem& problem, const Split& split) {
  validate_problem(problem);
  std::vector<double> values;
  detail::CompiledProblem compiled(problem);
  values.reserve(compiled.size());
  for (const ComponentModel* component : compiled.components) {
    auto it = split.find(component->name);
    if (it == split.end()) {
      throw BadParameter("split has no entry for component '" + component->name + "'");
    }
    if (it->second < 0.0) {
      throw BadParameter("split entry for '" + component->name + "' is negative");
    }
    values.push_back(it->second);
  }
  std::vector<double> scratch;
  return compiled.objective(values, scratch);
}

/// Simulated annealing over the budget simplex. The objective is
/// non-decreasing in every coordinate, so the full budget is always spent:
/// the state starts at the uniform split and neighbor moves transfer
/// delta ~ U(0, T * budget / 10) between two random components. Returns the
/// best state seen; deterministic in the seed.
inline AllocationResult solve_sa(const AllocationProblem& problem,
                                 const SAParams& params = {},
                                 std::uint64_t seed = 0) {
  validate_problem(problem);
  detail::CompiledProblem compiled(problem);
  const size_t n = compiled.size();
  std::vector<double> scratch;

  AllocationResult result;
  result.strategy = "sa";
  result.predicted_before = compiled.zero_objective(scratch);

  std::vector<double> current(n, problem.budget / static_cast<double>(n));
  double current_value = compiled.objective(current, scratch);
  std::vector<double> current_conf = scratch;
  std::vector<double> best = current;
  double best_value = current_value;

  if (n >= 2 && problem.budget > 0.0) {
    Rng rng(seed);
    double temperature = params.initial_temp;
    std::vector<double> candidate(n);
    std::vector<double> candidate_conf(n);
    for (int iter = 0; iter < params.iterations; ++iter) {
      const size_t from = rng.below(n);
      size_t to = rng.below(n - 1);
      if (to >= from) ++to;
      const double move_scale = std::max(temperature / params.initial_temp,
                                         params.min_move_fraction);
      double delta = rng.uniform(0.0, problem.budget * move_scale / 2.0);
      delta = std::min(delta, current[from]);

      // Only the two touched components need re-evaluation.
      candidate = current;
      candidate[from] -= delta;
      candidate[to] += delta;
      candidate_conf = current_conf;
      candidate_conf[from] = evaluate(compiled.components[from]->expr,
                                      compiled.components[from]->spent + candidate[from]);
      candidate_conf[to] = evaluate(compiled.components[to]->expr,
                                    compiled.components[to]->spent + candidate[to]);
      const double candidate_value = compiled.poly.eval_ordered(candidate_conf);

      if (candidate_value >= current_value ||
          rng.uniform01() < std::exp((candidate_value - current_value) / temperature)) {
        current.swap(candidate);
        current_conf.swap(candidate_conf);
        current_value = candidate_value;
        if (current_value > best_value) {
          best = current;
          best_value = current_value;
        }
      }
      temperature *= params.cooling;
    }
  }

  result.split = compiled.to_split(best);
  result.predicted_after = best_value;
  return result;
}

/// Exhaustive lattice search over the simplex {split >= 0, sum = budget} at
/// (approximately) the requested resolution: the budget is divided into
/// m = round(budget/step) units and every composition of m units over the
/// components is scored. Brute-force oracle for the annealer.
inline AllocationResult solve_grid(const AllocationProblem& problem, double step) {
  validate_problem(problem);
  if (!(step > 0.0)) throw BadParameter("grid step must be > 0");
  detail::CompiledProblem compiled(problem);
  const size_t n = compiled.size();
  std::vector<double> scratch;

  AllocationResult result;
  result.strategy = "grid";
  result.predicted_before = compiled.zero_objective(scratch);

  if (problem.budget <= 0.0) {
    std::vector<double> zeros(n, 0.0);
    result.split = compiled.to_split(zeros);
    result.predicted_after = result.predicted_before;
    return result;
  }

  const long long units = std::max(1LL, std::llround(problem.budget / step));
  // Lattice size C(units + n - 1, n - 1); refuse plainly oversized requests.
  double lattice_points = 1.0;
  for (size_t i = 1; i < n; ++i) {
    lattice_points *= static_cast<double>(units + static_cast<long long>(i)) /
                      static_cast<double>(i);
  }
  if (lattice_points > 1e7) {
    throw TooLarge("grid enumeration would visit about " +
                   std::to_string(lattice_points) + " points");
  }
  const double unit_size = problem.budget / static_cast<double>(units);

  // Per-component confidence lookup tables over unit counts.
  std::vector<std::vector<double>> table(n);
  for (size_t i = 0; i < n; ++i) {
    table[i].resize(static_cast<size_t>(units) + 1);
    for (long long a = 0; a <= units; ++a) {
      table[i][static_cast<size_t>(a)] =
          evaluate(compiled.components[i]->expr,
                   compiled.components[i]->spent + static_cast<double>(a) * unit_size);
    }
  }

  std::vector<long long> assignment(n, 0);
  std::vector<long long> best_assignment(n, 0);
  std::vector<double> conf(n, 0.0);
  double best_value = -1.0;

  // Depth-first over compositions; the last component absorbs the remainder.
  auto enumerate = [&](auto&& self, size_t index, long long remaining) -> void {
    if (index == n - 1) {
      assignment[index] = remaining;
      conf[index] = table[index][static_cast<size_t>(remaining)];
      const double value = compiled.poly.eval_ordered(conf);
      if (value > best_value) {
        best_value = value;
        best_assignment = assignment;
      }
      return;
    }
    for (long long a = 0; a <= remaining; ++a) {
      assignment[index] = a;
      conf[index] = table[index][static_cast<size_t>(a)];
      self(self, index + 1, remaining - a);
    }
  };
  enumerate(enumerate, 0, units);

  std::vector<double> values(n);
  for (size_t i = 0; i < n; ++i) {
    values[i] = static_cast<double>(best_assignment[i]) * unit_size;
  }
  result.split = compiled.to_split(values);
  result.predicted_after = best_value;
  return result;
}

/// Budget / n for every component, ignoring structure and confidences.
inline AllocationResult solve_uniform(const AllocationProblem& problem) {
  validate_problem(problem);
  detail::CompiledProblem compiled(problem);
  std::vector<double> scratch;
  std::vector<double> values(compiled.size(),
                             problem.budget / static_cast<double>(compiled.size()));
  AllocationResult result;
  result.strategy = "uniform";
  result.predicted_before = compiled.zero_objective(scratch);
  result.split = compiled.to_split(values);
  result.predicted_after = compiled.objective(values, scratch);
  return result;
}

/// Splits in proportion to 1 - c_i, the current lack of confidence per
/// component; falls back to the uniform split when every component is
/// already fully confident.
inline AllocationResult solve_proportional(const AllocationProblem& problem) {
  validate_problem(problem);
  detail::CompiledProblem compiled(problem);
  std::vector<double> scratch;
  const size_t n = compiled.size();

  std::vector<double> weight(n);
  double total = 0.0;
  for (size_t i = 0; i < n; ++i) {
    weight[i] = 1.0 - evaluate(compiled.components[i]->expr,
                               compiled.components[i]->spent);
    total += weight[i];
  }

  std::vector<double> values(n);
  for (size_t i = 0; i < n; ++i) {
    values[i] = total == 0.0 ? problem.budget / static_cast<double>(n)
                             : problem.budget * weight[i] / total;
  }

  AllocationResult result;
  result.strategy = "proportional";
  result.predicted_before = compiled.zero_objective(scratch);
  result.split = compiled.to_split(values);
  result.predicted_after = compiled.objective(values, scratch);
  return result;
}

}  // namespace qcl
