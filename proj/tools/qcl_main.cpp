// Command-line front end: budget allocation over a fault tree, fault-tree to
// proof translation, proof checking, and the two bundled benchmark studies.
//
// Exit codes: 0 success, 1 failed proof check, 2 input/schema error,
// 3 solver error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qcl/qcl.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInputError = 2;
constexpr int kExitSolverError = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw qcl::SchemaError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

int write_output(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return kExitOk;
  }
  std::ofstream out(out_path, std::ios::binary);
  out << content;
  if (!out) {
    std::cerr << "input error: cannot write '" << out_path << "'\n";
    return kExitInputError;
  }
  return kExitOk;
}

struct AllocateArgs {
  std::string ft_path;
  std::string components_path;
  std::string out_path;
  std::string strategy = "sa";
  double budget = 0.0;
  std::uint64_t seed = 0;
  qcl::SAParams sa;
  double grid_step = 0.05;
};

int run_allocate(const AllocateArgs& args) {
  qcl::AllocationProblem problem;
  try {
    problem.ft = qcl::parse_ft(read_file(args.ft_path));
    problem.components = qcl::parse_components(read_file(args.components_path));
    problem.budget = args.budget;
    qcl::validate_problem(problem);
    // Sampled monotonicity gate over the range each function will be
    // evaluated on.
    for (const qcl::ComponentModel& component : problem.components) {
      if (!qcl::check_monotone(component.expr,
                               component.spent + args.budget + 1.0, 101)) {
        std::cerr << "input error: confidence function of \"" << component.name
                  << "\" decreases on the evaluated range\n";
        return kExitInputError;
      }
    }
  } catch (const qcl::Error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  }

  qcl::AllocationResult result;
  try {
    if (args.strategy == "sa") {
      result = qcl::solve_sa(problem, args.sa, args.seed);
    } else if (args.strategy == "grid") {
      result = qcl::solve_grid(problem, args.grid_step);
    } else if (args.strategy == "uniform") {
      result = qcl::solve_uniform(problem);
    } else {
      result = qcl::solve_proportional(problem);
    }
  } catch (const qcl::Error& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolverError;
  }
  return write_output(args.out_path, qcl::serialize_allocation(result));
}

int run_translate(const std::string& ft_path, const std::string& confidences_path,
                  const std::string& out_path) {
  qcl::ProofTree proof;
  try {
    const qcl::FaultTree ft = qcl::parse_ft(read_file(ft_path));
    const auto leaf_conf = qcl::parse_confidences(read_file(confidences_path));
    proof = qcl::translate(ft, leaf_conf);
  } catch (const qcl::Error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  }
  return write_output(out_path, qcl::serialize_proof(proof));
}

int run_check(const std::string& proof_path) {
  qcl::ProofTree proof;
  try {
    proof = qcl::parse_proof(read_file(proof_path));
  } catch (const qcl::Error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  }
  const qcl::CheckResult result = qcl::check_proof(proof);
  if (!result.ok) {
    std::cout << "invalid proof at " << result.path << ": " << result.reason << "\n";
    return kExitCheckFailed;
  }
  std::cout << "proof ok\n";
  return kExitOk;
}

template <typename Parser, typename Runner>
int run_experiment(const std::string& config_path, const std::string& out_path,
                   const char* name, Parser parse, Runner runner) {
  using Config = decltype(parse(qcl::json{}));
  Config cfg;
  try {
    cfg = parse(qcl::json::parse(read_file(config_path), nullptr, false));
  } catch (const qcl::Error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  }

  std::ostringstream csv;
  try {
    qcl::write_csv(csv, name, runner(cfg));
  } catch (const qcl::Error& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolverError;
  }
  return write_output(out_path, csv.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantitative-confidence-logic test resource allocation toolkit"};
  app.require_subcommand(1);

  AllocateArgs alloc;
  CLI::App* allocate = app.add_subcommand(
      "allocate", "Split a testing budget over the components of a fault tree");
  allocate->add_option("--fault-tree", alloc.ft_path, "Fault-tree JSON file")
      ->required();
  allocate->add_option("--components", alloc.components_path,
                       "Component confidence-function JSON file")
      ->required();
  allocate->add_option("--budget", alloc.budget, "Total budget to distribute")
      ->required();
  allocate
      ->add_option("--strategy", alloc.strategy,
                   "Allocation strategy (default sa)")
      ->check(CLI::IsMember({"sa", "uniform", "proportional", "grid"}));
  allocate->add_option("--seed", alloc.seed, "Random seed for sa");
  allocate->add_option("--out", alloc.out_path, "Output file (default stdout)");
  allocate->add_option("--sa-iterations", alloc.sa.iterations, "Annealing steps");
  allocate->add_option("--sa-initial-temp", alloc.sa.initial_temp,
                       "Annealing start temperature");
  allocate->add_option("--sa-cooling", alloc.sa.cooling,
                       "Geometric cooling factor per step");
  allocate->add_option("--grid-step", alloc.grid_step,
                       "Lattice resolution for --strategy grid");

  std::string translate_ft, translate_conf, translate_out;
  CLI::App* translate = app.add_subcommand(
      "translate", "Translate a fault tree into a confidence-carrying proof");
  translate->add_option("--fault-tree", translate_ft, "Fault-tree JSON file")
      ->required();
  translate
      ->add_option("--confidences", translate_conf,
                   "Per-component confidence JSON file")
      ->required();
  translate->add_option("--out", translate_out, "Output file (default stdout)");

  std::string check_path;
  CLI::App* check = app.add_subcommand("check", "Validate a proof file");
  check->add_option("proof", check_path, "Proof JSON file")->required();

  std::string rq1_config, rq1_out;
  CLI::App* rq1 = app.add_subcommand(
      "rq1", "Predicted-confidence benchmark of allocation strategies");
  rq1->add_option("--config", rq1_config, "Benchmark config JSON")->required();
  rq1->add_option("--out", rq1_out, "CSV output file (default stdout)");

  std::string rq2_config, rq2_out;
  CLI::App* rq2 = app.add_subcommand(
      "rq2", "Simulated fault-removal benchmark of allocation strategies");
  rq2->add_option("--config", rq2_config, "Benchmark config JSON")->required();
  rq2->add_option("--out", rq2_out, "CSV output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  if (allocate->parsed()) return run_allocate(alloc);
  if (translate->parsed()) return run_translate(translate_ft, translate_conf, translate_out);
  if (check->parsed()) return run_check(check_path);
  if (rq1->parsed()) {
    const auto parse_rq1 = [](const qcl::json& j) {
      qcl::Rq1Config cfg = qcl::rq1_config_from_json(j);
      if (!qcl::check_monotone(cfg.conf_family, cfg.sp_hi + cfg.budgets.back(), 101)) {
        throw qcl::BadParameter("conf_family decreases on the evaluated range");
      }
      return cfg;
    };
    return run_experiment(rq1_config, rq1_out, "rq1", parse_rq1,
                          [](const qcl::Rq1Config& cfg) { return qcl::run_rq1(cfg); });
  }
  return run_experiment(rq2_config, rq2_out, "rq2", qcl::rq2_config_from_json,
                        [](const qcl::Rq2Config& cfg) { return qcl::run_rq2(cfg); });
}
