// End-to-end tests of the command-line tool: exit-code contract, file
// formats, and byte-level determinism.

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "qcl/io.hpp"

namespace qcl {
namespace {

namespace fs = std::filesystem;

const char* kCli = QCL_CLI_PATH;
const char* kData = QCL_DATA_DIR;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("qcl_cli_test_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static int run(const std::string& args) {
    const int status = std::system((std::string(kCli) + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
  }

  static std::string slurp(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
  }

  void spit(const std::string& file, const std::string& content) const {
    std::ofstream out(file, std::ios::binary);
    out << content;
  }

  std::string data(const std::string& name) const {
    return std::string(kData) + "/" + name;
  }

  fs::path dir_;
};

TEST_F(CliTest, AllocateProducesFeasibleSplit) {
  const std::string out = path("alloc.json");
  ASSERT_EQ(run("allocate --fault-tree " + data("example_system.json") +
                " --components " + data("example_components.json") +
                " --budget 10 --strategy sa --seed 0 --out " + out),
            0);
  const AllocationResult result = parse_allocation(slurp(out));
  EXPECT_EQ(result.strategy, "sa");
  double sum = 0.0;
  for (const auto& [name, value] : result.split) {
    EXPECT_GE(value, 0.0);
    sum += value;
  }
  EXPECT_NEAR(sum, 10.0, 1e-6);
  EXPECT_GE(result.predicted_after, result.predicted_before);
}

TEST_F(CliTest, AllocateZeroBudget) {
  const std::string out = path("alloc.json");
  ASSERT_EQ(run("allocate --fault-tree " + data("example_system.json") +
                " --components " + data("example_components.json") +
                " --budget 0 --strategy sa --out " + out),
            0);
  const AllocationResult result = parse_allocation(slurp(out));
  for (const auto& [name, value] : result.split) EXPECT_EQ(value, 0.0);
}

TEST_F(CliTest, AllocateEveryStrategy) {
  for (const std::string strategy : {"uniform", "proportional", "grid"}) {
    const std::string out = path("alloc_" + strategy + ".json");
    ASSERT_EQ(run("allocate --fault-tree " + data("example_system.json") +
                  " --components " + data("example_components.json") +
                  " --budget 10 --strategy " + strategy + " --out " + out),
              0)
        << strategy;
    EXPECT_EQ(parse_allocation(slurp(out)).strategy, strategy);
  }
}

TEST_F(CliTest, AllocateRejectsIncompleteComponents) {
  spit(path("components.json"), R"({
    "A": {"fn": {"builtin": "exponential", "base": 0.5, "shift": 0}, "spent": 0},
    "B": {"fn": {"builtin": "exponential", "base": 0.5, "shift": 0}, "spent": 5},
    "C": {"fn": {"builtin": "exponential", "base": 0.5, "shift": 0}, "spent": 5}
  })");
  EXPECT_EQ(run("allocate --fault-tree " + data("example_system.json") +
                " --components " + path("components.json") + " --budget 10"),
            2);
}

TEST_F(CliTest, AllocateInputErrors) {
  spit(path("bad.json"), "{");
  EXPECT_EQ(run("allocate --fault-tree " + path("bad.json") + " --components " +
                data("example_components.json") + " --budget 10"),
            2);
  EXPECT_EQ(run("allocate --fault-tree " + path("missing.json") +
                " --components " + data("example_components.json") + " --budget 10"),
            2);
  // Unknown strategy is a usage error.
  EXPECT_EQ(run("allocate --fault-tree " + data("example_system.json") +
                " --components " + data("example_components.json") +
                " --budget 10 --strategy cmaes"),
            2);
}

TEST_F(CliTest, AllocateRejectsDecreasingConfidenceFunction) {
  spit(path("ft.json"), R"({"type": "basic", "name": "X"})");
  spit(path("components.json"), R"({
    "X": {"fn": {"op": "sub", "args": [{"op": "const", "value": 1},
                                       {"op": "var"}]}, "spent": 0}})");
  EXPECT_EQ(run("allocate --fault-tree " + path("ft.json") + " --components " +
                path("components.json") + " --budget 10"),
            2);
}

TEST_F(CliTest, AllocateSolverErrors) {
  // A grid fine enough to blow the lattice bound is refused with exit 3.
  EXPECT_EQ(run("allocate --fault-tree " + data("example_system.json") +
                " --components " + data("example_components.json") +
                " --budget 10 --strategy grid --grid-step 0.0001"),
            3);
}

TEST_F(CliTest, TranslateThenCheck) {
  const std::string proof = path("proof.json");
  ASSERT_EQ(run("translate --fault-tree " + data("example_system.json") +
                " --confidences " + data("example_confidences.json") + " --out " +
                proof),
            0);
  const ProofTree tree = parse_proof(slurp(proof));
  EXPECT_EQ(tree.rule, Rule::AndI);
  EXPECT_EQ(to_string(tree.conclusion.goal), "(A | B) & (C | D)");
  EXPECT_EQ(run("check " + proof), 0);
}

TEST_F(CliTest, TranslateSingleLeaf) {
  spit(path("ft.json"), R"({"type": "basic", "name": "X"})");
  spit(path("conf.json"), R"({"X": {"t": 0.4, "f": 0.1}})");
  const std::string proof = path("proof.json");
  ASSERT_EQ(run("translate --fault-tree " + path("ft.json") + " --confidences " +
                path("conf.json") + " --out " + proof),
            0);
  const ProofTree tree = parse_proof(slurp(proof));
  EXPECT_EQ(tree.rule, Rule::Ax);
  EXPECT_TRUE(tree.premises.empty());
}

TEST_F(CliTest, TranslateRejectsInvalidConfidence) {
  spit(path("conf.json"), R"({"A": {"t": 0.7, "f": 0.4},
    "B": {"t": 1, "f": 0}, "C": {"t": 1, "f": 0}, "D": {"t": 1, "f": 0}})");
  EXPECT_EQ(run("translate --fault-tree " + data("example_system.json") +
                " --confidences " + path("conf.json")),
            2);
}

TEST_F(CliTest, CheckRejectsTamperedProof) {
  const std::string proof = path("proof.json");
  ASSERT_EQ(run("translate --fault-tree " + data("example_system.json") +
                " --confidences " + data("example_confidences.json") + " --out " +
                proof),
            0);
  json j = json::parse(slurp(proof));
  j["root"]["confidence"]["t"] = 0.123;
  spit(proof, j.dump(2) + "\n");
  EXPECT_EQ(run("check " + proof), 1);

  spit(path("garbage.json"), "not json");
  EXPECT_EQ(run("check " + path("garbage.json")), 2);
}

TEST_F(CliTest, ExperimentsWriteCsv) {
  spit(path("rq1.json"), R"({
    "n_fts": 2, "n_sps": 2, "sp_range": [100, 300], "budgets": [0, 10],
    "ft_leaves": 4,
    "conf_family": {"builtin": "exponential", "base": 0.99, "shift": 1},
    "seed": 3})");
  const std::string csv = path("rq1.csv");
  ASSERT_EQ(run("rq1 --config " + path("rq1.json") + " --out " + csv), 0);
  const std::string content = slurp(csv);
  EXPECT_NE(content.find("experiment,budget,strategy,score,rel_diff_pct,stderr,"
                         "n_instances"),
            std::string::npos);
  EXPECT_NE(content.find("rq1,0,sa,"), std::string::npos);

  spit(path("rq2.json"), R"({
    "n_fts": 1, "n_sps": 2, "n_fds": 3, "n_runs": 4, "sp_range": [10, 70],
    "budgets": [60], "test_cost": 10, "observability": 0.1, "seed": 3})");
  ASSERT_EQ(run("rq2 --config " + path("rq2.json") + " --out " + path("rq2.csv")), 0);
  EXPECT_NE(slurp(path("rq2.csv")).find("rq2,60,"), std::string::npos);

  EXPECT_EQ(run("rq1 --config " + path("rq2.json") + " --out " + csv), 2);
}

TEST_F(CliTest, ShippedDataFilesParse) {
  EXPECT_NO_THROW(parse_ft(slurp(data("example_system.json"))));
  EXPECT_NO_THROW(parse_components(slurp(data("example_components.json"))));
  EXPECT_NO_THROW(parse_confidences(slurp(data("example_confidences.json"))));
  EXPECT_NO_THROW(rq1_config_from_json(json::parse(slurp(data("rq1_desk.json")))));
  EXPECT_NO_THROW(rq1_config_from_json(json::parse(slurp(data("rq1_full.json")))));
  EXPECT_NO_THROW(rq2_config_from_json(json::parse(slurp(data("rq2_desk.json")))));
  EXPECT_NO_THROW(rq2_config_from_json(json::parse(slurp(data("rq2_full.json")))));
}

TEST_F(CliTest, Rq1RejectsDecreasingFamily) {
  spit(path("rq1.json"), R"({
    "n_fts": 2, "n_sps": 2, "sp_range": [1, 3], "budgets": [10],
    "ft_leaves": 4,
    "conf_family": {"op": "sub", "args": [{"op": "const", "value": 1},
                                          {"op": "var"}]},
    "seed": 3})");
  EXPECT_EQ(run("rq1 --config " + path("rq1.json")), 2);
}

TEST_F(CliTest, ReRunsAreByteIdentical) {
  const std::string first = path("a");
  const std::string second = path("b");

  for (const std::string& args :
       {std::string("allocate --fault-tree ") + data("example_system.json") +
            " --components " + data("example_components.json") +
            " --budget 10 --strategy sa --seed 7 --out ",
        std::string("translate --fault-tree ") + data("example_system.json") +
            " --confidences " + data("example_confidences.json") + " --out "}) {
    ASSERT_EQ(run(args + first), 0);
    ASSERT_EQ(run(args + second), 0);
    EXPECT_EQ(slurp(first), slurp(second)) << args;
  }

  spit(path("rq1.json"), R"({
    "n_fts": 2, "n_sps": 2, "sp_range": [100, 300], "budgets": [10],
    "ft_leaves": 4,
    "conf_family": {"builtin": "exponential", "base": 0.99, "shift": 1},
    "seed": 11})");
  ASSERT_EQ(run("rq1 --config " + path("rq1.json") + " --out " + first), 0);
  ASSERT_EQ(run("rq1 --config " + path("rq1.json") + " --out " + second), 0);
  EXPECT_EQ(slurp(first), slurp(second));
}

}  // namespace
}  // namespace qcl
