#include <factorstab/dataio.hpp>

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef FACTORSTAB_CLI_PATH
#error "FACTORSTAB_CLI_PATH must point at the CLI binary"
#endif

namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("factorstab_cli_" + std::string(::testing::UnitTest::GetInstance()
                                                 ->current_test_info()
                                                 ->name()));
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  int run(const std::string& args) const {
    const std::string cmd = std::string(FACTORSTAB_CLI_PATH) + " " + args + " > " +
                            (root_ / "stdout.txt").string() + " 2> " +
                            (root_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string path(const std::string& name) const { return (root_ / name).string(); }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    EXPECT_TRUE(in.good()) << p;
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path root_;
};

}  // namespace

TEST_F(Cli, SimulateAndSelectAreDeterministicAcrossThreads) {
  ASSERT_EQ(run("--seed 5 --out " + path("simA") + " simulate --n 80 --p 60 --scenario S2"), 0);
  ASSERT_EQ(run("--seed 5 --threads 3 --out " + path("simB") +
                " simulate --n 80 --p 60 --scenario S2"),
            0);
  for (const char* f : {"data.csv", "factors.csv", "loadings.csv", "sim.cfg"}) {
    EXPECT_EQ(slurp(path("simA/") + f), slurp(path("simB/") + f)) << f;
  }
  const std::string data = path("simA/data.csv");
  ASSERT_EQ(run("--seed 9 --kmax 6 --splits 4 --out " + path("selA") + " select --header --input " +
                data),
            0);
  ASSERT_EQ(run("--seed 9 --kmax 6 --splits 4 --threads 4 --out " + path("selB") +
                " select --header --input " + data),
            0);
  for (const char* f : {"criteria.csv", "instability.csv"}) {
    const std::string a = slurp(path("selA/") + f);
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, slurp(path("selB/") + f)) << f;
  }
}

TEST_F(Cli, ExperimentDeterministicAcrossThreads) {
  factorstab::write_text_file(path("plan.cfg"),
                              "n = 60\np = 30, 50\nscenarios = S1\nregimes = i, iii\n"
                              "replications = 3\nkmax = 5\nsplits = 2\n");
  ASSERT_EQ(run("--seed 3 --out " + path("expA") + " experiment --plan " + path("plan.cfg")), 0);
  ASSERT_EQ(run("--seed 3 --threads 3 --out " + path("expB") + " experiment --plan " +
                path("plan.cfg")),
            0);
  for (const char* f : {"selection.csv", "instability.csv", "selection.svg", "instability.svg"}) {
    EXPECT_EQ(slurp(path("expA/") + f), slurp(path("expB/") + f)) << f;
  }
}

TEST_F(Cli, RealdataDeterministicAcrossThreads) {
  ASSERT_EQ(run("--seed 2 --out " + path("sim") + " simulate --n 200 --p 30"), 0);
  const std::string args = " realdata --header --input " + path("sim/data.csv") +
                           " --features 20 --rows 60 --datasets 4";
  ASSERT_EQ(run("--seed 8 --kmax 5 --splits 2 --out " + path("rdA") + args), 0);
  ASSERT_EQ(run("--seed 8 --kmax 5 --splits 2 --threads 2 --out " + path("rdB") + args), 0);
  const std::string a = slurp(path("rdA/report.csv"));
  EXPECT_EQ(a.rfind("criterion,mode,selection_pct,mean_instability\n", 0), 0u);
  EXPECT_EQ(a, slurp(path("rdB/report.csv")));
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("simulate --n notanumber"), 1);
  factorstab::write_text_file(path("bad.csv"), "1,2\n3,oops\n");
  EXPECT_EQ(run("--out " + path("o") + " select --input " + path("bad.csv")), 2);
  EXPECT_NE(slurp(path("stderr.txt")).find("bad.csv:2:2"), std::string::npos);
  factorstab::write_text_file(path("plan.cfg"), "unknown_key = 1\n");
  EXPECT_EQ(run("--out " + path("o") + " experiment --plan " + path("plan.cfg")), 2);
  factorstab::write_text_file(path("ok.csv"), "1,2\n3,5\n4,4\n0,1\n2,2\n");
  EXPECT_EQ(run("--kmax 0 --out " + path("o") + " select --input " + path("ok.csv")), 1);
  // Kmax larger than half the rows is a data-dependent error.
  EXPECT_EQ(run("--kmax 4 --out " + path("o") + " select --input " + path("ok.csv")), 2);
}
