#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "qwalkvec/cli.hpp"
#include "test_support.hpp"

using namespace qwalkvec;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::path(::testing::TempDir()) /
           ("qwalkvec_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(std::vector<std::string> args) {
    diag_.str("");
    return cli::run(std::move(args), diag_);
  }

  static std::size_t count_lines(const std::string& text, bool skip_comments = true) {
    std::size_t n = 0;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
      if (!line.empty() && !(skip_comments && line[0] == '#')) ++n;
    return n;
  }

  fs::path dir_;
  std::ostringstream diag_;
  const std::string karate_edges = fixtures::data_path("karate.edges");
  const std::string karate_labels = fixtures::data_path("karate.labels");
};

}  // namespace

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run({"embed", "--t", "5", "--out", path("x.csv")}), cli::usage_failure);
  EXPECT_EQ(run({}), cli::usage_failure);
  EXPECT_EQ(run({"bogus"}), cli::usage_failure);
  EXPECT_EQ(run({"embed", "--edges", karate_edges, "--t", "5", "--wp", "-1", "--out", path("x.csv")}),
            cli::usage_failure);
  EXPECT_EQ(run({"embed", "--edges", karate_edges, "--t", "5", "--method", "spectral", "--out", path("x.csv")}),
            cli::usage_failure);
  EXPECT_EQ(run({"spread", "--cycle", "200", "--tmax", "80", "--out", path("s.csv")}), cli::usage_failure);
  EXPECT_EQ(run({"spread", "--cycle", "101", "--tmax", "80", "--out", path("s.csv")}), cli::usage_failure);
  EXPECT_FALSE(fs::exists(path("s.csv")));
}

TEST_F(Cli, DataErrors) {
  EXPECT_EQ(run({"embed", "--edges", path("missing.edges"), "--t", "5", "--out", path("x.csv")}), cli::data_failure);
  cli::write_file(path("bad.edges"), "0 1\n1 x\n");
  EXPECT_EQ(run({"embed", "--edges", path("bad.edges"), "--t", "5", "--out", path("x.csv")}), cli::data_failure);
  EXPECT_NE(diag_.str().find("line 2"), std::string::npos);
}

TEST_F(Cli, EmbedKarate) {
  ASSERT_EQ(run({"embed", "--edges", karate_edges, "--t", "12", "--wp", "0.25", "--wq", "1", "--out", path("k.csv")}),
            cli::ok);
  auto phi = read_embedding(cli::read_file(path("k.csv")));
  EXPECT_EQ(phi.rows, 34u);
  EXPECT_EQ(phi.cols, 12u);
  EXPECT_EQ(phi.w_p, 0.25);
  EXPECT_EQ(phi.kind, "aggregated");
  EXPECT_TRUE(fs::exists(path("k.csv.manifest")));
  auto m = cli::RunManifest::parse(cli::read_file(path("k.csv.manifest")));
  EXPECT_EQ(m.command, "embed");
  EXPECT_NE(diag_.str().find("load report: 78 edge lines"), std::string::npos) << diag_.str();
}

TEST_F(Cli, EmbedBaselines) {
  ASSERT_EQ(run({"embed", "--edges", karate_edges, "--method", "deepwalk", "--t", "10", "--gamma", "2", "--dim",
                 "8", "--epochs", "1", "--corpus", path("walks.txt"), "--out", path("dw.csv")}),
            cli::ok);
  auto dw = read_embedding(cli::read_file(path("dw.csv")));
  EXPECT_EQ(dw.rows, 34u);
  EXPECT_EQ(dw.cols, 8u);
  EXPECT_EQ(dw.kind, "baseline");
  EXPECT_EQ(count_lines(cli::read_file(path("walks.txt"))), 68u);
  ASSERT_EQ(run({"evaluate", "--embedding", path("dw.csv"), "--labels", karate_labels, "--tr", "0.5", "--repeats", "2",
                 "--out", path("dw_report.csv")}),
            cli::ok);
  EXPECT_NE(cli::read_file(path("dw_report.csv")).find(",p=1;q=1;d=8,"), std::string::npos);

  ASSERT_EQ(run({"embed", "--edges", karate_edges, "--method", "node2vec", "--p", "0.5", "--q", "2", "--t", "10",
                 "--gamma", "2", "--dim", "8", "--epochs", "1", "--out", path("n2v.csv")}),
            cli::ok);
  auto n2v = read_embedding(cli::read_file(path("n2v.csv")));
  EXPECT_EQ(n2v.w_p, 0.5);
  EXPECT_EQ(n2v.w_q, 2.0);
}

TEST_F(Cli, EvaluateRows) {
  ASSERT_EQ(run({"embed", "--edges", karate_edges, "--t", "30", "--out", path("k.csv")}), cli::ok);
  EXPECT_EQ(run({"evaluate", "--embedding", path("k.csv"), "--labels", karate_labels, "--tr", "1.5", "--out",
                 path("r.csv")}),
            cli::usage_failure);
  ASSERT_EQ(run({"evaluate", "--embedding", path("k.csv"), "--labels", karate_labels, "--tr", "0.5,0.6,0.7,0.8",
                 "--repeats", "3", "--out", path("r.csv")}),
            cli::ok);
  auto text = cli::read_file(path("r.csv"));
  EXPECT_EQ(count_lines(text), 5u);
  EXPECT_EQ(text.substr(0, text.find('\n')), report_csv_header);
  EXPECT_NE(text.find("\nqwalkvec,karate,0.5,3,"), std::string::npos);
}

TEST_F(Cli, SpreadRows) {
  ASSERT_EQ(run({"spread", "--cycle", "201", "--tmax", "80", "--out", path("s.csv")}), cli::ok);
  auto text = cli::read_file(path("s.csv"));
  EXPECT_EQ(count_lines(text), 82u);  // header + 81 rows
  EXPECT_NE(text.find("# fit t=[10,80] exponent_quantum="), std::string::npos);
}

TEST_F(Cli, GridSearchTable) {
  ASSERT_EQ(run({"gridsearch", "--edges", karate_edges, "--labels", karate_labels, "--grid", "0.5,2", "--t", "10",
                 "--repeats", "2", "--out", path("g.csv")}),
            cli::ok);
  auto text = cli::read_file(path("g.csv"));
  EXPECT_EQ(count_lines(text), 5u);
  EXPECT_NE(text.find("\n# best wp="), std::string::npos);
}

TEST_F(Cli, ReplayIsByteIdentical) {
  ASSERT_EQ(run({"embed", "--edges", karate_edges, "--t", "15", "--wp", "0.5", "--wq", "4", "--out", path("k.csv")}),
            cli::ok);
  auto first = cli::read_file(path("k.csv"));
  auto first_manifest = cli::read_file(path("k.csv.manifest"));
  fs::remove(path("k.csv"));
  ASSERT_EQ(run({"replay", "--manifest", path("k.csv.manifest")}), cli::ok);
  EXPECT_EQ(cli::read_file(path("k.csv")), first);
  EXPECT_EQ(cli::read_file(path("k.csv.manifest")), first_manifest);
}

TEST_F(Cli, ConfigFileWithExplicitOverride) {
  cli::write_file(path("run.cfg"), "command=embed\nedges=" + karate_edges + "\nt=5\nwp=2\nout=" + path("c.csv") + "\n");
  ASSERT_EQ(run({"embed", "--config", path("run.cfg"), "--t", "7"}), cli::ok);
  auto phi = read_embedding(cli::read_file(path("c.csv")));
  EXPECT_EQ(phi.cols, 7u);
  EXPECT_EQ(phi.w_p, 2.0);
  EXPECT_EQ(run({"spread", "--config", path("run.cfg")}), cli::usage_failure);
}
