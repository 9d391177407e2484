#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "warpkit/cli.hpp"
#include "warpkit/io.hpp"

namespace fs = std::filesystem;
using warpkit::cli::dispatch;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("warpkit_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name) << text;
    return path(name);
  }

  std::string clustered_dataset() const {
    std::mt19937_64 g(3);
    std::normal_distribution<double> noise(0.0, 0.05);
    std::ostringstream s;
    for (int c = 0; c < 2; ++c) {
      for (int i = 0; i < 6; ++i) {
        s << c;
        for (int t = 0; t < 24; ++t) {
          const double z = (t - 12.0 - (i % 3)) / 2.5;
          s << '\t' << warpkit::format_double((c == 0 ? 1.0 : -1.0) * std::exp(-0.5 * z * z) + noise(g));
        }
        s << '\n';
      }
    }
    return write("clusters.tsv", s.str());
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, DistancePrintsCost) {
  auto a = write("a.tsv", "1\t1\t1\t0\t0\t0\t1\t0\n");
  auto b = write("b.tsv", "1\t0\t1\t1\t0\t0\t0\t1\n");
  auto r = run({"distance", "--kind", "dtw", a, b});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "2\n");
  r = run({"distance", "--kind", "ed", a, b});
  EXPECT_EQ(r.out, "2\n");
}

TEST_F(CliTest, DistancePathJsonIsOneBased) {
  auto a = write("a.tsv", "1\t0\t0\n");
  auto b = write("b.tsv", "1\t1\t1\n");
  auto r = run({"distance", "--kind", "dtw", "--path", a, b, "-o", path("out")});
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["cost"].get<double>(), 2.0);
  EXPECT_EQ(j["path"], nlohmann::json::parse("[[1,1],[2,2]]"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "distance.json"));
  auto run_json = nlohmann::json::parse(slurp(dir_ / "out" / "run.json"));
  EXPECT_EQ(run_json["config"]["reach"], 15);
}

TEST_F(CliTest, MissingFileExitsTwo) {
  auto a = write("a.tsv", "1\t0\t0\n");
  auto r = run({"distance", "--kind", "dtw", a, path("missing.tsv")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("missing.tsv"), std::string::npos);
}

TEST_F(CliTest, UsageErrorsExitOne) {
  auto a = write("a.tsv", "1\t0\t0\n");
  EXPECT_EQ(run({"distance", "--bogus", a, a}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({}).code, 1);
  auto b = write("b.tsv", "1\t0\t0\t1\n");
  auto r = run({"distance", "--kind", "msm", a, b});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(r.err.empty());
  EXPECT_EQ(run({"distance", "--help"}).code, 0);
}

TEST_F(CliTest, MalformedDataExitsTwo) {
  auto a = write("a.tsv", "1\t0\t0\n2\t0\n");
  auto r = run({"distance", a, a});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 2"), std::string::npos);
}

TEST_F(CliTest, McmWritesReportsDeterministically) {
  auto csv = write("results.csv",
                   "dataset,A,B,C\nd1,0.9,0.8,0.7\nd2,0.85,0.86,0.6\nd3,0.7,0.7,0.9\nd4,0.95,0.5,0.6\nd5,0.8,0.7,0.75\n");
  auto r = run({"mcm", csv, "-o", path("out")});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* f : {"mcm.json", "mcm.csv", "mcm.txt", "run.json"}) EXPECT_TRUE(fs::exists(dir_ / "out" / f)) << f;
  auto j = nlohmann::json::parse(slurp(dir_ / "out" / "mcm.json"));
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["rows"][0]["name"], "A");
  const auto first = slurp(dir_ / "out" / "mcm.json");
  ASSERT_EQ(run({"mcm", csv, "-o", path("out")}).code, 0);
  EXPECT_EQ(slurp(dir_ / "out" / "mcm.json"), first);
  r = run({"mcm", csv, "--rows", "B", "--cols", "A,C", "--lower-is-better", "-o", path("sub")});
  ASSERT_EQ(r.code, 0) << r.err;
  auto s = nlohmann::json::parse(slurp(dir_ / "sub" / "mcm.json"));
  EXPECT_EQ(s["rows"].size(), 1u);
  EXPECT_EQ(s["cols"].size(), 2u);
}

TEST_F(CliTest, ClusterReportsAriAndCentroids) {
  auto data = clustered_dataset();
  std::ostringstream labels;
  for (int i = 0; i < 12; ++i) labels << (i < 6 ? 0 : 1) << '\n';
  auto lab = write("labels.txt", labels.str());
  auto r = run({"cluster", "--k", "2", "--seed", "1", "--ari", lab, data, "-o", path("res/result.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("ARI 1"), std::string::npos);
  auto j = nlohmann::json::parse(slurp(dir_ / "res" / "result.json"));
  EXPECT_EQ(j["assignments"].size(), 12u);
  EXPECT_EQ(j["ari"].get<double>(), 1.0);
  auto cents = warpkit::load_ucr_dataset(j["centroids"].get<std::string>());
  EXPECT_EQ(cents.size(), 2u);
  const auto first = slurp(dir_ / "res" / "result.json");
  ASSERT_EQ(run({"--threads", "2", "cluster", "--k", "2", "--seed", "1", "--ari", lab, data, "-o", path("res/result.json")}).code, 0);
  EXPECT_EQ(slurp(dir_ / "res" / "result.json"), first);
  EXPECT_TRUE(fs::exists(dir_ / "res" / "run.json"));
}

TEST_F(CliTest, AverageOnePrototypePerClass) {
  auto data = clustered_dataset();
  for (const char* method : {"mean", "dba", "shapedba"}) {
    auto r = run({"average", "--method", method, "--reach", "3", data, "-o", path(std::string("proto_") + method + ".tsv")});
    ASSERT_EQ(r.code, 0) << r.err;
    auto p = warpkit::load_ucr_dataset(path(std::string("proto_") + method + ".tsv"));
    EXPECT_EQ(p.size(), 2u);
    EXPECT_EQ(p.labels, (std::vector<double>{0, 1}));
  }
  EXPECT_TRUE(fs::exists(dir_ / "run.json"));
}

TEST_F(CliTest, ExtendDoublesDataset) {
  auto data = write("scores.tsv", "0.5\t0\t1\t2\t1\n1.5\t0\t1\t3\t1\n2.5\t0\t2\t3\t1\n3.5\t1\t2\t3\t0\n");
  auto r = run({"extend", "--neighbors", "2", "--reach", "1", data, "-o", path("ext.tsv")});
  ASSERT_EQ(r.code, 0) << r.err;
  auto e = warpkit::load_ucr_dataset(path("ext.tsv"));
  EXPECT_EQ(e.size(), 8u);
  for (std::size_t i = 4; i < 8; ++i) {
    EXPECT_GE(e.labels[i], 0.5);
    EXPECT_LE(e.labels[i], 3.5);
  }
}

TEST_F(CliTest, FiltersWritesHeaderedTable) {
  auto data = write("x.tsv", "1\t0\t1\t2\t3\t4\t5\t6\t7\t8\t9\n");
  auto r = run({"filters", "--lengths", "2,4", data, "-o", path("f.tsv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto text = slurp(dir_ / "f.tsv");
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "sample\tt\tincreasing_2\tdecreasing_2\tpeak_4\tincreasing_4\tdecreasing_4\tpeak_4");
  EXPECT_NE(run({"filters", "--lengths", "3", data, "-o", path("g.tsv")}).code, 0);
}

TEST_F(CliTest, EvalGenReportIsReproducible) {
  std::mt19937_64 g(4);
  std::normal_distribution<double> nd;
  auto matrix = [&](int rows, double shift) {
    std::ostringstream s;
    s << "f0,f1,f2\n";
    for (int i = 0; i < rows; ++i) s << nd(g) + shift << ',' << nd(g) << ',' << nd(g) << '\n';
    return s.str();
  };
  auto real = write("real.csv", matrix(30, 0.0));
  auto gen = write("gen.csv", matrix(26, 0.4));
  auto r = run({"eval-gen", "--real", real, "--gen", gen, "--k", "3", "--s", "10", "--r", "4", "-o", path("rep/report.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(slurp(dir_ / "rep" / "report.json"));
  EXPECT_EQ(j["schema_version"], 1);
  for (const char* m : {"fid", "precision", "density", "recall", "coverage", "apd", "mms"})
    EXPECT_TRUE(j["metrics"].contains(m)) << m;
  EXPECT_EQ(j["metrics"]["apd"]["params"]["S"], 10);
  const auto first = slurp(dir_ / "rep" / "report.json");
  ASSERT_EQ(run({"eval-gen", "--real", real, "--gen", gen, "--k", "3", "--s", "10", "--r", "4", "-o", path("rep/report.json")}).code, 0);
  EXPECT_EQ(slurp(dir_ / "rep" / "report.json"), first);
  EXPECT_TRUE(fs::exists(dir_ / "rep" / "run.json"));
}
