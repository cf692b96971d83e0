#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "medianwalls/io/cli.hpp"

namespace cli = medianwalls::cli;
namespace io = medianwalls::io;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path workdir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("medianwalls_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

fs::path write(const std::string& name, const std::string& text) {
  const auto p = workdir() / name;
  io::write_file(p, text);
  return p;
}

fs::path fixture(const std::string& family, const std::string& param) {
  const auto dir = workdir() / ("gen_" + family + param);
  const auto r = run({"generate", family, param, "--out", dir.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  return dir / (family + ".json");
}

/// The last stderr line holding an error record.
io::Json error_of(const Run& r) {
  std::istringstream in(r.err);
  std::string line;
  io::Json last;
  while (std::getline(in, line)) {
    auto j = io::Json::parse(line);
    if (j.contains("error")) last = j["error"];
  }
  return last;
}

class BudgetEnv {
 public:
  explicit BudgetEnv(const char* value) { ::setenv(cli::kBudgetEnv, value, 1); }
  ~BudgetEnv() { ::unsetenv(cli::kBudgetEnv); }
};

}  // namespace

TEST(Cli, GenerateToStdoutAndManifestOnStderr) {
  const auto r = run({"generate", "path", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto X = io::wallspace_from_json(io::Json::parse(r.out));
  EXPECT_EQ(X.size(), 3u);
  const auto m = io::Json::parse(r.err);
  EXPECT_EQ(m["manifest"]["command"], "medianwalls generate path 3");
  EXPECT_TRUE(m["manifest"].contains("versions"));
  EXPECT_TRUE(m["manifest"].contains("timing"));
}

TEST(Cli, GenerateWithOutWritesSidecarManifest) {
  const auto dir = workdir() / "gen";
  const auto r = run({"generate", "random-nested", "6", "--seed", "5", "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const auto m = io::Json::parse(io::read_file(dir / "random-nested.manifest.json"));
  EXPECT_EQ(m["seed"], 5);
  EXPECT_EQ(m["outputs"].size(), 1u);
}

TEST(Cli, MedianizeWritesJsonDotAndVerification) {
  const auto input = fixture("tripod-star", "3");
  const auto dir = workdir() / "med";
  const auto r = run({"medianize", input.string(), "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = io::Json::parse(io::read_file(dir / "tripod-star.median.json"));
  EXPECT_EQ(j["sections"].size(), 4u);
  EXPECT_TRUE(j["embedding"]["isometric"].get<bool>());
  EXPECT_TRUE(j["embedding"]["median"].get<bool>());
  const auto dot = io::read_file(dir / "tripod-star.dot");
  EXPECT_EQ(std::count(dot.begin(), dot.end(), '-'), 6);  // three "--" edges
  const auto m = io::Json::parse(io::read_file(dir / "tripod-star.manifest.json"));
  EXPECT_EQ(m["inputs"][0]["path"], input.string());
}

TEST(Cli, MedianizePath3DotOnStdout) {
  const auto r = run({"medianize", fixture("path", "3").string(), "--format", "dot"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("graph median {", 0), 0u);
  std::size_t edges = 0;
  for (auto pos = r.out.find(" -- "); pos != std::string::npos; pos = r.out.find(" -- ", pos + 1)) ++edges;
  EXPECT_EQ(edges, 2u);
}

TEST(Cli, UnknownPointExitsTwoNamingThePoint) {
  const auto bad = write("bad.json", R"({"points":["a","b"],"walls":[{"name":"w","side_a":["ghost"],"weight":1}]})");
  const auto r = run({"medianize", bad.string()});
  EXPECT_EQ(r.code, 2);
  const auto e = error_of(r);
  EXPECT_EQ(e["exit_code"], 2);
  EXPECT_EQ(e["kind"], "parse");
  EXPECT_NE(e["message"].get<std::string>().find("'ghost'"), std::string::npos);
}

TEST(Cli, SyntaxErrorExitsTwoWithPosition) {
  const auto bad = write("syntax.json", "{\"points\": [\n,]}");
  const auto r = run({"audit", bad.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(error_of(r)["context"], bad.string() + ":2:1");
}

TEST(Cli, MissingFileExitsTwo) {
  const auto r = run({"audit", (workdir() / "absent.json").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(error_of(r).is_null());
}

TEST(Cli, AuditTripod3Report) {
  const auto r = run({"audit", fixture("tripod-star", "3").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = io::Json::parse(r.out);
  EXPECT_EQ(j["eta"], "1");
  EXPECT_EQ(j["delta"], "2");
  EXPECT_EQ(j["D"], "2");
  EXPECT_EQ(j["K"], "1");
}

TEST(Cli, AuditPath3AndHypercube4) {
  const auto p = io::Json::parse(run({"audit", fixture("path", "3").string()}).out);
  for (const char* k : {"eta", "delta", "D", "K"}) EXPECT_EQ(p[k], "0") << k;
  EXPECT_EQ(p["rank"], 1);
  const auto h = io::Json::parse(run({"audit", fixture("hypercube", "4").string()}).out);
  EXPECT_EQ(h["eta"], "0");
  EXPECT_EQ(h["rank"], 4);
}

TEST(Cli, AuditCsv) {
  const auto r = run({"audit", fixture("tripod-star", "3").string(), "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("eta,1\n"), std::string::npos);
  EXPECT_NE(r.out.find("rank,1\n"), std::string::npos);
}

TEST(Cli, AuditViolationExitsOne) {
  // weighted tripod whose 3 eta wall bound fails
  const auto in = write("wtripod.json", R"({"points":["a","b","c"],"walls":[
    {"name":"wa","side_a":["a"],"weight":1},
    {"name":"wb","side_a":["b"],"weight":4},
    {"name":"wc","side_a":["c"],"weight":4}]})");
  const auto r = run({"audit", in.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(error_of(r)["kind"], "violation");
  EXPECT_FALSE(io::Json::parse(r.out)["pass"].get<bool>());
}

TEST(Cli, BudgetExceededExitsThreeWithAdvisory) {
  const auto r = run({"audit", fixture("hypercube", "4").string(), "--budget", "2"});
  EXPECT_EQ(r.code, 3);
  const auto e = error_of(r);
  EXPECT_EQ(e["kind"], "budget");
  EXPECT_TRUE(e.contains("advisory"));
}

TEST(Cli, BudgetPrecedence) {
  const auto in = fixture("hypercube", "4").string();
  {
    BudgetEnv env("2");
    EXPECT_EQ(run({"medianize", in}).code, 3);
    EXPECT_EQ(run({"medianize", in, "--budget", "10"}).code, 0);
  }
  {
    BudgetEnv env("10");
    EXPECT_EQ(run({"medianize", in, "--budget", "2"}).code, 3);
  }
  {
    BudgetEnv env("lots");
    EXPECT_EQ(run({"medianize", in}).code, 2);
  }
  EXPECT_EQ(run({"medianize", in}).code, 0);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"generate", "hypercube", "99"}).code, 2);
  EXPECT_EQ(run({"generate", "klein-bottle"}).code, 2);
  EXPECT_EQ(run({"audit", "x.json", "--format", "dot"}).code, 2);
  EXPECT_EQ(run({"experiment", "l1-embedding", "--param", "noequals"}).code, 2);
  const auto r = run({"audit", "x.json", "--format", "yaml"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(error_of(r)["kind"], "usage");
}

TEST(Cli, UnknownExperimentListsNames) {
  const auto r = run({"experiment", "crofton"});
  EXPECT_EQ(r.code, 2);
  const auto msg = error_of(r)["message"].get<std::string>();
  for (const auto& n : io::experiment_names()) EXPECT_NE(msg.find(n), std::string::npos) << n;
}

TEST(Cli, HelpAndVersion) {
  const auto h = run({"--help"});
  EXPECT_EQ(h.code, 0);
  EXPECT_NE(h.out.find("medianize"), std::string::npos);
  const auto v = run({"--version"});
  EXPECT_EQ(v.code, 0);
  EXPECT_EQ(v.out, std::string(cli::kVersion) + "\n");
}

TEST(Cli, ExperimentByteIdenticalAcrossRunsAndThreads) {
  const std::vector<std::string> base{"experiment", "crofton-invariance", "--seed", "3", "--samples", "20000",
                                      "--param", "maps=4"};
  auto a = run(base);
  auto with_threads = base;
  with_threads.insert(with_threads.end(), {"--threads", "1"});
  auto b = run(with_threads);
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, run(base).out);
}

TEST(Cli, ExperimentOutWritesJsonAndCsv) {
  const auto dir = workdir() / "exp";
  const auto r = run({"experiment", "l1-embedding", "--param", "pairs=100", "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "l1-embedding.json"));
  EXPECT_TRUE(fs::exists(dir / "l1-embedding.csv"));
  const auto m = io::Json::parse(io::read_file(dir / "l1-embedding.manifest.json"));
  EXPECT_EQ(m["seed"], 1);
}

TEST(Cli, AuditReportsByteIdentical) {
  const auto in = fixture("random-transverse", "8").string();
  const auto a = run({"audit", in});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, run({"audit", in}).out);
}

TEST(Cli, BatchProcessesInParallel) {
  std::vector<std::string> args{"batch", "--command", "audit", "--jobs", "4", "--out", (workdir() / "batch").string()};
  for (const char* fam : {"path", "tripod-star", "hypercube", "grid", "tree", "random-nested"})
    args.push_back(fixture(fam, "3").string());
  const auto r = run(args);
  ASSERT_EQ(r.code, 0) << r.err;
  std::size_t reports = 0;
  for (const auto& e : fs::directory_iterator(workdir() / "batch"))
    reports += e.path().string().ends_with(".audit.json");
  EXPECT_EQ(reports, 6u);
}

TEST(Cli, BatchReportsWorstExitCode) {
  const auto bad = write("batch_bad.json", R"({"points":["a"],"walls":[{"side_a":["nobody"]}]})");
  const auto r = run({"batch", "--out", (workdir() / "batch2").string(), fixture("path", "3").string(), bad.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(fs::exists(workdir() / "batch2" / "path.audit.json"));
}

TEST(Cli, BatchMatchesSingleRuns) {
  const auto in = fixture("grid", "3").string();
  const auto dir = workdir() / "batch3";
  ASSERT_EQ(run({"batch", "--command", "medianize", "--out", dir.string(), in}).code, 0);
  const auto single = workdir() / "single3";
  ASSERT_EQ(run({"medianize", in, "--out", single.string()}).code, 0);
  EXPECT_EQ(io::read_file(dir / "grid.median.json"), io::read_file(single / "grid.median.json"));
}
