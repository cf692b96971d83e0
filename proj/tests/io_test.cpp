#include <gtest/gtest.h>

#include <filesystem>
#include <regex>
#include <set>

#include "medianwalls/audit.hpp"
#include "medianwalls/io/experiments.hpp"
#include "medianwalls/io/fixtures.hpp"
#include "medianwalls/io/json.hpp"
#include "corpus.hpp"

namespace mw = medianwalls;
namespace io = medianwalls::io;
namespace fx = medianwalls::fixtures;
using mw::Rational;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("medianwalls_io_test_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return dir / name;
}

struct DotGraph {
  std::set<std::string> vertices;
  std::vector<std::pair<std::string, std::string>> edges;
};

DotGraph parse_dot(const std::string& dot) {
  DotGraph g;
  const std::regex vertex(R"re(^\s+"([^"]+)"( \[shape=box\])?;$)re");
  const std::regex edge(R"re(^\s+"([^"]+)" -- "([^"]+)" \[label="[^"]*"\];$)re");
  std::istringstream in(dot);
  std::string line;
  std::smatch m;
  while (std::getline(in, line)) {
    if (std::regex_match(line, m, vertex)) g.vertices.insert(m[1]);
    if (std::regex_match(line, m, edge)) g.edges.emplace_back(m[1], m[2]);
  }
  return g;
}

std::map<std::string, int> degrees(const DotGraph& g) {
  std::map<std::string, int> d;
  for (const auto& v : g.vertices) d[v] = 0;
  for (const auto& [a, b] : g.edges) ++d[a], ++d[b];
  return d;
}

}  // namespace

TEST(RoundTrip, FullCorpusThroughText) {
  for (const auto& inst : mw::testing::corpus()) {
    const auto text = io::dump(io::to_json(inst.space));
    const auto back = io::wallspace_from_json(io::parse_text(text, inst.label));
    EXPECT_TRUE(io::structurally_identical(inst.space, back)) << inst.label;
    EXPECT_EQ(io::dump(io::to_json(back)), text) << inst.label;
  }
}

TEST(RoundTrip, FullCorpusThroughFiles) {
  for (const auto& inst : mw::testing::corpus()) {
    const auto path = scratch("rt.json");
    io::save_wallspace(path, inst.space);
    EXPECT_TRUE(io::structurally_identical(inst.space, io::load_wallspace(path))) << inst.label;
  }
}

TEST(RoundTrip, StructuralIdentityDetectsChanges) {
  const auto X = fx::path(3);
  EXPECT_FALSE(io::structurally_identical(X, fx::path(4)));
  EXPECT_FALSE(io::structurally_identical(X, fx::tripod_star(3)));
  std::vector<mw::WallSpec<Rational>> specs;
  for (const auto& w : X.walls()) specs.push_back({w.side_a.members, w.weight * Rational(2), w.name});
  EXPECT_FALSE(io::structurally_identical(X, mw::WallSpace(X.names(), specs)));
}

TEST(RationalJson, AcceptsThreeSpellings) {
  EXPECT_EQ(io::rational_from_json(io::Json{{"num", 3}, {"den", 6}}, "w"), Rational(1, 2));
  EXPECT_EQ(io::rational_from_json(io::Json(4), "w"), Rational(4));
  EXPECT_EQ(io::rational_from_json(io::Json("-2/3"), "w"), Rational(-2, 3));
  EXPECT_THROW((void)io::rational_from_json(io::Json("1/0"), "w"), mw::ParseError);
  EXPECT_THROW((void)io::rational_from_json(io::Json(0.5), "w"), mw::ParseError);
}

TEST(ParseErrors, UnknownPointIsNamed) {
  const auto j = io::parse_text(R"({"points":["a","b"],"walls":[{"name":"w","side_a":["zed"],"weight":1}]})", "t");
  try {
    (void)io::wallspace_from_json(j);
    FAIL() << "expected ParseError";
  } catch (const mw::ParseError& e) {
    EXPECT_EQ(e.context(), "walls[0].side_a[0]");
    EXPECT_NE(std::string(e.what()).find("'zed'"), std::string::npos);
  }
}

TEST(ParseErrors, SyntaxErrorCarriesLineAndColumn) {
  try {
    (void)io::parse_text("{\"points\": [\"a\",\n  \"b\",,]}", "in.json");
    FAIL() << "expected ParseError";
  } catch (const mw::ParseError& e) {
    EXPECT_EQ(e.context(), "in.json:2:7");
  }
}

TEST(ParseErrors, FieldContext) {
  auto context_of = [](const std::string& text) -> std::string {
    try {
      (void)io::wallspace_from_json(io::parse_text(text, "t"));
    } catch (const mw::ParseError& e) {
      return e.context();
    }
    return "no error";
  };
  EXPECT_EQ(context_of(R"({"walls":[]})"), "points");
  EXPECT_EQ(context_of(R"({"points":["a","a"],"walls":[]})"), "points[1]");
  EXPECT_EQ(context_of(R"({"points":["a","b"],"walls":[{"name":"w","side_a":["a"],"weight":-1}]})"), "walls[0].weight");
  EXPECT_EQ(context_of(R"({"points":["a","b"],"walls":[{"name":"w","side_a":["a"],"weight":"x"}]})"), "walls[0].weight");
  EXPECT_EQ(context_of(R"({"points":["a","b"],"walls":[{"name":"w","side_a":"a"}]})"), "walls[0].side_a");
}

TEST(ParseErrors, WeightDefaultsToOne) {
  const auto X = io::wallspace_from_json(io::parse_text(R"({"points":["a","b"],"walls":[{"side_a":["a"]}]})", "t"));
  EXPECT_EQ(X.walls()[0].weight, Rational(1));
}

TEST(ParseErrors, LoadPrefixesPath) {
  const auto path = scratch("bad.json");
  io::write_file(path, R"({"points":["a"],"walls":[{"name":"w","side_a":["q"],"weight":1}]})");
  try {
    (void)io::load_wallspace(path);
    FAIL() << "expected ParseError";
  } catch (const mw::ParseError& e) {
    EXPECT_EQ(e.context(), path.string() + ": walls[0].side_a[0]");
  }
}

TEST(Dot, Path3IsAThreeVertexPath) {
  const auto g = parse_dot(io::to_dot(mw::enumerate_sections(fx::path(3))));
  EXPECT_EQ(g.vertices.size(), 3u);
  EXPECT_EQ(g.edges.size(), 2u);
  std::multiset<int> d;
  for (const auto& [v, k] : degrees(g)) d.insert(k);
  EXPECT_EQ(d, (std::multiset<int>{1, 1, 2}));
}

TEST(Dot, Tripod3IsAFourVertexStar) {
  const auto dot = io::to_dot(mw::enumerate_sections(fx::tripod_star(3)));
  const auto g = parse_dot(dot);
  EXPECT_EQ(g.vertices.size(), 4u);
  EXPECT_EQ(g.edges.size(), 3u);
  std::multiset<int> d;
  for (const auto& [v, k] : degrees(g)) d.insert(k);
  EXPECT_EQ(d, (std::multiset<int>{1, 1, 1, 3}));
  EXPECT_NE(dot.find("[shape=box]"), std::string::npos);
}

TEST(Dot, HypercubeSkeleton) {
  const auto g = parse_dot(io::to_dot(mw::enumerate_sections(fx::hypercube(3))));
  EXPECT_EQ(g.vertices.size(), 8u);
  EXPECT_EQ(g.edges.size(), 12u);
  for (const auto& [v, k] : degrees(g)) EXPECT_EQ(k, 3) << v;
}

TEST(MedianJson, EmbeddingVerifiedOnCorpus) {
  for (const auto& inst : mw::testing::corpus()) {
    const auto M = mw::enumerate_sections(inst.space);
    const auto check = io::verify_embedding(M);
    EXPECT_TRUE(check.isometric && check.median) << inst.label << ": " << check.detail;
    const auto j = io::to_json(M, check);
    EXPECT_EQ(j["sections"].size(), M.size());
    EXPECT_EQ(j["dist"].size(), M.size());
  }
}

TEST(MedianJson, Tripod3Sections) {
  const auto M = mw::enumerate_sections(fx::tripod_star(3));
  const auto j = io::to_json(M, io::verify_embedding(M));
  std::size_t virtual_sections = 0;
  for (const auto& s : j["sections"]) virtual_sections += s["point"].is_null();
  EXPECT_EQ(virtual_sections, 1u);
  EXPECT_TRUE(j["embedding"]["isometric"].get<bool>());
}

TEST(AuditJson, Tripod3Fields) {
  const auto j = io::to_json(mw::full_audit(fx::tripod_star(3)));
  EXPECT_EQ(j["eta"], "1");
  EXPECT_EQ(j["delta"], "2");
  EXPECT_EQ(j["D"], "2");
  EXPECT_EQ(j["K"], "1");
  EXPECT_EQ(j["rank"], 1);
  EXPECT_EQ(j["quantitative_checks"].size(), 5u);
  EXPECT_TRUE(j["pass"].get<bool>());
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys.front(), "eta");
  EXPECT_EQ(keys.back(), "pass");
}

TEST(AuditJson, Path3AndHypercube4) {
  const auto p = io::to_json(mw::full_audit(fx::path(3)));
  for (const char* k : {"eta", "delta", "D", "K"}) EXPECT_EQ(p[k], "0") << k;
  EXPECT_EQ(p["rank"], 1);
  const auto h = io::to_json(mw::full_audit(fx::hypercube(4)));
  EXPECT_EQ(h["eta"], "0");
  EXPECT_EQ(h["rank"], 4);
}

TEST(AuditJson, TableMentionsEveryCheck) {
  const auto t = io::audit_table(mw::full_audit(fx::tripod_star(3)));
  for (const char* id : {"(a)", "(b)", "(c)", "(d)", "(e)"}) EXPECT_NE(t.find(id), std::string::npos) << id;
}

TEST(MetricJson, RoundTrip) {
  const auto S = mw::FiniteMetricSpace<Rational>::from_wall_space(fx::grid(2, 3));
  const auto back = io::metric_from_json<Rational>(io::to_json(S));
  ASSERT_EQ(back.size(), S.size());
  for (std::size_t i = 0; i < S.size(); ++i)
    for (std::size_t j = 0; j < S.size(); ++j) EXPECT_EQ(back(mw::PointId{i}, mw::PointId{j}), S(mw::PointId{i}, mw::PointId{j}));
}

TEST(Experiments, UnknownNameListsValidOnes) {
  try {
    (void)io::run_experiment("nope", {});
    FAIL() << "expected DomainError";
  } catch (const mw::DomainError& e) {
    const std::string msg = e.what();
    for (const auto& n : io::experiment_names()) EXPECT_NE(msg.find(n), std::string::npos) << n;
  }
}

TEST(Experiments, UnknownParameterRejected) {
  io::ExperimentOptions o;
  o.params = {{"pairz", "10"}};
  EXPECT_THROW((void)io::run_experiment("l1-embedding", o), mw::DomainError);
  o.params = {{"pairs", "ten"}};
  EXPECT_THROW((void)io::run_experiment("l1-embedding", o), mw::DomainError);
}

TEST(Experiments, L1HundredPairs) {
  io::ExperimentOptions o;
  o.params = {{"pairs", "100"}};
  const auto r = io::run_experiment("l1-embedding", o);
  EXPECT_TRUE(r.pass);
  EXPECT_LT(r.report["max_error"].get<double>(), 1e-8);
}

TEST(Experiments, SnowflakeBoundThresholdAndTable) {
  const auto r = io::run_experiment("snowflake-bound", {});
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.report["threshold"].get<double>(), 0.2 / (2 - std::sqrt(2.0)), 1e-12);
  EXPECT_NEAR(r.report["threshold"].get<double>(), 0.3414, 5e-5);
  EXPECT_EQ(r.report["far_with_median"], 0);
  std::uint64_t total = 0;
  for (const auto& row : r.report["records"]) total += row["triples"].get<std::uint64_t>();
  EXPECT_EQ(total, r.report["triples"].get<std::uint64_t>());
}

TEST(Experiments, CroftonLinearityShortDistances) {
  io::ExperimentOptions o;
  o.params = {{"distances", "1,2,4"}};
  const auto r = io::run_experiment("crofton-linearity", o);
  EXPECT_TRUE(r.pass);
  for (const auto& rec : r.report["records"])
    EXPECT_LE(std::abs(rec["estimate"].get<double>() - rec["oracle_value"].get<double>()),
              3 * rec["stderr"].get<double>());
}

TEST(Experiments, LinearityPairHasRequestedDistance) {
  for (double d : {0.5, 1.0, 8.0}) {
    const auto [p, q] = io::linearity_pair(d);
    EXPECT_NEAR(medianwalls::lab::hyperbolic_dist(p, q), d, 1e-9 * d);
  }
}

TEST(Experiments, ByteIdenticalReruns) {
  io::ExperimentOptions o;
  o.seed = 77;
  o.samples = 50'000;
  for (const auto& name : {"crofton-invariance", "snowflake-interval", "l1-embedding"}) {
    const auto a = io::run_experiment(name, o);
    auto o4 = o;
    o4.threads = 4;
    const auto b = io::run_experiment(name, o4);
    EXPECT_EQ(io::dump(a.report), io::dump(b.report)) << name;
    EXPECT_EQ(a.csv(), b.csv()) << name;
  }
}

TEST(Experiments, SeedChangesRandomExperiments) {
  io::ExperimentOptions a, b;
  a.seed = 1;
  b.seed = 2;
  EXPECT_NE(io::dump(io::run_experiment("l1-embedding", a).report), io::dump(io::run_experiment("l1-embedding", b).report));
}

TEST(Experiments, CsvHeaderMatchesRows) {
  const auto r = io::run_experiment("snowflake-interval", {});
  std::istringstream in(r.csv());
  std::string line;
  std::getline(in, line);
  const auto cols = std::count(line.begin(), line.end(), ',');
  while (std::getline(in, line)) EXPECT_EQ(std::count(line.begin(), line.end(), ','), cols);
}

TEST(Fixtures, GenerateExamples) {
  EXPECT_TRUE(io::structurally_identical(fx::generate({"path", {3}, 0}), fx::path(3)));
  const auto cube = fx::generate({"hypercube", {3}, 0});
  EXPECT_EQ(cube.wall_count(), 3u);
  for (const auto& w : cube.walls()) EXPECT_EQ(w.weight, Rational(1));
  EXPECT_TRUE(io::structurally_identical(fx::generate({"tripod-star", {3}, 0}), fx::tripod_star(3)));
  EXPECT_THROW((void)fx::generate({"hypercube", {40}, 0}), mw::DomainError);
  EXPECT_THROW((void)fx::generate({"moebius", {}, 0}), mw::DomainError);
}

TEST(Fixtures, RandomFamiliesDeterministicInSeed) {
  for (const char* fam : {"tree", "random-nested", "random-transverse"}) {
    const auto a = fx::generate({fam, {}, 9});
    EXPECT_TRUE(io::structurally_identical(a, fx::generate({fam, {}, 9}))) << fam;
    EXPECT_EQ(io::dump(io::to_json(a)), io::dump(io::to_json(fx::generate({fam, {}, 9})))) << fam;
  }
}
