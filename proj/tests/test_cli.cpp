#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dworkbench/io.hpp"

using namespace dwb;
namespace fs = std::filesystem;

namespace {

const std::string kCli = DWB_CLI_PATH;
const std::string kCorpus = DWB_CORPUS_DIR;

fs::path scratch() {
  static fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("dworkbench_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args) {
  std::string cmd = "\"" + kCli + "\" " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write(const std::string& name, const std::string& body) {
  auto path = scratch() / name;
  std::ofstream(path) << body;
  return path;
}

Json load(const fs::path& path) {
  std::ifstream in(path);
  return Json::parse(in);
}

const char* kGood = R"({"label": "g", "p": "5", "rank": 1, "connection": [["0"]]})";

}  // namespace

TEST(Parse, CorpusFilesBuild) {
  for (const auto& e : fs::directory_iterator(kCorpus)) {
    auto d = parse_module(e.path().string());
    auto m = build_module(d, 64);
    EXPECT_EQ(m.rank(), d.rank);
    EXPECT_EQ(m.prime(), d.p);
  }
}

TEST(Parse, EntryGrammar) {
  RationalField q{5};
  EXPECT_EQ(parse_entry("1 - t", q, 10), Series<RationalField>({mpq_class(1), mpq_class(-1)}));
  EXPECT_EQ(parse_entry("(1+t)^2", q, 10), Series<RationalField>({mpq_class(1), mpq_class(2), mpq_class(1)}));
  EXPECT_EQ(parse_entry("d(t^3)/3", q, 10), Series<RationalField>({mpq_class(0), mpq_class(0), mpq_class(1)}));
  auto g = parse_entry("1/(1-t)", q, 6);
  EXPECT_EQ(g.valid(), 6);
  for (std::int64_t i = 0; i < 6; ++i) EXPECT_EQ(g[i], 1);
  auto h = parse_entry("hyp2f1(1/2, 1/2, 1)", q, 4);
  EXPECT_EQ(h[1], mpq_class(1, 4));
  EXPECT_EQ(h[2], mpq_class(9, 64));
  EXPECT_TRUE(parse_entry("hyp2f1(-2, 1, 1)", q, 10).is_exact());
}

TEST(Parse, MalformedEntries) {
  RationalField q{5};
  for (const char* bad : {"", "t^", "1/t", "(1+t", "x", "hyp2f1(1,1,0)", "1/0", "2 3"}) {
    EXPECT_THROW(parse_entry(bad, q, 10), ParseError) << bad;
  }
  try {
    parse_entry("1 + * t", q, 10);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.column, 5u);
  }
}

TEST(Parse, MalformedDescriptions) {
  const std::vector<std::string> bad = {
      R"({"label": "x", "p": "5", "rank": 1)",
      R"({"label": "x", "p": "6", "rank": 1, "connection": [["0"]]})",
      R"({"label": "x", "p": "1", "rank": 1, "connection": [["0"]]})",
      R"({"label": "x", "p": "5", "rank": 2, "connection": [["0"]]})",
      R"({"label": "x", "p": "5", "rank": 1, "connection": [["t^"]]})",
      R"({"label": "x", "p": "5", "rank": 1})",
      R"([1, 2])",
  };
  for (const auto& b : bad) EXPECT_THROW(parse_module_text(b, "inline"), DescriptionError) << b;
  try {
    parse_module_text("{\n  \"label\": \"x\", \"p\": \"5\", \"rank\": 1,\n  \"connection\": [[\"1 + )\"]]\n}", "f.json");
    FAIL();
  } catch (const DescriptionError& e) {
    EXPECT_NE(std::string(e.what()).find("f.json:3:"), std::string::npos) << e.what();
  }
  EXPECT_NO_THROW(parse_module_text(kGood, "inline"));
}

TEST(Cli, ExitCodes) {
  auto good = write("good.json", kGood);
  EXPECT_EQ(run("h0 " + good.string()), 0);
  EXPECT_EQ(run("verify-conjecture --growth-order 500 " + (fs::path(kCorpus) / "ex44.json").string()), 0);
  EXPECT_EQ(run("h0 " + write("syntax.json", "{ \"p\": ").string()), 3);
  EXPECT_EQ(run("h0 " + write("composite.json", R"({"label": "c", "p": "9", "rank": 1, "connection": [["0"]]})").string()), 3);
  EXPECT_EQ(run("h0 " + (scratch() / "missing.json").string()), 3);
  EXPECT_EQ(run("radii --rho 1,p^-1/4 " + good.string()), 0);
  EXPECT_EQ(run("solve --alpha 1 " + good.string()), 0);
  EXPECT_EQ(run("solve --alpha 1,2 " + good.string()), 3);
  EXPECT_EQ(run("frobnicate"), 3);
  EXPECT_EQ(run("h0 --order 2 " + good.string()), 3);
  EXPECT_EQ(run(""), 3);
  // A wrong expectation is a FAIL.
  auto wrong = write("wrong.json", R"({"label": "w", "p": "5", "rank": 1, "connection": [["1"]], "expected": {"n": 1}})");
  EXPECT_EQ(run("corpus --growth-order 500 " + wrong.string()), 1);
}

TEST(Cli, ReportsAreDeterministic) {
  auto ex = (fs::path(kCorpus) / "ex44.json").string();
  auto a = scratch() / "a.json", b = scratch() / "b.json";
  ASSERT_EQ(run("verify-conjecture --growth-order 500 --jobs 2 --out " + a.string() + " " + ex + " " + ex), 0);
  ASSERT_EQ(run("verify-conjecture --growth-order 500 --jobs 1 --out " + b.string() + " " + ex + " " + ex), 0);
  auto ja = load(a), jb = load(b);
  EXPECT_TRUE(ja.contains("timestamp"));
  ja.erase("timestamp");
  jb.erase("timestamp");
  ja.erase("arguments");
  jb.erase("arguments");
  EXPECT_EQ(ja, jb);
  EXPECT_FALSE(ja["modules"][0].contains("seconds"));
  EXPECT_EQ(ja["rollup"]["verdict"], "PASS");
}

TEST(Cli, FProfileOutputs) {
  auto ex = (fs::path(kCorpus) / "ex44.json").string();
  auto csv = scratch() / "f.csv", svg = scratch() / "f.svg";
  ASSERT_EQ(run("fprofile --rho-grid 1,p^-1/8,p^-1/4 --csv " + csv.string() + " --svg " + svg.string() + " " + ex), 0);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "r,F_1,F_2");
  std::stringstream s;
  s << std::ifstream(svg).rdbuf();
  EXPECT_NE(s.str().find("<polyline"), std::string::npos);
}
