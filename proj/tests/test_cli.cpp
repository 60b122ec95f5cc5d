#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "cli.hpp"
#include "fixtures.hpp"

using namespace dessins;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

std::vector<nlohmann::json> json_lines(const std::string& text) {
  std::vector<nlohmann::json> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);)
    out.push_back(nlohmann::json::parse(l));
  return out;
}

std::string temp_file(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / ("dessins_cli_" + name);
  std::ofstream(path) << text;
  return path.string();
}

} // namespace

TEST(Cli, EnumerateCount) {
  auto r = run({"enumerate", "--index", "6", "--emit", "count"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "56\n");
  EXPECT_EQ(run({"enumerate", "--index", "5", "--mode", "hypermap", "--emit", "count"}).out, "97\n");
}

TEST(Cli, EnumerateJsonlIsDeterministic) {
  auto one = run({"enumerate", "--index", "7", "--emit", "jsonl"});
  auto three = run({"enumerate", "--index", "7", "--emit", "jsonl", "--workers", "3"});
  EXPECT_EQ(one.code, 0);
  EXPECT_EQ(one.out, three.out);
  auto lines = json_lines(one.out);
  ASSERT_EQ(lines.size(), 131u);
  for (const auto& j : lines)
    EXPECT_EQ(j["schema"], "dessins.dessin.v1");
}

TEST(Cli, EnumerateFilters) {
  auto r = run({"enumerate", "--index", "7", "--signature", "3,5,1,0", "--group-order", "168", "--emit", "jsonl"});
  EXPECT_EQ(r.code, 0);
  for (const auto& j : json_lines(r.out)) {
    EXPECT_EQ(j["group_order"], "168");
    EXPECT_EQ(j["signature"]["W"], 5);
  }
  EXPECT_FALSE(r.out.empty());
  EXPECT_EQ(run({"enumerate", "--index", "7", "--signature", "3,5"}).code, 2);
  EXPECT_EQ(run({"enumerate", "--index", "7", "--group-order", "x1"}).code, 2);
}

TEST(Cli, EnumerateFiles) {
  auto dir = std::filesystem::temp_directory_path() / "dessins_cli_files";
  std::filesystem::remove_all(dir);
  auto r = run({"enumerate", "--index", "4", "--emit", "files", "--dir", dir.string()});
  EXPECT_EQ(r.code, 0);
  std::size_t files = 0;
  for (const auto& f : std::filesystem::directory_iterator(dir)) {
    ++files;
    EXPECT_NO_THROW(cli::load_dessin(f.path().string()));
  }
  EXPECT_EQ(files, 10u);
  std::filesystem::remove_all(dir);
}

TEST(Cli, ResourceBoundIsNamed) {
  auto r = run({"enumerate", "--index", "14"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("resource bound 13"), std::string::npos) << r.err;
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"enumerate"}).code, 2);
  EXPECT_EQ(run({"enumerate", "--index", "5", "--mode", "clean"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, MalformedDessinReportsPosition) {
  auto path = temp_file("bad.dessin", "n=4\nalpha=(1,2,9)\nbeta=(1,2)\n");
  auto r = run({"analyze", path});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 2, column"), std::string::npos) << r.err;
  EXPECT_EQ(run({"analyze", "/nonexistent/file.dessin"}).code, 2);
}

TEST(Cli, AnalyzeAndGeometry) {
  auto r = run({"analyze", fixture::path("dessins/fano.dessin")});
  ASSERT_EQ(r.code, 0);
  auto j = json_lines(r.out).at(0);
  EXPECT_EQ(j["schema"], "dessins.analysis.v1");
  EXPECT_EQ(j["group_order"], "168");

  auto dir = std::filesystem::temp_directory_path() / "dessins_cli_dot";
  std::filesystem::remove_all(dir);
  auto g = run({"geometry", fixture::path("dessins/mermin.dessin"), "--dot", dir.string()});
  ASSERT_EQ(g.code, 0);
  auto lines = json_lines(g.out);
  ASSERT_EQ(lines.size(), 2u);
  for (const auto& l : lines) {
    EXPECT_EQ(l["recognized_as"], "(3x3)-grid");
    EXPECT_EQ(l["lines"].size(), 6u);
  }
  EXPECT_TRUE(std::filesystem::exists(dir / "geometry_1.dot"));
  std::filesystem::remove_all(dir);
}

TEST(Cli, RecognizeTable) {
  auto r = run({"recognize", fixture::path("dessins/gq22.dessin")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("Cremona-Richmond (15_3) GQ(2,2) (isomorphism)"), std::string::npos) << r.out;
}

TEST(Cli, Search) {
  auto r = run({"search", "--index", "10", "--passport", "*, 2^4 1^2, 5^2", "--group-order", "60"});
  ASSERT_EQ(r.code, 0);
  auto lines = json_lines(r.out);
  ASSERT_FALSE(lines.empty());
  EXPECT_EQ(lines[0]["passport"][0], "3^3 1^1");
  EXPECT_EQ(run({"search", "--index", "10", "--passport", "3^3"}).code, 2);
}

TEST(Cli, Catalog) {
  auto table = run({"catalog", "--max-index", "7"});
  EXPECT_EQ(table.code, 0);
  EXPECT_NE(table.out.find("Fano plane (7_3) (isomorphism)"), std::string::npos);
  auto a = run({"catalog", "--max-index", "7", "--emit", "jsonl"});
  auto b = run({"catalog", "--max-index", "7", "--emit", "jsonl", "--workers", "2"});
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(json_lines(a.out).size(), catalog_rows(1, 7).size());
  EXPECT_EQ(run({"catalog", "--max-index", "5", "--min-index", "6"}).code, 2);
}

TEST(Cli, References) {
  auto r = run({"references", "--name", "bipartite graph K(6,6)"});
  ASSERT_EQ(r.code, 0);
  auto j = json_lines(r.out).at(0);
  EXPECT_EQ(j["published"]["S"], 255);
  EXPECT_EQ(j["computed"]["S"], 225);
  EXPECT_EQ(run({"references", "--name", "no such graph"}).code, 2);
}

TEST(Cli, BelyiVerify) {
  auto ok = run({"belyi", "verify", fixture::path("belyi/b4.map")});
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(json_lines(ok.out).at(0)["verdict"], "pass");
  auto fano = run({"belyi", "verify", fixture::path("belyi/fano.map")});
  EXPECT_EQ(fano.code, 1);
  EXPECT_EQ(json_lines(fano.out).at(0)["verdict"], "fail");
  auto cell = run({"belyi", "verify", fixture::path("belyi/cell16.map")});
  EXPECT_EQ(cell.code, 1);
  EXPECT_EQ(json_lines(cell.out).at(0)["verdict"], "degree-mismatch");
  auto bad = temp_file("bad.map", "f = x^2 +* 3\n");
  auto r = run({"belyi", "verify", bad});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("column"), std::string::npos) << r.err;
}

TEST(Cli, PauliChsh) {
  auto r = run({"pauli", "chsh", "IX", "XI", "IZ", "ZI"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("{0, 0, 8, 8}"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("sqrt(8)"), std::string::npos);
  // diagonals that commute break the square structure
  EXPECT_EQ(run({"pauli", "chsh", "IX", "XI", "XX", "ZI"}).code, 1);
  EXPECT_EQ(run({"pauli", "chsh", "IX", "XI", "IZ"}).code, 2);
  EXPECT_EQ(run({"pauli", "chsh", "IX", "XI", "IZ", "ZQ"}).code, 2);
}

TEST(Cli, PauliMagicAndSquares) {
  auto r = run({"pauli", "magic", fixture::path("pauli/mermin_square.txt")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("negative lines: 1 (odd)\ncontextual"), std::string::npos) << r.out;
  EXPECT_EQ(run({"pauli", "count-squares", "--qubits", "2"}).out, "90\n");
  EXPECT_EQ(run({"pauli", "count-squares", "--qubits", "9"}).code, 2);
}

TEST(Cli, ExpectModes) {
  auto empty = temp_file("empty.jsonl", "# nothing\n");
  auto r = run({"expect", empty});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  EXPECT_EQ(run({"expect", "/nonexistent/expect.jsonl"}).code, 2);
  EXPECT_EQ(run({"expect", temp_file("broken.jsonl", "{\"args\": \n")}).code, 2);

  // a wrong count is a deviation, a wrong paper value is only listed
  auto path = temp_file("mixed.jsonl",
                        "{\"name\": \"n=6\", \"args\": [\"enumerate\", \"--index\", \"6\", \"--emit\", \"count\"], "
                        "\"expect\": 57}\n"
                        "{\"name\": \"n=5\", \"args\": [\"enumerate\", \"--index\", \"5\", \"--emit\", \"count\"], "
                        "\"expect\": 15, \"paper\": 16, \"note\": \"made up\"}\n");
  auto m = run({"expect", path});
  EXPECT_EQ(m.code, 1);
  EXPECT_NE(m.out.find("FAIL  n=6"), std::string::npos) << m.out;
  EXPECT_NE(m.out.find("paper-discrepancy (1"), std::string::npos) << m.out;
  EXPECT_NE(m.out.find("2 checks, 1 deviations, 1 paper discrepancies"), std::string::npos) << m.out;
}

TEST(Cli, PaperExpectations) {
  auto r = run({"expect", fixture::path("expect/paper.jsonl")});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("paper-discrepancy"), std::string::npos);
  for (const char* name : {"pentagram dessin passport", "belyi 16-cell", "K(6,6) squares"})
    EXPECT_NE(r.out.find(std::string("  ") + name + ": paper says"), std::string::npos) << name;
}

TEST(Cli, SubsetMatching) {
  using cli::expect_detail::subset;
  auto j = nlohmann::json::parse(R"({"a": 1, "b": {"c": [1, 2], "d": "x"}, "e": 2.0000000001})");
  EXPECT_TRUE(subset(nlohmann::json::parse(R"({"b": {"d": "x"}})"), j));
  EXPECT_TRUE(subset(nlohmann::json::parse(R"({"e": 2})"), j));
  EXPECT_FALSE(subset(nlohmann::json::parse(R"({"b": {"c": [1]}})"), j));
  EXPECT_FALSE(subset(nlohmann::json::parse(R"({"f": null})"), j));
}
