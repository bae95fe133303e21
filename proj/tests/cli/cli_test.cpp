#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct Run {
  int code = -1;
  std::string out;
};

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("adeglab_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Run run(const std::string& args) {
  const std::string command = "ADEGLAB_CACHE_DIR='" + (scratch() / "cache").string() + "' '" ADEGLAB_CLI_PATH "' " +
                              args + " 2>/dev/null";
  Run r;
  FILE* pipe = ::popen(command.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buffer;
  std::size_t n;
  while ((n = std::fread(buffer.data(), 1, buffer.size(), pipe)) > 0) r.out.append(buffer.data(), n);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string strip_comments(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.rfind("# command:", 0) != 0) out += line + '\n';
  }
  return out;
}

TEST(Cli, AnalyzeRecursiveMajority) {
  const auto r = run("analyze 'MAJ3^2'");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("arity"), 9);
  EXPECT_EQ(j.at("approx_degree").at("degree"), 3);
  EXPECT_NEAR(j.at("lambda").get<double>(), 4.0, 1e-9);
  EXPECT_EQ(j.at("sign_degree"), 3);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("analyze 'AND2 o (OR2, OR2, OR2)'").code, 1);
  EXPECT_EQ(run("analyze MAJ3 --eps 0.3").code, 1);
  EXPECT_EQ(run("--mode fast analyze MAJ3").code, 1);
  EXPECT_EQ(run("analyze 'MAJ3^3'").code, 2);
  EXPECT_EQ(run("maj-projection --n 5 --d-max 1 --attempts 3").code, 2);
  EXPECT_EQ(run("simulate-gates XOR3").code, 1);
  EXPECT_EQ(run("--help").code, 0);
}

TEST(Cli, DualAndOneSided) {
  auto j = nlohmann::json::parse(run("dual XOR2 --degree 2").out);
  EXPECT_EQ(j.at("kind"), "witness");
  EXPECT_EQ(j.at("witness").at("correlation"), "1/2");
  j = nlohmann::json::parse(run("dual XOR2 --degree 3").out);
  EXPECT_EQ(j.at("kind"), "refutation");
  j = nlohmann::json::parse(run("--mode float dual OR2 --degree 1 --one-sided").out);
  EXPECT_EQ(j.at("kind"), "witness");
}

TEST(Cli, SimulateAndProject) {
  auto r = run("simulate-gates 'tt:2:0x7'");
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("and2").at("depth"), 2);
  EXPECT_EQ(j.at("negation_gadget").at("free"), 2);
  r = run("--seed 1 maj-projection --n 5 --base MAJ3");
  ASSERT_EQ(r.code, 0);
  j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j.at("found").get<bool>());
  EXPECT_LE(j.at("depth").get<int>(), 6);
}

TEST(Cli, CensusCsv) {
  const auto r = run("census --arity 3 --format csv");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("# qualifying: 214"), std::string::npos);
  EXPECT_NE(r.out.find("# passed: 214"), std::string::npos);
}

TEST(Cli, ComposeTableIsReproducible) {
  const auto pairs = scratch() / "pairs.txt";
  std::ofstream(pairs) << "# outer ; inner\nAND2 ; XOR2\nMAJ3 ; MAJ3\nOR2 o AND2 ; ID1\n";
  const std::string args = "compose-table --pairs '" + pairs.string() + "' --no-runtime";
  const auto a = run("--no-cache " + args);
  const auto b = run("--jobs 2 " + args);
  ASSERT_EQ(a.code, 0);
  ASSERT_EQ(b.code, 0);
  EXPECT_EQ(strip_comments(a.out), strip_comments(b.out));
  EXPECT_NE(a.out.find("\nAND2,XOR2,4,1,2,2,"), std::string::npos) << a.out;
}

TEST(Cli, AmplifyAndOutFile) {
  const auto out = scratch() / "report.json";
  const auto r = run("--out '" + out.string() + "' amplify --outer AND2 --inner XOR2 --middle MAJ --t 1");
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(out);
  const auto j = nlohmann::json::parse(in);
  EXPECT_TRUE(j.at("invariants_ok").get<bool>());
  EXPECT_TRUE(j.at("bound_met").get<bool>());
  const auto given = run("amplify --outer AND2 --inner OR2 --middle XOR2");
  EXPECT_EQ(given.code, 0);
}

TEST(Cli, CacheGc) {
  ASSERT_EQ(run("analyze AND2").code, 0);
  const auto j = nlohmann::json::parse(run("cache gc --all").out);
  EXPECT_GE(j.at("removed").get<int>(), 1);
}

}  // namespace
