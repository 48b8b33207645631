#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "shallit/cli.hpp"

using namespace shallit;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<const char*> args) {
  args.insert(args.begin(), "shallit");
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(args.size()), args.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("range syntax") {
  CHECK(cli::parse_range("7") == std::pair{7, 7});
  CHECK(cli::parse_range("1..12") == std::pair{1, 12});
  CHECK_THROWS_AS(cli::parse_range("5..3"), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_range("1..x"), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_range(""), std::invalid_argument);
}

TEST_CASE("published prefixes") {
  const Outcome c = run({"constant", "--digits", "50"});
  CHECK(c.code == 0);
  CHECK(c.out == "1.36945140399377005843552792420621433660771875900631\n");
  const Outcome p = run({"p0star", "--digits", "20"});
  CHECK(p.out == "1.44705435001627940656\n");
}

TEST_CASE("verify emits json and succeeds") {
  const Outcome v = run({"verify", "--n", "1..12", "--digits", "60", "--format", "json"});
  CHECK(v.code == 0);
  const auto j = nlohmann::json::parse(v.out);
  CHECK(j["all_pass"] == true);
  CHECK(j["checks"].size() > 100);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({"constant", "--bogus"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"plan", "--digits", "12"}).code == 2);
  CHECK(run({"cn", "--n", "3..1"}).code == 2);
  CHECK(run({"trajectory", "--n", "0"}).code == 2);
  CHECK(run({"rates", "--quantity", "nope"}).code == 2);
  CHECK(run({"plan", "--format", "csv"}).code == 2);
  const Outcome bad = run({"frobnicate"});
  CHECK(bad.code == 2);
  CHECK_FALSE(bad.err.empty());
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("computation errors exit with 1") {
  // Gaps near n = 100 are far below what 20 digits can resolve.
  const Outcome r = run({"rates", "--n", "20..100", "--digits", "20"});
  CHECK(r.code == 1);
  CHECK(r.err.find("error:") == 0);
}

TEST_CASE("plan satisfies the budget invariants") {
  const auto j = nlohmann::json::parse(run({"plan", "--digits", "400", "--format", "json"}).out);
  CHECK(j["n"] == 704);
  CHECK(j["series_terms"] == 471);
  CHECK(j["working_digits"] == 410);
}

TEST_CASE("sweeps are ordered and deterministic") {
  const Outcome a = run({"cn", "--n", "1..30", "--digits", "30", "--format", "csv"});
  const Outcome b = run({"cn", "--n", "1..30", "--digits", "30", "--format", "csv"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  std::istringstream lines(a.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "n,A_n,C_n");
  for (int n = 1; n <= 30; ++n) {
    std::getline(lines, line);
    CHECK(line.rfind(std::to_string(n) + ",", 0) == 0);
  }
}

TEST_CASE("trajectory csv and json") {
  const Outcome csv = run({"trajectory", "--n", "1", "--digits", "16", "--format", "csv"});
  CHECK(csv.out.rfind("j,p,u,lambda\n0,1.0000000000000000,0.0000000000000000,", 0) == 0);
  const auto j = nlohmann::json::parse(run({"trajectory", "--n", "5", "--format", "json"}).out);
  CHECK(j["n"] == 5);
  CHECK(j["points"].size() == 6);
}

TEST_CASE("rates csv header") {
  const Outcome r = run({"rates", "--n", "20..30", "--digits", "40", "--format", "csv"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("n,gap,gap_times_rho_pow\n20,", 0) == 0);
}

TEST_CASE("slope") {
  const Outcome s = run({"slope", "--format", "json"});
  CHECK(s.code == 0);
  const auto j = nlohmann::json::parse(s.out);
  CHECK(j["sigma"].get<std::string>().rfind("-1.3032", 0) == 0);
}

TEST_CASE("output file and digits from the environment") {
  const auto path = std::filesystem::temp_directory_path() / "shallit_cli_test.txt";
  CHECK(run({"p0star", "--digits", "20", "--output", path.c_str()}).out.empty());
  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)), {});
  CHECK(text == "1.44705435001627940656\n");
  std::filesystem::remove(path);

  setenv("SHALLIT_DIGITS", "25", 1);
  CHECK(cli::default_digits() == 25);
  CHECK(run({"p0star"}).out == "1.4470543500162794065643653\n");
  setenv("SHALLIT_DIGITS", "abc", 1);
  CHECK(cli::default_digits() == 50);
  unsetenv("SHALLIT_DIGITS");
}
