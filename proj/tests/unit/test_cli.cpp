#include <filesystem>
#include <fstream>

#include "bvtrace/cli.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace bvtrace;
using nlohmann::json;

namespace {
json run(std::vector<std::string> args, int expected_exit = 0) {
  auto out = run_cli(args);
  INFO(out.out, out.err);
  CHECK(out.exit_code == expected_exit);
  return json::parse(out.out);
}
}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("documented invocations") {
    CHECK(run({"star", "--n", "1", "p1", "q1", "--hbar-order", "4"})["result"] == "p1*q1 + 1/2*h");
    CHECK(run({"wheel", "2"})["result"] == "-1/24");
    CHECK(run({"eisenstein", "2", "--q-order", "3"})["result"] == "1 - 24*q - 72*q^2 - 96*q^3");
  }

  TEST_CASE("document shape") {
    auto doc = run({"bracket", "p1", "q1"});
    CHECK(doc["schema"] == "bvtrace/1");
    CHECK(doc["command"] == "bracket");
    CHECK(doc["result"] == "1");
    CHECK(doc["config"]["hbar_order"] == 8);
    CHECK(doc["config"]["seed"] == 1);
  }

  TEST_CASE("subcommands") {
    CHECK(run({"hoch", "p1 | q1"})["result"]["b"] == "h");
    CHECK(run({"trace", "1", "--n", "2"})["result"] == "u^2");
    CHECK(run({"modes", "beta", "0", "gamma", "-1"})["result"] == "h");
    CHECK(run({"ope", ":beta gamma:", ":beta gamma:"})["result"]["singular"] == "-h^2/(z-w)^2");
    CHECK(run({"qme", "c"})["result"]["zero"] == true);
    CHECK(run({"recognize", "(E2^2 - E4)/12", "4", "--q-order", "20"})["result"]["success"] == true);
    CHECK(run({"fock", "bc", "--q-order", "3"})["result"] == "1 + 2*q + 3*q^2 + 6*q^3");
    CHECK(run({"ahat", "--degree", "4"})["result"] == "1 - 1/24*x^2 + 7/5760*x^4");
  }

  TEST_CASE("text format") {
    auto out = run_cli({"wheel", "2", "--format", "text"});
    CHECK(out.exit_code == 0);
    CHECK(out.out == "-1/24\n");
  }

  TEST_CASE("errors") {
    auto syntax = run({"star", "p1 +", "q1"}, 1);
    CHECK(syntax["error"]["kind"] == "syntax");
    CHECK(syntax["error"].contains("column"));
    CHECK(run({"frobnicate"}, 1)["error"]["kind"] == "usage");
    CHECK(run({"recognize", "1 + q", "12", "--q-order", "1"}, 2)["error"]["kind"] == "undecidable");
    CHECK(run({"wheel", "0"}, 2)["error"]["kind"] == "domain");
  }

  TEST_CASE("cache directory") {
    auto dir = std::filesystem::temp_directory_path() / "bvtrace_cli_cache";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    std::vector<std::string> args{"correlate", "p1^2 | q1^2", "--cache-dir", dir.string()};
    auto first = run(args);
    auto file = dir / "simplex.cache";
    REQUIRE(std::filesystem::exists(file));
    auto second = run(args);
    CHECK(first == second);
    std::ifstream in(file);
    std::string line;
    std::getline(in, line);
    in.close();
    auto key = line.substr(0, line.find(' '));
    std::ofstream(file, std::ios::trunc) << key << " 12345/7\n";
    args.push_back("--verify-cache");
    auto err = run(args, 2);
    CHECK(err["error"]["kind"] == "cache_mismatch");
    CHECK(err["error"]["message"].get<std::string>().find(key) != std::string::npos);
    std::filesystem::remove_all(dir);
  }
}
