#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

#include "fraclie/commands.hpp"

using namespace fraclie;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(cli({"tables", "--case", "1"}).code == kExitPass);
  CHECK(cli({"tables", "--case", "2.1", "--alpha", "1/3", "--m", "1"}).code == kExitInput);
  CHECK(cli({"tables", "--case", "2.2", "--alpha", "1/2"}).code == kExitInput);
  CHECK(cli({"tables", "--case", "3"}).code == kExitInput);
  CHECK(cli({"verify", "--family", "19", "--m", "1", "--k", "1", "--alpha", "1/3"}).code == kExitInput);
  CHECK(cli({"verify", "--family", "19", "--m", "2", "--alpha", "0.5"}).code == kExitInput);
  CHECK(cli({"bogus"}).code == kExitInput);
  CHECK(cli({}).code == kExitInput);
  CHECK(cli({"--help"}).code == kExitPass);
}

TEST_CASE("exit code mapping") {
  CHECK(exit_code_for(QuadratureFailure("x")) == kExitFail);
  CHECK(exit_code_for(Instability("x")) == kExitFail);
  CHECK(exit_code_for(NonrealRoot("x")) == kExitInput);
  CHECK(exit_code_for(SingularParameter("x")) == kExitInput);
}

TEST_CASE("tables text output") {
  const Run r = cli({"tables", "--case", "1"});
  CHECK(r.out.find("((1-α)/α)·X2") != std::string::npos);
  CHECK(r.out.find("matches") != std::string::npos);
}

TEST_CASE("verify json report") {
  const Run r = cli({"verify", "--family", "19", "--m", "2", "--alpha", "1/3"});
  REQUIRE(r.code == kExitPass);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["schema"] == "fraclie-report/1");
  CHECK(doc["status"] == "pass");
  CHECK(doc["checks"].size() == 3);
  for (const auto& c : doc["checks"]) CHECK(c["pass"] == true);
}

TEST_CASE("verify reports a nonreal root as an error record") {
  const Run r = cli({"verify", "--family", "19", "--m", "2", "--k", "1", "--alpha", "1/2"});
  CHECK(r.code == kExitInput);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["status"] == "error");
  CHECK(doc["error"]["kind"] == "NonrealRoot");
}

TEST_CASE("optimal lists and checks equivalences") {
  const Run r = cli({"optimal", "--case", "2.2", "--alpha", "1/3", "--format", "json"});
  REQUIRE(r.code == kExitPass);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["elements"].size() == 5);
  CHECK(doc["equivalences"].size() == 8);
}

TEST_CASE("evolve csv and single step") {
  const Run csv = cli({"evolve", "--steps", "2", "--format", "csv"});
  REQUIRE(csv.code == kExitPass);
  CHECK(csv.out.rfind("t,x,u,v\n", 0) == 0);
  const Run one = cli({"evolve", "--steps", "1"});
  REQUIRE(one.code == kExitPass);
  const auto doc = nlohmann::json::parse(one.out);
  CHECK(doc["runs"].size() == 1);
  CHECK_FALSE(doc.contains("order"));
  const Run flat = cli({"evolve", "--family", "5.1", "--a", "0"});
  CHECK(nlohmann::json::parse(flat.out)["x_independence_preserved"] == true);
}

TEST_CASE("config file values are overridden by flags") {
  const std::string path = "fraclie_test_config.txt";
  {
    std::ofstream f(path);
    f << "# comment\nfamily = 19\nm = 2\nalpha = 1/2\n";
  }
  // alpha from the file would give a nonreal root; the flag wins.
  const Run r = cli({"verify", "--config", path, "--alpha", "1/3"});
  CHECK(r.code == kExitPass);
  CHECK(cli({"verify", "--config", path}).code == kExitInput);
  std::remove(path.c_str());
  CHECK(cli({"verify", "--config", "missing.cfg", "--family", "19"}).code == kExitInput);
}

TEST_CASE("selftest filter") {
  const Run r = cli({"selftest", "--filter", "tables"});
  CHECK(r.code == kExitPass);
  CHECK(r.out.find("PASS") != std::string::npos);
  CHECK(cli({"selftest", "--filter", "nothing-matches"}).code == kExitInput);
}
