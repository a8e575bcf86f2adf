#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

namespace {

struct RunResult {
  int status = -1;
  std::string out;
};

std::string cli_path() {
  const char* p = std::getenv("SNLEVY_CLI_PATH");
  REQUIRE_MESSAGE(p != nullptr, "SNLEVY_CLI_PATH must be set");
  return p;
}

RunResult run(const std::string& args) {
  RunResult r;
  std::string cmd = cli_path() + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    r.out.append(buf.data(), n);
  int rc = pclose(pipe);
  r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return r;
}

const std::string kDesk = "--model cl-exp --p 2 --lambda 1 --mu-rate 1 --q 0.1";

}  // namespace

TEST_CASE("solve reports the closed-form barrier") {
  auto r = run("solve " + kDesk);
  REQUIRE(r.status == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["method"] == "ClosedForm");
  CHECK(std::abs(j["level"].get<double>() - 4.2140705627485138) < 1e-9);
  CHECK(j["model"]["family"] == "cl-exp");
}

TEST_CASE("value at zero capital for an optimal Brownian barrier") {
  auto r = run("value --model brownian --mu 1 --sigma 1 --q 0.1 --optimal --x 0");
  REQUIRE(r.status == 0);
  auto j = nlohmann::json::parse(r.out);
  REQUIRE(j.is_array());
  CHECK(std::abs(j[0]["value"].get<double>()) < 1e-12);
}

TEST_CASE("usage errors exit with status 2") {
  CHECK(run("solve " + kDesk + " --frobnicate").status == 2);
  CHECK(run("table " + kDesk).status == 2);       // missing --x/--x-grid
  CHECK(run("value --q 0.1 --x 1 --barrier 2").status == 2);  // no model
  CHECK(run("verify --suite nonsense").status == 2);
}

TEST_CASE("table emits the documented CSV header") {
  auto r = run("table " + kDesk + " --x-grid 0.5:2:4 --output csv");
  REQUIRE(r.status == 0);
  CHECK(r.out.rfind("x,q,w,w_prime,z,wbar,zbar,source", 0) == 0);
  // header plus four rows
  int lines = 0;
  for (char c : r.out)
    if (c == '\n') ++lines;
  CHECK(lines == 5);
}

TEST_CASE("simulate emits a parseable JSON report") {
  auto r = run("simulate " + kDesk +
               " --barrier 2 --x 1 --paths 2000 --seed 5 --horizon 60");
  REQUIRE(r.status == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j.contains("dividends"));
  CHECK(j["dividends"]["n"] == 2000);
  CHECK(j["seed"] == 5);
}

TEST_CASE("verify is deterministic and exits zero on success") {
  std::string args =
      "verify --suite exit --seed 11 --paths 3000 --horizon 120";
  auto a = run(args);
  REQUIRE(a.status == 0);
  auto j = nlohmann::json::parse(a.out);
  REQUIRE(j.is_array());
  for (const auto& c : j) CHECK(c["passed"] == true);
  auto b = run(args);
  CHECK(a.out == b.out);
}

TEST_CASE("config file values are overridden by explicit flags") {
  std::string cfg = "/tmp/snlevy_cli_test.ini";
  {
    std::ofstream f(cfg);
    f << "model=cl-exp\np=2\nlambda=1\nmu-rate=1\nq=0.1\n";
  }
  auto base = run("solve --config " + cfg);
  REQUIRE(base.status == 0);
  auto j1 = nlohmann::json::parse(base.out);
  CHECK(std::abs(j1["level"].get<double>() - 4.2140705627485138) < 1e-9);
  auto over = run("solve --config " + cfg + " --q 1.0");
  REQUIRE(over.status == 0);
  auto j2 = nlohmann::json::parse(over.out);
  CHECK(j2["q"].get<double>() == 1.0);
  CHECK(j2["level"].get<double>() == 0.0);  // q past the zero-barrier cutoff
  std::remove(cfg.c_str());
}
