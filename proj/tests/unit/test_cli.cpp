#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gazescale/cli.hpp"
#include "gazescale/metrics.hpp"
#include "support.hpp"

using namespace gazescale;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "gazescale");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<json> jsonl(const fs::path& p) {
  std::vector<json> rows;
  std::istringstream in(slurp(p));
  for (std::string l; std::getline(in, l);) rows.push_back(json::parse(l));
  return rows;
}

}  // namespace

TEST_CASE("usage errors") {
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"--help"}).code == kExitOk);
  CHECK(cli({"frobnicate"}).code == kExitUsage);
  CHECK(cli({"simulate"}).code == kExitUsage);  // --out is required
  CHECK(cli({"simulate", "--out", "x", "--technique", "nope"}).code == kExitUsage);
  CHECK(cli({"simulate", "--out", "x", "--reps", "0"}).code == kExitUsage);
  CHECK(cli({"replay", "/no/such/trace.jsonl"}).code == kExitUsage);
  CHECK(cli({"serve", "--port", "70000"}).code == kExitUsage);
}

TEST_CASE("config file errors are parse errors") {
  const std::string dir = testing::temp_dir("cli_config");
  std::ofstream(dir + "/bad.json") << "{";
  std::ofstream(dir + "/invalid.json") << R"({"dispersion_mode_in": 40})";
  CHECK(cli({"simulate", "--out", dir + "/o", "--config", dir + "/bad.json"}).code == kExitParse);
  CHECK(cli({"simulate", "--out", dir + "/o", "--config", dir + "/invalid.json"}).code == kExitParse);
}

TEST_CASE("simulate writes traces, results and reports") {
  const std::string dir = testing::temp_dir("cli_sim");
  const Run r = cli({"simulate", "--technique", "ptz-span", "push-pull-depth", "--scale", "1.5", "2.5",
                     "--direction", "up", "--reps", "1", "--seed", "7", "--out", dir, "--jobs", "3"});
  CHECK(r.code == kExitOk);
  const auto rows = jsonl(fs::path(dir) / "results.jsonl");
  REQUIRE(rows.size() == 4);
  int infeasible = 0;
  for (const json& row : rows) {
    if (row["infeasible"]) {
      ++infeasible;
      CHECK(row["technique"] == "ptz-span");
      CHECK(row["target_scale"] == 2.5);
      CHECK(row["trace"].is_null());
    } else {
      CHECK(fs::exists(fs::path(dir) / row["trace"].get<std::string>()));
      CHECK(row["result"]["overall_mode_switch_error"] == 0);
    }
  }
  CHECK(infeasible == 1);
  const auto report = jsonl(fs::path(dir) / "report.jsonl");
  CHECK(report[0]["record"] == "header");
  CHECK(report[0]["seed"] == 7);
  CHECK(fs::exists(fs::path(dir) / "report.txt"));
  CHECK(r.out == slurp(fs::path(dir) / "report.txt"));
}

TEST_CASE("all targets infeasible") {
  const std::string dir = testing::temp_dir("cli_infeasible");
  CHECK(cli({"simulate", "--technique", "ptz-span", "--scale", "2.5", "--direction", "left", "--reps", "1",
             "--out", dir})
            .code == kExitInfeasible);
}

TEST_CASE("replay reproduces the simulated result") {
  const std::string dir = testing::temp_dir("cli_replay");
  REQUIRE(cli({"simulate", "--technique", "bimanual", "ptz-angle", "--scale", "0.67", "--direction", "right",
               "--reps", "1", "--seed", "3", "--noise-sd", "0.002", "--out", dir})
              .code == kExitOk);
  for (const json& row : jsonl(fs::path(dir) / "results.jsonl")) {
    const Run r = cli({"replay", (fs::path(dir) / row["trace"].get<std::string>()).string()});
    REQUIRE(r.code == kExitOk);
    const auto pos = r.out.rfind("result ");
    REQUIRE(pos != std::string::npos);
    CHECK(json::parse(r.out.substr(pos + 7)) == row["result"]);
    CHECK(r.out.find("mode-in   scaling") != std::string::npos);
    CHECK(r.out.find("outline   none -> white") != std::string::npos);
  }
}

TEST_CASE("replay parse errors") {
  const std::string dir = testing::temp_dir("cli_replay_bad");
  std::ofstream(dir + "/bad.jsonl") << "{\"schema_version\": 1\n";
  const Run r = cli({"replay", dir + "/bad.jsonl"});
  CHECK(r.code == kExitParse);
  CHECK(r.err.find("line 1") != std::string::npos);

  Trace t = testing::random_trace(1);
  t.meta.technique.reset();
  save_trace(t, dir + "/anon.jsonl");
  CHECK(cli({"replay", dir + "/anon.jsonl"}).code == kExitUsage);
  CHECK(cli({"replay", dir + "/anon.jsonl", "--technique", "ptz-area"}).code == kExitOk);
}

TEST_CASE("binary entry point") {
  const std::string dir = testing::temp_dir("cli_binary");
  const std::string cmd = std::string(GAZESCALE_CLI_PATH) + " replay " + dir + "/missing.jsonl > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(status) == kExitUsage);
}
