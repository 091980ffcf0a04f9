#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "circumfeas/cli.hpp"

using circumfeas::run_cli;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int exit_code;
  std::string out;
  std::string err;
};

CliRun cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("circumfeas_test_" + name);
}

}  // namespace

TEST_CASE("gallery listing") {
  const CliRun run = cli({"gallery", "--list"});
  CHECK(run.exit_code == 0);
  CHECK(run.out.find("three_lines") != std::string::npos);
  CHECK(run.out.find("two_balls") != std::string::npos);

  const CliRun json = cli({"gallery", "--list", "--format", "json"});
  CHECK(json.exit_code == 0);
  CHECK(nlohmann::json::parse(json.out).size() == 6);
}

TEST_CASE("gallery emits a parsable instance") {
  const CliRun run = cli({"gallery", "--name", "two_balls"});
  CHECK(run.exit_code == 0);
  const auto parsed = nlohmann::json::parse(run.out);
  CHECK(parsed.at("kind") == "nonaffine");
  CHECK(parsed.at("sets").size() == 2);
}

TEST_CASE("multiset cdrm clears the three-line gallery within two iterations") {
  const CliRun run =
      cli({"solve", "--gallery", "three_lines", "--method", "cdrm-multiset",
           "--criterion", "gap", "--tol", "1e-6", "--format", "json"});
  REQUIRE(run.exit_code == 0);
  const auto parsed = nlohmann::json::parse(run.out);
  CHECK(parsed.at("stop_reason") == "converged");
  CHECK(parsed.at("iterations").get<int>() <= 2);
}

TEST_CASE("solve accepts explicit starts and prints a trace") {
  const CliRun run =
      cli({"solve", "--gallery", "two_lines_3d", "--method", "cdrm", "--x0",
           "1,2,3", "--trace", "--criterion", "true-error", "--tol", "1e-10"});
  CHECK(run.exit_code == 0);
  CHECK(run.out.find("stop: converged") != std::string::npos);
  CHECK(run.out.find("final true error") != std::string::npos);
}

TEST_CASE("solve on a random pair converges") {
  const CliRun run = cli({"solve", "--random", "--n", "20", "--dim-u", "6",
                          "--dim-v", "7", "--dim-int", "2", "--seed", "3",
                          "--method", "cdrm", "--format", "json"});
  REQUIRE(run.exit_code == 0);
  const auto parsed = nlohmann::json::parse(run.out);
  CHECK(parsed.at("stop_reason") == "converged");
  CHECK(parsed.at("final_gap").get<double>() < 1e-6);
}

TEST_CASE("angles reports the canonical cosine") {
  const CliRun run = cli({"angles", "--canonical", "--n", "6", "--angles",
                          "1.0471975511965976", "--dim-int", "1", "--format",
                          "json"});
  REQUIRE(run.exit_code == 0);
  const auto parsed = nlohmann::json::parse(run.out);
  CHECK(parsed.at("cosine").get<double>() == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(parsed.at("intersection_dim").get<int>() == 1);
}

TEST_CASE("bench writes a csv that profile consumes") {
  const fs::path records_path = temp_file("records.csv");
  const fs::path profile_path = temp_file("profile.csv");

  const CliRun bench =
      cli({"bench", "--n", "12", "--instances", "2", "--starts", "2",
           "--methods", "map,drm,cdrm", "--criterion", "gap", "--tol", "1e-6",
           "--seed", "7", "--out", records_path.string()});
  REQUIRE(bench.exit_code == 0);

  std::ifstream records_file(records_path);
  std::string line;
  int lines = 0;
  while (std::getline(records_file, line)) {
    ++lines;
  }
  CHECK(lines == 1 + 2 * 2 * 3);

  const CliRun profile = cli({"profile", "--in", records_path.string(), "--out",
                              profile_path.string()});
  CHECK(profile.exit_code == 0);
  std::ifstream profile_file(profile_path);
  std::getline(profile_file, line);
  CHECK(line == "tau,rho_map,rho_drm,rho_cdrm");

  fs::remove(records_path);
  fs::remove(profile_path);
}

TEST_CASE("bench is reproducible for a fixed seed") {
  const auto args = std::vector<std::string>{
      "bench", "--n", "10", "--instances", "2", "--starts", "2",
      "--methods", "drm,cdrm", "--tol", "1e-6", "--seed", "11", "--format",
      "json"};
  const CliRun first = cli(args);
  const CliRun second = cli(args);
  REQUIRE(first.exit_code == 0);
  const auto a = nlohmann::json::parse(first.out);
  const auto b = nlohmann::json::parse(second.out);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].at("iterations") == b[i].at("iterations"));
  }
}

TEST_CASE("config mistakes exit with code 1") {
  CHECK(cli({"solve"}).exit_code == 1);                       // no instance
  CHECK(cli({"solve", "--bogus-flag"}).exit_code == 1);       // unknown flag
  CHECK(cli({"frobnicate"}).exit_code == 1);                  // unknown command
  CHECK(cli({"gallery", "--name", "nope"}).exit_code == 1);   // unknown instance
  CHECK(cli({"profile", "--in", "/nonexistent/x.csv"}).exit_code == 1);
  CHECK(cli({"solve", "--gallery", "three_lines", "--method", "warp"}).exit_code ==
        1);
}

TEST_CASE("runtime failures exit with code 2") {
  // true-error cannot be evaluated on a non-affine instance
  const CliRun run = cli({"solve", "--gallery", "two_balls", "--method", "drm",
                          "--criterion", "true-error"});
  CHECK(run.exit_code == 2);
  CHECK(run.err.find("true-error") != std::string::npos);
}

TEST_CASE("help exits cleanly") {
  CHECK(cli({"--help"}).exit_code == 0);
  CHECK(cli({"solve", "--help"}).exit_code == 0);
}

TEST_CASE("solve reads instances from files") {
  const fs::path path = temp_file("instance.json");
  REQUIRE(cli({"gallery", "--name", "three_lines", "--out", path.string()})
              .exit_code == 0);
  const CliRun run = cli({"solve", "--in", path.string(), "--method",
                          "cdrm-multiset", "--criterion", "gap", "--tol",
                          "1e-8", "--format", "json"});
  CHECK(run.exit_code == 0);
  CHECK(nlohmann::json::parse(run.out).at("stop_reason") == "converged");
  fs::remove(path);
}

TEST_CASE("bench runs gallery instances") {
  const CliRun run =
      cli({"bench", "--generator", "gallery", "--gallery", "two_balls",
           "--instances", "1", "--starts", "3", "--methods", "drm,cdrm",
           "--tol", "1e-6", "--seed", "2", "--format", "json"});
  REQUIRE(run.exit_code == 0);
  const auto parsed = nlohmann::json::parse(run.out);
  CHECK(parsed.size() == 6);
  for (const auto& record : parsed) {
    CHECK(record.at("stop_reason") == "converged");
  }
}
