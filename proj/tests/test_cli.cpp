#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

using durr::cli::cli_main;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "durr");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::filesystem::path scratch_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "durr_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("worked examples") {
  const Result exact = run_cli({"moments", "--n", "1", "--beta", "1/2", "--k", "2", "--r", "1", "--method",
                                "stirling-sum", "--exact", "--format", "json"});
  CHECK(exact.code == 0);
  CHECK(exact.out.find("\"8/3\"") != std::string::npos);

  const Result paper = run_cli({"paper-check", "--family", "T", "--n", "10", "--beta", "0", "--x", "1", "--r", "2"});
  REQUIRE(paper.code == 0);
  CHECK(first_line(paper.out) == "family,order,n,beta,point,exact,closed,abs_gap,rel_gap");
  std::stringstream lines(paper.out);
  std::string line;
  std::getline(lines, line);
  REQUIRE(std::getline(lines, line));
  const auto cells = split(line);
  REQUIRE(cells.size() == 9);
  CHECK(std::stod(cells[6]) == doctest::Approx(1.42).epsilon(1e-15));
  CHECK(std::stod(cells[7]) <= 1e-8);

  const Result eval = run_cli({"eval", "--f", "t", "--n", "5", "--beta", "0.3", "--x", "2", "--operator", "jain"});
  REQUIRE(eval.code == 0);
  std::stringstream eval_lines(eval.out);
  std::getline(eval_lines, line);
  std::getline(eval_lines, line);
  CHECK(std::stod(split(line).back()) == doctest::Approx(2.857143).epsilon(1e-6));
}

TEST_CASE("CSV headers are fixed per subcommand") {
  const std::pair<std::vector<std::string>, std::string> cases[] = {
      {{"basis", "--n", "2", "--x", "1"}, "n,beta,x,k,value,log_value,cumulative_mass"},
      {{"moments", "--k", "1", "--r", "2"}, "n,beta,k,r,method,value,exact,abs_error_bound"},
      {{"eval", "--f", "e2", "--x", "1"}, "operator,f,n,beta,x,value"},
      {{"voronovskaja", "--f", "e1", "--n", "10,20"}, "f,x,beta,n,scaled_error,extrapolated,formula,gap"},
      {{"korovkin", "--n", "10,20", "--b", "1", "--step", "0.5"}, "beta,n,dist_e0,dist_e1,dist_e2"},
      {{"bound-check", "--n", "10", "--b", "1", "--step", "0.5"},
       "f,n,beta,x,lhs,omega2_term,omega_term,inconclusive"},
      {{"order-check", "--r", "2", "--n", "10,20"}, "r,beta,x,n,mu,below_noise"},
  };
  for (const auto& [args, header] : cases) {
    const Result r = run_cli(args);
    CAPTURE(args[0]);
    CHECK(r.code == 0);
    CHECK(first_line(r.out) == header);
    CHECK(r.out.find('\r') == std::string::npos);
    CHECK(r.out.back() == '\n');
  }
}

TEST_CASE("numbers carry 17 significant digits and fractions render as p/q") {
  const Result r = run_cli({"moments", "--n", "3", "--beta", "1/3", "--k", "2", "--r", "1", "--exact"});
  REQUIRE(r.code == 0);
  std::stringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  std::getline(lines, line);
  const auto cells = split(line);
  REQUIRE(cells.size() == 8);
  CHECK(cells[1] == "1/3");
  // (k + 1 + ...) exact ratio and its 17-digit rendering.
  CHECK(cells[6].find('/') != std::string::npos);
  char expected[32];
  std::snprintf(expected, sizeof expected, "%.17g", std::stod(cells[5]));
  CHECK(cells[5] == expected);
}

TEST_CASE("JSON reports") {
  const Result r = run_cli({"korovkin", "--n", "10,20", "--beta", "0.5", "--b", "1", "--step", "0.25", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["meta"]["tool"] == "durr");
  CHECK(j["meta"].contains("version"));
  CHECK(j["meta"]["config"]["subcommand"] == "korovkin");
  CHECK(j["rows"].size() == 2);
  CHECK(j["rows"][0]["n"] == 10);
  CHECK(j["summary"].contains("passed"));
  // Stable key order: meta, rows, summary.
  CHECK(r.out.find("\"meta\"") < r.out.find("\"rows\""));
  CHECK(r.out.find("\"rows\"") < r.out.find("\"summary\""));
}

TEST_CASE("identical configs give byte-identical files") {
  const auto dir = scratch_dir();
  const std::vector<std::vector<std::string>> commands = {
      {"moments", "--n", "1,3", "--beta", "1/2", "--k", "0,1,2", "--exact"},
      {"paper-check", "--family", "mu", "--n", "10,50", "--beta", "0.25", "--x", "0.5,2"},
      {"eval", "--f", "exp(-t) * (1 + t)", "--x-grid", "0:2:0.5", "--n", "20", "--beta", "0.3"},
      {"voronovskaja", "--f", "exp_decay", "--n", "10,20,40", "--x", "1"},
  };
  int index = 0;
  for (const auto& command : commands) {
    for (const char* format : {"csv", "json"}) {
      std::string contents[2];
      std::string meta[2];
      for (int run = 0; run < 2; ++run) {
        const auto path = dir / ("run" + std::to_string(index) + "_" + std::to_string(run) + "." + format);
        auto args = command;
        args.insert(args.end(), {"--format", format, "-o", path.string()});
        const Result r = run_cli(args);
        CAPTURE(command[0]);
        REQUIRE(r.code == 0);
        CHECK(r.out.empty());
        contents[run] = slurp(path);
        if (std::string(format) == "csv") meta[run] = slurp(path.string() + ".meta.json");
      }
      CHECK_FALSE(contents[0].empty());
      CHECK(contents[0] == contents[1]);
      CHECK(meta[0] == meta[1]);
      if (std::string(format) == "csv") CHECK_FALSE(meta[0].empty());
      ++index;
    }
  }
}

TEST_CASE("errors map to exit codes") {
  using namespace durr::cli;
  CHECK(run_cli({}).code == kConfigError);
  CHECK(run_cli({"frobnicate"}).code == kConfigError);
  CHECK(run_cli({"moments", "--bogus"}).code == kConfigError);
  CHECK(run_cli({"moments", "--beta", "1"}).code == kConfigError);
  CHECK(run_cli({"moments", "--beta", "-0.1"}).code == kConfigError);
  CHECK(run_cli({"moments", "--n", "0"}).code == kConfigError);
  CHECK(run_cli({"moments", "--beta", "0.5", "--exact"}).code == kConfigError);
  CHECK(run_cli({"moments", "--beta", "1/0", "--exact"}).code == kConfigError);
  CHECK(run_cli({"eval", "--f", "log(t)"}).code == kConfigError);
  CHECK(run_cli({"eval", "--f", "exp(t)"}).code == kConfigError);
  CHECK(run_cli({"paper-check", "--family", "mu", "--r", "7", "--n", "10"}).code == kConfigError);
  CHECK(run_cli({"korovkin", "--a", "2", "--b", "1"}).code == kConfigError);

  const Result syntax = run_cli({"eval", "--f", "2*t + -"});
  CHECK(syntax.code == kConfigError);
  CHECK(syntax.err.find("offset 7") != std::string::npos);

  const Result quad = run_cli({"eval", "--f", "abs_kink:0.37", "--n", "3", "--beta", "0.5", "--x", "1",
                               "--max-panels", "1", "--rel-tol", "1e-15", "--abs-tol", "1e-300"});
  CHECK(quad.code == kNumerical);
  CHECK(quad.err.find("basis index k =") != std::string::npos);

  const Result saturated = run_cli({"basis", "--n", "50", "--beta", "0.5", "--x", "4", "--hard-cap", "10"});
  CHECK(saturated.code == kSaturated);
  CHECK_FALSE(saturated.out.empty());
  CHECK(saturated.err.find("saturated") != std::string::npos);

  CHECK(run_cli({"--version"}).code == kOk);
}
