#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

using namespace graphon_lab::cli;
using nlohmann::json;

namespace {

struct Output {
  int code;
  std::string out, err;
};

Output run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << content;
  return path.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("parse a scaling run") {
  auto cfg = parse_config(
      {"scaling", "--graphon", "sqrt:r=1", "--n-grid", "1024,2048,4096", "--trials", "10", "--seed", "7"});
  CHECK(cfg.command == "scaling");
  CHECK(cfg.graphon == "sqrt:r=1");
  CHECK(cfg.n_grid == std::vector<std::size_t>{1024, 2048, 4096});
  CHECK(cfg.trials == 10);
  CHECK(cfg.seed == 7);
  auto defaults = parse_config({"cutoff", "--graphon", "sqrt:r=1", "--n", "10"});
  CHECK(defaults.seed == 0);
}

TEST_CASE("usage errors name the offending key") {
  auto expect = [](const std::vector<std::string>& args, const std::string& needle) {
    CAPTURE(needle);
    try {
      parse_config(args);
      CHECK_MESSAGE(false, "expected a usage error");
    } catch (const UsageError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  expect({"moments", "--graphon", "line", "--n", "100", "--k", "5"}, "'graphon'");
  expect({"moments", "--graphon", "sqrt:r=1", "--n", "100"}, "'k'");
  expect({"cutoff", "--graphon", "sqrt:zz=1", "--n", "100"}, "'graphon'");
  expect({"clique", "--in", "g.edges", "--graphon", "line"}, "'in' and 'graphon'");
  expect({"scaling", "--graphon", "line", "--n-grid", "10,x"}, "'n-grid'");
  expect({"check", "--suite", "bogus"}, "'suite'");
  expect({"scaling", "--graphon", "line", "--n-grid", "8,16,32", "--method", "psychic"}, "'method'");
  expect({"cutoff", "--graphon", "line", "--n", "5", "--nonsense", "1"}, "nonsense");
  CHECK(run_cli({"moments", "--graphon", "line", "--n", "100", "--k", "5"}).code == 2);
  CHECK(run_cli({}).code == 2);
}

TEST_CASE("config files: flags win, unknown keys are rejected") {
  auto path = temp_file("graphon_lab_cli.cfg", "# study\ngraphon = poly:r=2\nn = 1000  # vertices\n");
  auto cfg = parse_config({"cutoff", "--config", path, "--graphon", "sqrt:r=1"});
  CHECK(cfg.graphon == "sqrt:r=1");
  CHECK(cfg.n == 1000);
  auto from_file = parse_config({"cutoff", "--config", path});
  CHECK(from_file.graphon == "poly:r=2");

  auto grid = temp_file("graphon_lab_grid.cfg", "graphon = sqrt:r=1\nn_grid = 64,128,256\ntrials = 3\n");
  auto sc = parse_config({"scaling", "--config", grid, "--trials", "5"});
  CHECK(sc.n_grid == std::vector<std::size_t>{64, 128, 256});
  CHECK(sc.trials == 5);

  auto bad = temp_file("graphon_lab_bad.cfg", "graphon = line\ncolour = blue\n");
  CHECK_THROWS_WITH_AS(parse_config({"cutoff", "--config", bad, "--n", "5"}),
                       doctest::Contains("'colour'"), UsageError);
  auto malformed = temp_file("graphon_lab_malformed.cfg", "graphon line\n");
  CHECK_THROWS_AS(parse_config({"cutoff", "--config", malformed}), UsageError);
  CHECK_THROWS_AS(parse_config({"cutoff", "--config", "/nonexistent/file.cfg"}), UsageError);
  for (auto p : {path, grid, bad, malformed}) std::filesystem::remove(p);
}

TEST_CASE("GRAPHON_LAB_JOBS sets the default worker count") {
  setenv("GRAPHON_LAB_JOBS", "3", 1);
  auto cfg = parse_config({"scaling", "--graphon", "sqrt:r=1", "--n-grid", "8,16,32"});
  CHECK(cfg.jobs == 3);
  auto flag = parse_config({"scaling", "--graphon", "sqrt:r=1", "--n-grid", "8,16,32", "--jobs", "2"});
  CHECK(flag.jobs == 2);
  unsetenv("GRAPHON_LAB_JOBS");
}

TEST_CASE("help output is pinned by golden files") {
  const std::string dir = GRAPHON_LAB_GOLDEN_DIR;
  for (std::string cmd : {"", "sample", "clique", "moments", "cutoff", "variance", "scaling",
                          "concentration", "check"}) {
    CAPTURE(cmd);
    std::vector<std::string> args;
    if (!cmd.empty()) args.push_back(cmd);
    args.push_back("--help");
    auto r = run_cli(args);
    CHECK(r.code == 0);
    CHECK(r.out == slurp(dir + "/help_" + (cmd.empty() ? "main" : cmd) + ".txt"));
  }
  const std::vector<std::string> flags{"--graphon", "--n-grid", "--trials", "--seed", "--method",
                                       "--threshold", "--center", "--budget-nodes",
                                       "--budget-ms", "--jobs", "--out", "--config"};
  auto scaling_help = run_cli({"scaling", "--help"}).out;
  for (const auto& f : flags) CHECK(scaling_help.find(f + " ") != std::string::npos);
}

TEST_CASE("cutoff prints JSON with provenance") {
  auto r = run_cli({"cutoff", "--graphon", "sqrt:r=1", "--n", "1000000"});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["k_star"] == 1646);
  CHECK(j["spec"] == "sqrt:r=1");
  CHECK(j["seed"] == 0);
  CHECK(j["schema_version"] == 1);
  CHECK(j.contains("version"));
}

TEST_CASE("clique on an imported K5") {
  std::string edges = "5 10\n";
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) edges += std::to_string(i) + " " + std::to_string(j) + "\n";
  auto path = temp_file("graphon_lab_k5.edges", edges);
  auto r = run_cli({"clique", "--in", path, "--method", "exact", "--budget-nodes", "10000000"});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["size"] == 5);
  CHECK(j["status"] == "optimal");
  auto thr = run_cli({"clique", "--in", path, "--method", "threshold_greedy", "--threshold", "0.1"});
  CHECK(thr.code == 2);  // no coordinates stored
  std::filesystem::remove(path);
}

TEST_CASE("sample writes a graph that clique can read back") {
  auto path = (std::filesystem::temp_directory_path() / "graphon_lab_cli_sample.edges").string();
  auto s = run_cli({"sample", "--graphon", "sqrt:r=1", "--n", "300", "--seed", "3", "--out", path});
  REQUIRE(s.code == 0);
  auto from_file = json::parse(run_cli({"clique", "--in", path}).out);
  auto direct = json::parse(run_cli({"clique", "--graphon", "sqrt:r=1", "--n", "300", "--seed", "3"}).out);
  CHECK(from_file["size"] == direct["size"]);
  auto thr = run_cli({"clique", "--in", path, "--method", "threshold_greedy", "--threshold", "0.05"});
  CHECK(thr.code == 0);
  std::filesystem::remove(path);
  std::filesystem::remove(path + ".coords");
}

TEST_CASE("tables") {
  auto m = run_cli({"moments", "--graphon", "sqrt:r=1", "--n", "12", "--k", "3", "--table"});
  REQUIRE(m.code == 0);
  std::istringstream lines(m.out);
  std::string header, row;
  std::getline(lines, header);
  CHECK(header == "n,k,log_expected");
  int rows = 0;
  while (std::getline(lines, row)) ++rows;
  CHECK(rows == 3);
  auto v = run_cli({"variance", "--graphon", "sqrt:r=1", "--n", "100", "--k", "10", "--table"});
  CHECK(v.out.rfind("n,k,log_expected,log_ratio\n100,1,", 0) == 0);
}

TEST_CASE("check exit codes") {
  auto pass = run_cli({"check", "--suite", "dominance", "--lower", "const:p=0.3", "--upper",
                       "const:p=0.7", "--n", "60", "--trials", "5"});
  CHECK(pass.code == 0);
  CHECK(json::parse(pass.out)["passed"] == true);
  auto fail = run_cli({"check", "--suite", "union_bound", "--graphon", "const:p=1", "--n", "1024",
                       "--trials", "1"});
  CHECK(fail.code == 1);
  auto moment = run_cli({"check", "--suite", "moment", "--graphon", "const:p=1", "--n", "5", "--k",
                         "3", "--trials", "20"});
  CHECK(moment.code == 0);
  auto precondition = run_cli({"check", "--suite", "dominance", "--lower", "poly:r=2", "--upper",
                               "poly:r=1", "--n", "60", "--trials", "5"});
  CHECK(precondition.code == 2);
  CHECK(precondition.err.find("dominance") != std::string::npos);
}

TEST_CASE("identical flags give byte-identical output") {
  std::vector<std::string> args{"scaling", "--graphon", "poly:r=2", "--n-grid", "64,128,256",
                                "--trials", "3", "--seed", "11", "--jobs", "2"};
  auto a = run_cli(args);
  args.back() = "1";
  auto b = run_cli(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
}
