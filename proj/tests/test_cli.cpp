#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "edpdcs/cli.hpp"
#include "json.hpp"

using namespace edpdcs;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::initializer_list<std::string> args) {
  std::vector<std::string> store{"edpdcs"};
  store.insert(store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : store) argv.push_back(s.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const char* env = std::getenv("EDPDCS_CLI_SCRATCH");
  fs::path dir = fs::path(env != nullptr ? env : fs::temp_directory_path() / "edpdcs_cli") / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

nlohmann::json last_json_line(const std::string& out) {
  const auto line = out.rfind('\n', out.size() - 2);
  return nlohmann::json::parse(out.substr(line == std::string::npos ? 0 : line + 1));
}

}  // namespace

TEST_CASE("plan reports the iteration counts") {
  const auto r = cli({"plan", "--n", "748", "--d", "4", "--k", "2", "--rho", "0.225", "--eps",
                      "0.5,1,1.5,2,3", "--eps-m-override", "0.65508"});
  REQUIRE(r.code == kExitOk);
  const auto doc = last_json_line(r.out);
  std::vector<int> t;
  for (const auto& p : doc["plans"]) t.push_back(p["T"].get<int>());
  CHECK(t == std::vector<int>{2, 2, 2, 3, 4});
  CHECK(r.err.find("override") != std::string::npos);

  const auto adult = cli({"plan", "--n", "48842", "--d", "6", "--k", "5", "--eps", "1",
                          "--eps-m-override", "0.06799"});
  REQUIRE(adult.code == kExitOk);
  const auto p = last_json_line(adult.out)["plans"][0];
  CHECK(p["T"] == 7);
  CHECK(p["epsilon_dim"].get<double>() == doctest::Approx(1.0 / 49).epsilon(1e-14));
}

TEST_CASE("plan derives N and d from a dataset") {
  const auto r = cli({"plan", "--dataset", "synthetic:blood", "--eps", "1"});
  REQUIRE(r.code == kExitOk);
  const auto doc = last_json_line(r.out);
  CHECK(doc["inputs"]["n"] == 748);
  CHECK(doc["inputs"]["d"] == 4);
  CHECK(doc["inputs"]["k"] == 2);
}

TEST_CASE("usage and data errors map to exit codes") {
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"frobnicate"}).code == kExitUsage);
  CHECK(cli({"plan", "--n", "748"}).code == kExitUsage);
  CHECK(cli({"plan", "--n", "748", "--d", "4", "--k", "2", "--eps", "-1"}).code == kExitUsage);
  CHECK(cli({"run", "--variant", "nope", "--dataset", "synthetic:blood"}).code == kExitUsage);
  CHECK(cli({"--help"}).code == kExitOk);

  const fs::path dir = scratch("errors");
  const auto missing = cli({"run", "--dataset", (dir / "none.csv").string(), "--preset", "blood"});
  CHECK(missing.code == kExitData);
  CHECK(missing.err.find("none.csv") != std::string::npos);

  std::ofstream(dir / "bad.csv") << "a,b,c,d,e\n1,2,three,4,1\n";
  const auto bad = cli({"run", "--dataset", (dir / "bad.csv").string(), "--preset", "blood"});
  CHECK(bad.code == kExitData);
  CHECK(bad.err.find("line 2") != std::string::npos);
}

TEST_CASE("run writes identical reports for identical seeds") {
  const fs::path dir = scratch("run");
  const auto a = cli({"run", "--dataset", "synthetic:blood", "--eps", "1", "--seed", "4",
                      "--out", (dir / "a.json").string()});
  const auto b = cli({"run", "--dataset", "synthetic:blood", "--eps", "1", "--seed", "4",
                      "--out", (dir / "b.json").string()});
  REQUIRE(a.code == kExitOk);
  REQUIRE(b.code == kExitOk);
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
  const auto doc = nlohmann::json::parse(slurp(dir / "a.json"));
  CHECK(doc["report"]["variant"] == "EDPDCS");
  CHECK(doc["config"]["seed"] == 4);
  CHECK_FALSE(doc["report"].contains("execution"));

  const auto rf = cli({"run", "--dataset", "synthetic:blood", "--variant", "rf-dpkm", "--eps",
                       "0.5", "--seed", "2", "--out", (dir / "rf.json").string(), "--timings"});
  REQUIRE(rf.code == kExitOk);
  CHECK(nlohmann::json::parse(slurp(dir / "rf.json"))["report"].contains("execution"));
}

TEST_CASE("run honours the output directory variable") {
  const fs::path dir = scratch("outdir");
  ::setenv("EDPDCS_OUTPUT_DIR", dir.c_str(), 1);
  const auto r = cli({"run", "--dataset", "synthetic:blood", "--variant", "nonprivate",
                      "--seed", "3", "--eps", "2"});
  ::unsetenv("EDPDCS_OUTPUT_DIR");
  REQUIRE(r.code == kExitOk);
  CHECK(fs::exists(dir / "run-NONPRIVATE-eps2-seed3.json"));
}

TEST_CASE("compare writes the full grid") {
  const fs::path dir = scratch("compare");
  const auto r = cli({"compare", "--dataset", "synthetic:blood", "--seeds", "2", "--out-csv",
                      (dir / "c.csv").string(), "--out-json", (dir / "c.json").string()});
  REQUIRE(r.code == kExitOk);
  std::istringstream csv(slurp(dir / "c.csv"));
  std::vector<std::string> rows;
  for (std::string l; std::getline(csv, l);) rows.push_back(l);
  REQUIRE(rows.size() == 1 + 15 + 1);
  CHECK(rows.back().rfind("NONPRIVATE,inf,1,", 0) == 0);
  const auto doc = nlohmann::json::parse(slurp(dir / "c.json"));
  CHECK(doc["config"]["seeds"] == 2);
  CHECK(r.out == slurp(dir / "c.csv"));
}

TEST_CASE("bench writes one row per partition count") {
  const fs::path dir = scratch("bench");
  const auto r = cli({"bench", "--dataset", "synthetic:blood", "--partitions", "1,2", "--reps",
                      "1", "--out-csv", (dir / "b.csv").string()});
  REQUIRE(r.code == kExitOk);
  std::istringstream csv(slurp(dir / "b.csv"));
  std::vector<std::string> rows;
  for (std::string l; std::getline(csv, l);) rows.push_back(l);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].rfind("748,1,", 0) == 0);
  CHECK(rows[2].rfind("748,2,", 0) == 0);
  CHECK(fs::exists(dir / "b.csv.json"));
}
