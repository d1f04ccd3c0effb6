#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <string>

#include "depbound/scenario.hpp"

using namespace depbound;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag)
      : path(fs::temp_directory_path() / ("depbound_scn_" + tag)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string write_scenario(const TempDir& dir, const std::string& name,
                           const std::string& body) {
  const auto p = (dir.path / name).string();
  write_text_file(p, body);
  return p;
}

}  // namespace

TEST_CASE("empty task list runs cleanly and writes a manifest") {
  TempDir dir("empty");
  const auto path = write_scenario(
      dir, "s.json", R"({"schema_version": 1, "name": "noop", "seed": 7, "tasks": []})");
  std::string err;
  const int rc = run_scenario(path, (dir.path / "out").string(), &err);
  REQUIRE(rc == 0);
  const json manifest = json::parse(read_text_file((dir.path / "out/manifest.json").string()));
  REQUIRE(manifest.at("tool_version") == kToolVersion);
  REQUIRE(manifest.at("scenario") == "noop");
  REQUIRE(manifest.at("seed") == 7);
  REQUIRE(manifest.at("schema_version") == 1);
  REQUIRE(manifest.at("outputs").empty());
  REQUIRE(manifest.contains("input_fnv1a"));
  REQUIRE(manifest.contains("wall_time_seconds"));
}

TEST_CASE("validation failures exit with code 2 before any computation") {
  TempDir dir("invalid");
  std::string err;

  // non-stationary counterexample parameter
  const auto bad_kappa = write_scenario(dir, "kappa.json", R"({
    "schema_version": 1, "seed": 1,
    "tasks": [{"type": "counterexample", "kappa": 1.5, "m": 2, "reps": 1000, "d": 10}]})");
  REQUIRE(run_scenario(bad_kappa, (dir.path / "o1").string(), &err) == 2);
  REQUIRE(err.find("stationarity precondition 0 < kappa < 1") != std::string::npos);
  REQUIRE_FALSE(fs::exists(dir.path / "o1/manifest.json"));

  // missing schema_version
  const auto no_schema =
      write_scenario(dir, "noschema.json", R"({"seed": 1, "tasks": []})");
  REQUIRE(run_scenario(no_schema, (dir.path / "o2").string(), &err) == 2);
  REQUIRE(err.find("schema_version") != std::string::npos);

  // wrong schema_version
  const auto wrong_schema =
      write_scenario(dir, "wrong.json", R"({"schema_version": 99, "seed": 1})");
  REQUIRE(run_scenario(wrong_schema, (dir.path / "o3").string(), &err) == 2);

  // unknown task type
  const auto bad_type = write_scenario(dir, "type.json", R"({
    "schema_version": 1, "seed": 1, "tasks": [{"type": "dance"}]})");
  REQUIRE(run_scenario(bad_type, (dir.path / "o4").string(), &err) == 2);
  REQUIRE(err.find("unknown task type") != std::string::npos);

  // malformed JSON
  const auto not_json = write_scenario(dir, "nj.json", "{this is not json");
  REQUIRE(run_scenario(not_json, (dir.path / "o5").string(), &err) == 2);

  // compare with too few replications
  const auto few_reps = write_scenario(dir, "reps.json", R"({
    "schema_version": 1, "seed": 1,
    "spec": {"type": "linear",
             "coefficients": {"kind": "explicit", "values": [1.0]},
             "innovation": {"kind": "standard_gaussian"}},
    "tasks": [{"type": "compare", "bound": "nagaev_linear_short", "n": 50,
               "x_grid": [10.0], "reps": 500,
               "params": {"p": 4.0, "f_l1": 1.0, "eps_lp": 1.316, "eps_l2": 1.0}}]})");
  REQUIRE(run_scenario(few_reps, (dir.path / "o6").string(), &err) == 2);
  REQUIRE(err.find("reps") != std::string::npos);
}

TEST_CASE("multi-task scenario: exit 0 and byte-identical re-run") {
  TempDir dir("multi");
  const std::string body = R"({
    "schema_version": 1,
    "name": "multi",
    "seed": 42,
    "spec": {"type": "linear",
             "coefficients": {"kind": "geometric", "kappa": 0.5},
             "innovation": {"kind": "standard_gaussian"}},
    "tasks": [
      {"type": "measure", "p": 2.0, "max_lag": 6},
      {"type": "bound", "bound": "nagaev_linear_short",
       "params": {"n": 100, "x": 40.0, "p": 4.0, "f_l1": 2.0,
                  "eps_lp": 1.316, "eps_l2": 1.0}},
      {"type": "ustat", "kernel": "sum", "arity": 2, "n": 50, "mode": "u"},
      {"type": "autocov", "n": 64, "reps": 5}
    ]})";
  const auto path = write_scenario(dir, "multi.json", body);
  std::string err;
  REQUIRE(run_scenario(path, (dir.path / "a").string(), &err) == 0);
  REQUIRE(run_scenario(path, (dir.path / "b").string(), &err) == 0);

  const json ma = json::parse(read_text_file((dir.path / "a/manifest.json").string()));
  const std::vector<std::string> outputs =
      ma.at("outputs").get<std::vector<std::string>>();
  REQUIRE(outputs.size() == 5);  // 4 JSON results + the measure CSV
  for (const auto& name : outputs) {
    const std::string a = read_text_file((dir.path / "a" / name).string());
    const std::string b = read_text_file((dir.path / "b" / name).string());
    REQUIRE(a == b);
  }
  // manifests agree except for the wall clock
  json mb = json::parse(read_text_file((dir.path / "b/manifest.json").string()));
  json ma2 = ma;
  ma2.erase("wall_time_seconds");
  mb.erase("wall_time_seconds");
  REQUIRE(ma2 == mb);

  // spot-check one artifact: the analytic profile CSV has the expected header
  const std::string csv = read_text_file((dir.path / "a/task_0_measure.csv").string());
  REQUIRE(csv.rfind("m,theta,se,Theta\n", 0) == 0);
}

TEST_CASE("an impossibly small bound triggers exit code 3") {
  TempDir dir("violation");
  // dan_p = dan_2 = 1e-8 makes the bound astronomically small while
  // P(|S_50| >= 1) is close to 1 for i.i.d. standard Gaussians
  const std::string body = R"({
    "schema_version": 1,
    "name": "violation",
    "seed": 5,
    "spec": {"type": "linear",
             "coefficients": {"kind": "explicit", "values": [1.0]},
             "innovation": {"kind": "standard_gaussian"}},
    "tasks": [
      {"type": "compare", "bound": "nagaev_dan", "statistic": "abs_sum",
       "n": 50, "x_grid": [1.0], "reps": 1000,
       "params": {"p": 3.0, "alpha": 1.0, "dan_p": 1e-8, "dan_2": 1e-8}}
    ]})";
  const auto path = write_scenario(dir, "v.json", body);
  std::string err;
  const int rc = run_scenario(path, (dir.path / "out").string(), &err);
  REQUIRE(rc == 3);
  REQUIRE(err.find("violation_flag") != std::string::npos);
  // the comparison artifact records the verdict
  const std::string csv =
      read_text_file((dir.path / "out/task_0_compare.csv").string());
  REQUIRE(csv.find("violation_flag") != std::string::npos);
}

TEST_CASE("counterexample task writes the sweep CSV") {
  TempDir dir("ce");
  const std::string body = R"({
    "schema_version": 1, "name": "ce", "seed": 9,
    "tasks": [{"type": "counterexample", "kappa": 0.5, "m": 2,
               "reps": 1000, "d_list": [10, 100]}]})";
  const auto path = write_scenario(dir, "ce.json", body);
  std::string err;
  REQUIRE(run_scenario(path, (dir.path / "out").string(), &err) == 0);
  const std::string csv =
      read_text_file((dir.path / "out/task_0_counterexample.csv").string());
  REQUIRE(csv.rfind("d,beta_lower_theoretical,beta_lower_empirical,se,alpha_upper\n",
                    0) == 0);
  REQUIRE(std::count(csv.begin(), csv.end(), '\n') == 3);
  const json result =
      json::parse(read_text_file((dir.path / "out/task_0_counterexample.json").string()));
  REQUIRE(result.at("witnesses").size() == 2);
  // the alpha bound column is dimension-free: both rows carry 0.25
  REQUIRE(csv.find("0.25") != std::string::npos);
}

TEST_CASE("input hash is stable and sensitive") {
  REQUIRE(fnv1a_hex("") == "cbf29ce484222325");
  REQUIRE(fnv1a_hex("a") != fnv1a_hex("b"));
  REQUIRE(fnv1a_hex("abc") == fnv1a_hex("abc"));
}
