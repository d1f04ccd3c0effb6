#pragma once

// Scenario runner: a JSON document describes a process spec and an ordered
// task list; each task writes one JSON result (and optional CSV) into the
// output directory, followed by a run manifest. Exit codes: 0 success,
// 2 validation error, 3 empirical bound violation, 1 internal error.

#include <chrono>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "depbound/harness.hpp"
#include "depbound/registry.hpp"
#include "depbound/serialize.hpp"

namespace depbound {

inline constexpr const char* kToolVersion = "depbound 1.0.0";
inline constexpr int kScenarioSchemaVersion = 1;

// FNV-1a over the raw scenario bytes; recorded in the manifest so a re-run
// can detect input drift.
inline std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

struct TaskContext {
  json task;
  std::string type;
  std::string label;  // task_<index>_<type>
};

inline std::vector<double> grid_from_json(const json& j, const std::string& field) {
  if (!j.contains(field)) throw ScenarioError("task is missing field '" + field + "'");
  auto g = j.at(field).get<std::vector<double>>();
  if (g.empty()) throw ScenarioError("field '" + field + "' must be a nonempty array");
  return g;
}

inline TailStatistic statistic_from_string(const std::string& s) {
  if (s == "abs_sum") return TailStatistic::abs_sum;
  if (s == "max_abs_sum_coord") return TailStatistic::max_abs_sum_coord;
  if (s == "matrix_lambda_max") return TailStatistic::matrix_lambda_max;
  if (s == "u_statistic") return TailStatistic::u_statistic;
  throw ScenarioError("unknown statistic '" + s + "'");
}

inline ParamMap params_from_json(const json& j) {
  ParamMap m;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_number()) throw ScenarioError("bound parameter '" + k + "' must be numeric");
    m[k] = v.get<double>();
  }
  return m;
}

}  // namespace detail

struct Scenario {
  std::string name;
  std::uint64_t seed = 0;
  std::optional<ProcessSpec> spec;
  std::vector<detail::TaskContext> tasks;
  std::string raw;  // original bytes, for the manifest hash

  static Scenario parse(const std::string& path) {
    Scenario s;
    s.raw = read_text_file(path);
    json doc;
    try {
      doc = json::parse(s.raw);
    } catch (const json::exception& e) {
      throw ScenarioError(std::string("scenario does not parse as JSON: ") + e.what());
    }
    if (!doc.contains("schema_version"))
      throw ScenarioError("scenario is missing field 'schema_version'");
    if (doc.at("schema_version").get<int>() != kScenarioSchemaVersion)
      throw ScenarioError("unsupported schema_version (expected " +
                          std::to_string(kScenarioSchemaVersion) + ")");
    s.name = doc.value("name", std::string("scenario"));
    if (!doc.contains("seed")) throw ScenarioError("scenario is missing field 'seed'");
    s.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("spec")) {
      try {
        s.spec = process_spec_from_json(doc.at("spec"));
      } catch (const std::exception& e) {
        throw ScenarioError(std::string("field 'spec' is invalid: ") + e.what());
      }
    }
    std::size_t i = 0;
    for (const auto& t : doc.value("tasks", json::array())) {
      detail::TaskContext ctx;
      ctx.task = t;
      if (!t.contains("type")) throw ScenarioError("task " + std::to_string(i) + " has no type");
      ctx.type = t.at("type").get<std::string>();
      ctx.label = "task_" + std::to_string(i) + "_" + ctx.type;
      s.tasks.push_back(std::move(ctx));
      ++i;
    }
    return s;
  }

  const ProcessSpec& require_spec() const {
    if (!spec) throw ScenarioError("task requires a top-level 'spec'");
    return *spec;
  }

  const LinearProcessSpec& require_linear() const {
    const auto* lp = std::get_if<LinearProcessSpec>(&require_spec());
    if (!lp) throw ScenarioError("task requires a scalar linear process spec");
    return *lp;
  }

  // Validates every task against its target operation's preconditions before
  // any computation starts.
  void validate() const {
    for (const auto& t : tasks) {
      const json& j = t.task;
      if (t.type == "measure") {
        require_linear();
        const double p = j.value("p", 2.0);
        if (!(p >= 1)) throw ScenarioError(t.label + ": p must be >= 1");
        const std::string method = j.value("method", std::string("analytic"));
        if (method != "analytic" && method != "monte_carlo")
          throw ScenarioError(t.label + ": method must be analytic or monte_carlo");
        if (method == "monte_carlo" && j.value("reps", std::size_t{10000}) < 100)
          throw ScenarioError(t.label + ": monte_carlo requires reps >= 100");
      } else if (t.type == "bound") {
        if (!j.contains("bound")) throw ScenarioError(t.label + ": missing field 'bound'");
        find_bound(j.at("bound").get<std::string>());
        if (!j.contains("params") && !j.contains("params_list"))
          throw ScenarioError(t.label + ": needs 'params' or 'params_list'");
      } else if (t.type == "compare") {
        if (!j.contains("bound")) throw ScenarioError(t.label + ": missing field 'bound'");
        find_bound(j.at("bound").get<std::string>());
        detail::statistic_from_string(j.value("statistic", std::string("abs_sum")));
        detail::grid_from_json(j, "x_grid");
        require_spec();
        if (!j.contains("n")) throw ScenarioError(t.label + ": missing field 'n'");
        if (j.value("reps", std::size_t{0}) < 1000)
          throw ScenarioError(t.label + ": compare requires reps >= 1000");
      } else if (t.type == "counterexample") {
        const double kappa = j.value("kappa", -1.0);
        if (!(kappa > 0 && kappa < 1))
          throw ScenarioError(t.label +
                              ": kappa violates the stationarity precondition 0 < kappa < 1");
        if (j.value("m", 0) < 1) throw ScenarioError(t.label + ": m must be >= 1");
        if (j.value("reps", std::size_t{0}) < 1000)
          throw ScenarioError(t.label + ": requires reps >= 1000");
        if (!j.contains("d") && !j.contains("d_list"))
          throw ScenarioError(t.label + ": needs 'd' or 'd_list'");
      } else if (t.type == "ustat") {
        require_linear();
        builtin_kernel(j.value("kernel", std::string("sum")), j.value("arity", 2),
                       j.value("bandwidth", 1.0));
        if (j.value("n", std::size_t{0}) < 2)
          throw ScenarioError(t.label + ": n must be >= 2");
      } else if (t.type == "autocov") {
        require_linear();
        const auto n = j.value("n", std::size_t{0});
        if (n < 2 || n > 2048)
          throw ScenarioError(t.label + ": n must lie in [2, 2048] (eigen budget)");
        if (j.value("reps", std::size_t{0}) < 1)
          throw ScenarioError(t.label + ": reps must be >= 1");
      } else {
        throw ScenarioError(t.label + ": unknown task type '" + t.type + "'");
      }
    }
  }
};

namespace detail {

// Executes one task; returns true if any comparison produced violation_flag.
inline bool run_task(const Scenario& sc, const TaskContext& t,
                     const std::filesystem::path& out_dir, json& manifest_outputs) {
  const json& j = t.task;
  const std::uint64_t seed = j.value("seed", sc.seed);
  bool violated = false;
  json result;
  std::optional<std::string> csv;

  if (t.type == "measure") {
    const auto& lp = sc.require_linear();
    const double p = j.value("p", 2.0);
    const std::size_t max_lag = j.value("max_lag", std::size_t{20});
    DependenceProfile prof;
    if (j.value("method", std::string("analytic")) == "analytic") {
      prof = fdm_analytic_linear(lp, p, max_lag);
    } else {
      prof = fdm_monte_carlo(linear_causal_map(lp), lp.innovation, p, max_lag,
                             j.value("window", std::size_t{0}),
                             j.value("reps", std::size_t{10000}), seed);
    }
    result = to_json(prof);
    csv = profile_csv(prof);
  } else if (t.type == "bound") {
    const std::string id = j.at("bound").get<std::string>();
    if (j.contains("params_list")) {
      // batch mode: array of parameter records -> CSV rows
      std::ostringstream os;
      os.precision(17);
      json rows = json::array();
      bool header = false;
      for (const auto& rec : j.at("params_list")) {
        const ParamMap params = params_from_json(rec);
        const BoundResult b = evaluate_bound(id, params);
        rows.push_back(to_json(b));
        if (!header) {
          for (const auto& [k, v] : params) {
            (void)v;
            os << k << ',';
          }
          os << "raw,clamped,vacuous\n";
          header = true;
        }
        for (const auto& [k, v] : params) {
          (void)k;
          os << v << ',';
        }
        os << b.raw << ',' << b.clamped << ',' << (b.vacuous ? 1 : 0) << '\n';
      }
      result = {{"bound", id}, {"results", rows}};
      csv = os.str();
    } else {
      const BoundResult b = evaluate_bound(id, params_from_json(j.at("params")));
      result = {{"bound", id}, {"result", to_json(b)}};
    }
  } else if (t.type == "compare") {
    const std::string id = j.at("bound").get<std::string>();
    const auto stat = statistic_from_string(j.value("statistic", std::string("abs_sum")));
    const auto n = j.at("n").get<std::size_t>();
    const auto x_grid = grid_from_json(j, "x_grid");
    ParamMap base = j.contains("params") ? params_from_json(j.at("params")) : ParamMap{};
    base["n"] = static_cast<double>(n);
    auto bound_at = [&](double x) {
      ParamMap m = base;
      m["x"] = x;
      return evaluate_bound(id, m);
    };
    std::optional<KernelSpec> kernel;
    if (stat == TailStatistic::u_statistic)
      kernel = builtin_kernel(j.value("kernel", std::string("sum")), j.value("arity", 2),
                              j.value("bandwidth", 1.0));
    const ComparisonReport rep =
        compare(id, bound_at, sc.require_spec(), stat, n, x_grid,
                j.at("reps").get<std::size_t>(), seed, kernel ? &*kernel : nullptr);
    violated = rep.has_violation();
    result = to_json(rep);
    csv = comparison_csv(rep);
  } else if (t.type == "counterexample") {
    const double kappa = j.at("kappa").get<double>();
    const int m = j.at("m").get<int>();
    const auto reps = j.at("reps").get<std::size_t>();
    std::vector<std::size_t> ds;
    if (j.contains("d_list"))
      ds = j.at("d_list").get<std::vector<std::size_t>>();
    else
      ds = {j.at("d").get<std::size_t>()};
    std::ostringstream os;
    os.precision(17);
    os << "d,beta_lower_theoretical,beta_lower_empirical,se,alpha_upper\n";
    json witnesses = json::array();
    for (std::size_t d : ds) {
      const SeparationWitness w = separation_witness(d, kappa, m, reps, seed);
      // the diagonal alpha bound is d-free, so a capped dimension is exact
      const AlphaBound a =
          alpha_upper_bound(VarSpec::diagonal_ar(static_cast<int>(std::min<std::size_t>(d, 64)),
                                                 kappa),
                            m);
      const double se = std::sqrt(w.p_joint_se * w.p_joint_se +
                                  w.p_product_se * w.p_product_se);
      os << d << ',' << w.beta_lower_theoretical << ',' << w.beta_lower_empirical << ','
         << se << ',' << a.value << '\n';
      witnesses.push_back(to_json(w));
    }
    result = {{"witnesses", witnesses}};
    csv = os.str();
  } else if (t.type == "ustat") {
    const auto& lp = sc.require_linear();
    const KernelSpec kernel = builtin_kernel(j.value("kernel", std::string("sum")),
                                             j.value("arity", 2), j.value("bandwidth", 1.0));
    const auto n = j.at("n").get<std::size_t>();
    const SeriesFragment frag = simulate_linear(lp, n, seed);
    const std::string mode = j.value("mode", std::string("u"));
    double value;
    if (mode == "u")
      value = u_statistic(frag, kernel);
    else if (mode == "v")
      value = v_statistic(frag, kernel);
    else
      throw ScenarioError(t.label + ": mode must be 'u' or 'v'");
    result = {{"kernel", j.value("kernel", std::string("sum"))},
              {"mode", mode},
              {"n", n},
              {"seed", seed},
              {"value", value}};
  } else if (t.type == "autocov") {
    const AutocovCheck c = autocov_eigen_check(sc.require_linear(),
                                               j.at("n").get<std::size_t>(),
                                               j.at("reps").get<std::size_t>(), seed);
    result = to_json(c);
  }

  const std::string json_name = t.label + ".json";
  write_text_file((out_dir / json_name).string(), result.dump(2) + "\n");
  manifest_outputs.push_back(json_name);
  if (csv) {
    const std::string csv_name = t.label + ".csv";
    write_text_file((out_dir / csv_name).string(), *csv);
    manifest_outputs.push_back(csv_name);
  }
  return violated;
}

}  // namespace detail

inline int run_scenario(const std::string& path, const std::string& output_dir,
                        std::string* error_out = nullptr) {
  Scenario sc;
  try {
    sc = Scenario::parse(path);
    sc.validate();
  } catch (const std::exception& e) {
    if (error_out) *error_out = e.what();
    return 2;
  }

  try {
    const std::filesystem::path out_dir(output_dir);
    std::filesystem::create_directories(out_dir);
    const auto t0 = std::chrono::steady_clock::now();
    json outputs = json::array();
    bool violated = false;
    for (const auto& t : sc.tasks)
      violated = detail::run_task(sc, t, out_dir, outputs) || violated;
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const json manifest{{"tool_version", kToolVersion},
                        {"scenario", sc.name},
                        {"scenario_path", path},
                        {"schema_version", kScenarioSchemaVersion},
                        {"seed", sc.seed},
                        {"wall_time_seconds", wall},
                        {"input_fnv1a", fnv1a_hex(sc.raw)},
                        {"outputs", outputs}};
    write_text_file((out_dir / "manifest.json").string(), manifest.dump(2) + "\n");
    if (violated) {
      if (error_out) *error_out = "empirical tail exceeded a bound (violation_flag)";
      return 3;
    }
    return 0;
  } catch (const ScenarioError& e) {
    if (error_out) *error_out = e.what();
    return 2;
  } catch (const std::exception& e) {
    if (error_out) *error_out = e.what();
    return 1;
  }
}

}  // namespace depbound
