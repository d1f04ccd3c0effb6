// depbound command-line front door: simulation, dependence measurement,
// bound evaluation, empirical comparison, the mixing counterexample, U/V
// statistics, the autocovariance eigenvalue check, scenario runs, and the
// bound registry dump.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "depbound/scenario.hpp"

namespace {

using namespace depbound;

ProcessSpec load_spec(const std::string& spec_arg) {
  // inline JSON or a path to a JSON file
  const std::string text =
      (!spec_arg.empty() && spec_arg.front() == '{') ? spec_arg : read_text_file(spec_arg);
  return process_spec_from_json(json::parse(text));
}

ParamMap parse_params(const std::vector<std::string>& kvs) {
  ParamMap m;
  for (const auto& kv : kvs) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("expected key=value, got '" + kv + "'");
    m[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
  }
  return m;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty())
    std::cout << text;
  else
    write_text_file(out_path, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"probability inequality toolkit for dependent time series"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  std::size_t reps = 10000;
  std::string out_path;
  bool as_json = false;
  app.add_option("--seed", seed, "root RNG seed")->capture_default_str();
  app.add_option("--reps", reps, "Monte Carlo replications")->capture_default_str();
  app.add_option("--out", out_path, "output file (or directory for scenario runs)");
  app.add_flag("--json", as_json, "emit machine-readable JSON where applicable");

  // simulate ------------------------------------------------------------------
  auto* sim = app.add_subcommand("simulate", "simulate a process fragment to CSV");
  std::string sim_spec;
  std::size_t sim_n = 100;
  sim->add_option("--spec", sim_spec, "process spec (JSON file or inline)")->required();
  sim->add_option("--n", sim_n, "fragment length")->capture_default_str();

  // measure -------------------------------------------------------------------
  auto* meas = app.add_subcommand("measure", "functional dependence measure profile");
  std::string meas_spec, meas_method = "analytic";
  double meas_p = 2.0;
  std::size_t meas_lag = 20;
  meas->add_option("--spec", meas_spec, "scalar linear process spec")->required();
  meas->add_option("--p", meas_p, "moment order")->capture_default_str();
  meas->add_option("--max-lag", meas_lag, "largest lag")->capture_default_str();
  meas->add_option("--method", meas_method, "analytic | monte_carlo")->capture_default_str();

  // bound ---------------------------------------------------------------------
  auto* bnd = app.add_subcommand("bound", "evaluate one bound calculator");
  std::string bnd_name, bnd_batch;
  std::vector<std::string> bnd_params;
  bnd->add_option("name", bnd_name, "bound id (see list-bounds)")->required();
  bnd->add_option("--param", bnd_params, "parameter key=value (repeatable)");
  bnd->add_option("--batch", bnd_batch, "JSON array of parameter records -> CSV");

  // compare -------------------------------------------------------------------
  auto* cmp = app.add_subcommand("compare", "bound vs Monte Carlo tail estimate");
  std::string cmp_spec, cmp_bound, cmp_stat = "abs_sum", cmp_grid;
  std::size_t cmp_n = 100;
  std::vector<std::string> cmp_params;
  cmp->add_option("--spec", cmp_spec, "process spec")->required();
  cmp->add_option("--bound", cmp_bound, "bound id")->required();
  cmp->add_option("--statistic", cmp_stat, "abs_sum | max_abs_sum_coord | matrix_lambda_max | u_statistic")
      ->capture_default_str();
  cmp->add_option("--n", cmp_n, "fragment length")->capture_default_str();
  cmp->add_option("--x-grid", cmp_grid, "comma-separated thresholds")->required();
  cmp->add_option("--param", cmp_params, "bound parameter key=value (repeatable)");

  // counterexample ---------------------------------------------------------------
  auto* ctr = app.add_subcommand("counterexample",
                                 "alpha/beta mixing contrast for the Gaussian VAR");
  std::vector<std::size_t> ctr_d{1000};
  double ctr_kappa = 0.5;
  int ctr_m = 2;
  ctr->add_option("--d", ctr_d, "dimension(s), repeatable for a sweep")->capture_default_str();
  ctr->add_option("--kappa", ctr_kappa, "AR coefficient in (0,1)")->capture_default_str();
  ctr->add_option("--m", ctr_m, "time gap")->capture_default_str();

  // ustat ----------------------------------------------------------------------
  auto* ust = app.add_subcommand("ustat", "exact U/V statistic of one fragment");
  std::string ust_spec, ust_kernel = "sum", ust_mode = "u";
  int ust_arity = 2;
  double ust_bw = 1.0;
  std::size_t ust_n = 100;
  ust->add_option("--spec", ust_spec, "scalar linear process spec")->required();
  ust->add_option("--kernel", ust_kernel, "sum | product | distance | gaussian_rbf")
      ->capture_default_str();
  ust->add_option("--arity", ust_arity, "kernel arity (<= 4)")->capture_default_str();
  ust->add_option("--bandwidth", ust_bw, "gaussian_rbf bandwidth")->capture_default_str();
  ust->add_option("--n", ust_n, "fragment length")->capture_default_str();
  ust->add_option("--mode", ust_mode, "u | v")->capture_default_str();

  // autocov ---------------------------------------------------------------------
  auto* aut = app.add_subcommand("autocov", "autocovariance eigenvalue inequality check");
  std::string aut_spec;
  std::size_t aut_n = 256;
  aut->add_option("--spec", aut_spec, "scalar linear process spec")->required();
  aut->add_option("--n", aut_n, "fragment length (<= 2048)")->capture_default_str();

  // run -------------------------------------------------------------------------
  auto* run = app.add_subcommand("run", "execute a scenario file");
  std::string run_path;
  run->add_option("scenario", run_path, "scenario JSON path")->required();

  // list-bounds -------------------------------------------------------------------
  auto* lst = app.add_subcommand("list-bounds", "dump the bound registry");

  // let the global flags (--seed, --reps, --out, --json) appear after the
  // subcommand as well
  for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
    sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      const ProcessSpec spec = load_spec(sim_spec);
      std::ostringstream os;
      os.precision(17);
      if (const auto* lp = std::get_if<LinearProcessSpec>(&spec)) {
        const SeriesFragment f = simulate_linear(*lp, sim_n, seed);
        os << "t,x\n";
        for (std::size_t t = 0; t < f.n; ++t) os << t << ',' << f.values[t] << '\n';
      } else if (const auto* var = std::get_if<VarSpec>(&spec)) {
        const SeriesFragment f = simulate_var(*var, sim_n, seed);
        os << "t";
        for (int j = 0; j < f.d; ++j) os << ",x" << j;
        os << '\n';
        for (std::size_t t = 0; t < f.n; ++t) {
          os << t;
          for (int j = 0; j < f.d; ++j) os << ',' << f.at(t, static_cast<int>(j));
          os << '\n';
        }
      } else {
        const auto& ms = std::get<MatrixSeriesSpec>(spec);
        const auto xs = simulate_matrix_series(ms, sim_n, seed);
        os << "t,i,j,value\n";
        for (std::size_t t = 0; t < xs.size(); ++t)
          for (int i = 0; i < xs[t].n; ++i)
            for (int j = 0; j < xs[t].n; ++j)
              os << t << ',' << i << ',' << j << ',' << xs[t](i, j) << '\n';
      }
      emit(os.str(), out_path);
    } else if (meas->parsed()) {
      const ProcessSpec spec = load_spec(meas_spec);
      const auto* lp = std::get_if<LinearProcessSpec>(&spec);
      if (!lp) throw std::invalid_argument("measure: spec must be a scalar linear process");
      DependenceProfile prof;
      if (meas_method == "analytic")
        prof = fdm_analytic_linear(*lp, meas_p, meas_lag);
      else if (meas_method == "monte_carlo")
        prof = fdm_monte_carlo(linear_causal_map(*lp), lp->innovation, meas_p, meas_lag, 0,
                               reps, seed);
      else
        throw std::invalid_argument("measure: method must be analytic or monte_carlo");
      emit(as_json ? to_json(prof).dump(2) + "\n" : profile_csv(prof), out_path);
    } else if (bnd->parsed()) {
      if (!bnd_batch.empty()) {
        const json records = json::parse(read_text_file(bnd_batch));
        std::ostringstream os;
        os.precision(17);
        bool header = false;
        for (const auto& rec : records) {
          ParamMap m;
          for (const auto& [k, v] : rec.items()) m[k] = v.get<double>();
          const BoundResult b = evaluate_bound(bnd_name, m);
          if (!header) {
            for (const auto& [k, v] : m) {
              (void)v;
              os << k << ',';
            }
            os << "raw,clamped,vacuous\n";
            header = true;
          }
          for (const auto& [k, v] : m) {
            (void)k;
            os << v << ',';
          }
          os << b.raw << ',' << b.clamped << ',' << (b.vacuous ? 1 : 0) << '\n';
        }
        emit(os.str(), out_path);
      } else {
        const BoundResult b = evaluate_bound(bnd_name, parse_params(bnd_params));
        emit(to_json(b).dump(2) + "\n", out_path);
      }
    } else if (cmp->parsed()) {
      const ProcessSpec spec = load_spec(cmp_spec);
      std::vector<double> grid;
      std::stringstream ss(cmp_grid);
      for (std::string tok; std::getline(ss, tok, ',');) grid.push_back(std::stod(tok));
      ParamMap base = parse_params(cmp_params);
      base["n"] = static_cast<double>(cmp_n);
      auto bound_at = [&](double x) {
        ParamMap m = base;
        m["x"] = x;
        return evaluate_bound(cmp_bound, m);
      };
      TailStatistic stat;
      if (cmp_stat == "abs_sum") stat = TailStatistic::abs_sum;
      else if (cmp_stat == "max_abs_sum_coord") stat = TailStatistic::max_abs_sum_coord;
      else if (cmp_stat == "matrix_lambda_max") stat = TailStatistic::matrix_lambda_max;
      else if (cmp_stat == "u_statistic") stat = TailStatistic::u_statistic;
      else throw std::invalid_argument("unknown statistic: " + cmp_stat);
      const ComparisonReport rep =
          compare(cmp_bound, bound_at, spec, stat, cmp_n, grid, reps, seed);
      emit(as_json ? to_json(rep).dump(2) + "\n" : comparison_csv(rep), out_path);
      if (rep.has_violation()) return 3;
    } else if (ctr->parsed()) {
      std::ostringstream csv;
      csv.precision(17);
      csv << "d,beta_lower_theoretical,beta_lower_empirical,se,alpha_upper\n";
      json witnesses = json::array();
      for (std::size_t d : ctr_d) {
        const SeparationWitness w = separation_witness(d, ctr_kappa, ctr_m, reps, seed);
        const AlphaBound a = alpha_upper_bound(
            VarSpec::diagonal_ar(static_cast<int>(std::min<std::size_t>(d, 64)), ctr_kappa),
            ctr_m);
        const double se =
            std::sqrt(w.p_joint_se * w.p_joint_se + w.p_product_se * w.p_product_se);
        csv << d << ',' << w.beta_lower_theoretical << ',' << w.beta_lower_empirical << ','
            << se << ',' << a.value << '\n';
        witnesses.push_back(to_json(w));
      }
      if (as_json)
        emit(json{{"witnesses", witnesses}}.dump(2) + "\n", out_path);
      else
        emit(csv.str(), out_path);
    } else if (ust->parsed()) {
      const ProcessSpec spec = load_spec(ust_spec);
      const auto* lp = std::get_if<LinearProcessSpec>(&spec);
      if (!lp) throw std::invalid_argument("ustat: spec must be a scalar linear process");
      const KernelSpec kernel = builtin_kernel(ust_kernel, ust_arity, ust_bw);
      const SeriesFragment frag = simulate_linear(*lp, ust_n, seed);
      const double value =
          ust_mode == "u" ? u_statistic(frag, kernel) : v_statistic(frag, kernel);
      const json j{{"kernel", ust_kernel}, {"arity", ust_arity}, {"mode", ust_mode},
                   {"n", ust_n},           {"seed", seed},       {"value", value}};
      emit(j.dump(2) + "\n", out_path);
    } else if (aut->parsed()) {
      const ProcessSpec spec = load_spec(aut_spec);
      const auto* lp = std::get_if<LinearProcessSpec>(&spec);
      if (!lp) throw std::invalid_argument("autocov: spec must be a scalar linear process");
      const AutocovCheck c = autocov_eigen_check(*lp, aut_n, reps, seed);
      emit(to_json(c).dump(2) + "\n", out_path);
      if (c.holds != c.reps) return 3;
    } else if (run->parsed()) {
      std::string err;
      const int code = run_scenario(run_path, out_path.empty() ? "." : out_path, &err);
      if (code != 0) std::cerr << "error: " << err << "\n";
      return code;
    } else if (lst->parsed()) {
      if (as_json) {
        json out = json::array();
        for (const auto& e : bound_registry()) {
          json params = json::array();
          for (const auto& p : e.params)
            params.push_back({{"name", p.name},
                              {"doc", p.doc},
                              {"required", p.required},
                              {"default", p.fallback},
                              {"constants_source", p.constants_source}});
          out.push_back({{"id", e.id}, {"summary", e.summary}, {"params", params}});
        }
        emit(out.dump(2) + "\n", out_path);
      } else {
        std::ostringstream os;
        for (const auto& e : bound_registry()) {
          os << e.id << "\n  " << e.summary << "\n";
          for (const auto& p : e.params) {
            os << "    --param " << p.name << "=<value>";
            if (!p.required) os << " (default " << p.fallback << ")";
            if (p.constants_source != "input") os << " [" << p.constants_source << "]";
            os << "  " << p.doc << "\n";
          }
        }
        emit(os.str(), out_path);
      }
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
