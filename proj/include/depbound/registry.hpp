#pragma once

// Static registry of the twelve probability-bound calculators, with flat
// parameter schemas so the CLI and scenario runner can invoke any of them
// from name/value pairs. Moment bounds (which return plain reals rather than
// tail probabilities) are not registered.

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "depbound/dependence.hpp"
#include "depbound/matrix_bounds.hpp"
#include "depbound/scalar_bounds.hpp"
#include "depbound/ustat.hpp"

namespace depbound {

struct ParamSpec {
  std::string name;
  std::string doc;
  bool required = true;
  double fallback = 0.0;  // used when !required
  // "input" for problem data; otherwise the provenance of the constant.
  std::string constants_source = "input";
};

using ParamMap = std::map<std::string, double>;

struct BoundEntry {
  std::string id;
  std::string summary;
  std::vector<ParamSpec> params;
  std::function<BoundResult(const ParamMap&)> invoke;
};

namespace detail {

inline double arg(const ParamMap& m, const ParamSpec& spec) {
  auto it = m.find(spec.name);
  if (it != m.end()) return it->second;
  if (!spec.required) return spec.fallback;
  throw std::invalid_argument("missing required parameter: " + spec.name);
}

// Parameter lookup bound to one entry's schema; rejects stray names.
struct Args {
  const BoundEntry& entry;
  const ParamMap& map;

  Args(const BoundEntry& e, const ParamMap& m) : entry(e), map(m) {
    for (const auto& [k, v] : m) {
      (void)v;
      bool known = false;
      for (const auto& p : entry.params)
        if (p.name == k) {
          known = true;
          break;
        }
      if (!known)
        throw std::invalid_argument("unknown parameter '" + k + "' for bound " + entry.id);
    }
  }

  double operator[](const std::string& name) const {
    for (const auto& p : entry.params)
      if (p.name == name) return arg(map, p);
    throw std::logic_error("parameter not in schema: " + name);
  }
};

// Geometric-decay profile theta_m = coef * rate^m with a certified tail, the
// registry's flat stand-in for full DependenceProfile inputs.
inline DependenceProfile geometric_profile(double p, double coef, double rate,
                                           std::size_t lags = 64) {
  if (!(rate > 0 && rate < 1))
    throw std::invalid_argument("geometric profile: rate must lie in (0,1)");
  if (!(coef >= 0)) throw std::invalid_argument("geometric profile: coef must be >= 0");
  DependenceProfile prof;
  prof.p = p;
  prof.provenance = Provenance::analytic;
  prof.theta.resize(lags + 1);
  prof.theta_se.assign(lags + 1, 0.0);
  for (std::size_t m = 0; m <= lags; ++m) prof.theta[m] = coef * std::pow(rate, m);
  prof.tail = TailCertificate::geometric(coef, rate);
  return prof;
}

}  // namespace detail

inline const std::vector<BoundEntry>& bound_registry() {
  static const std::vector<BoundEntry> entries = [] {
    std::vector<BoundEntry> v;
    auto add = [&v](BoundEntry e) { v.push_back(std::move(e)); };

    add({"nagaev_linear_short",
         "Nagaev tail for short-range linear processes, explicit c_p",
         {{"n", "sample size", true, 0, "input"},
          {"x", "threshold", true, 0, "input"},
          {"p", "moment order, > 2", true, 0, "input"},
          {"f_l1", "l1 norm of the coefficient sequence", true, 0, "input"},
          {"eps_lp", "innovation L_p norm", true, 0, "input"},
          {"eps_l2", "innovation L_2 norm", true, 0, "input"}},
         [](const ParamMap& m) {
           detail::Args a(bound_registry()[0], m);
           return nagaev_linear_short(a["n"], a["x"], a["p"], a["f_l1"], a["eps_lp"],
                                      a["eps_l2"]);
         }});

    add({"nagaev_linear_long",
         "Nagaev tail for long-range linear processes (coef ~ K m^-beta)",
         {{"n", "sample size", true, 0, "input"},
          {"x", "threshold", true, 0, "input"},
          {"p", "moment order, > 2", true, 0, "input"},
          {"beta", "coefficient decay exponent in (1/2, 1)", true, 0, "input"},
          {"K", "coefficient scale", true, 0, "input"},
          {"eps_lp", "innovation L_p norm", true, 0, "input"},
          {"eps_l2", "innovation L_2 norm", true, 0, "input"},
          {"C1", "unspecified constant", false, 1.0, "user_supplied"},
          {"C2", "unspecified constant", false, 1.0, "user_supplied"}},
         [](const ParamMap& m) {
           detail::Args a(bound_registry()[1], m);
           ConstantPack c;
           c.c1 = a["C1"];
           c.c2 = a["C2"];
           return nagaev_linear_long(a["n"], a["x"], a["p"], a["beta"], a["K"],
                                     a["eps_lp"], a["eps_l2"], c);
         }});

    add({"merlevede",
         "Chernoff bound from the alpha-mixing MGF inequality for bounded series",
         {{"n", "sample size, >= 2", true, 0, "input"},
          {"x", "threshold", true, 0, "input"},
          {"sigma_sq", "variance proxy sup over blocks", true, 0, "input"},
          {"B", "uniform bound on X_i", true, 0, "input"},
          {"C1", "unspecified constant", false, 1.0, "user_supplied"},
          {"C2", "unspecified constant", false, 1.0, "user_supplied"}},
         [](const ParamMap& m) {
           detail::Args a(bound_registry()[2], m);
           ConstantPack c;
           c.c1 = a["C1"];
           c.c2 = a["C2"];
           return merlevede_chernoff(a["n"], a["x"], a["sigma_sq"], a["B"], c);
         }});

    add({"doukhan_louhichi",
         "weak-dependence exponential bound with explicit C1, C2",
         {{"n", "sample size", true, 0, "input"},
          {"x", "threshold", true, 0, "input"},
          {"a", "dependence-rate exponent", true, 0, "input"},
          {"b", "dependence-rate exponent", true, 0, "input"},
          {"K", "kernel constant", true, 0, "input"},
          {"M", "uniform bound", true, 0, "input"},
          {"L1", "Lipschitz scale", true, 0, "input"},
          {"L2", "Lipschitz scale", true, 0, "input"}},
         [](const ParamMap& m) {
           detail::Args a(bound_registry()[3], m);
           return doukhan_louhichi_bound(a["n"], a["x"], a["a"], a["b"], a["K"], a["M"],
                                         a["L1"], a["L2"]);
         }});

    add({"nagaev_fdm",
         "Nagaev tail under the functional dependence measure; geometric theta profile "
         "theta_m = theta_coef * theta_rate^m",
         {{"n", "sample size", true, 0, "input"},
          {"x", "threshold", true, 0, "input"},
          {"p", "moment order, > 2", true, 0, "input"},
          {"variant", "1, 2, or 3", false, 1.0, "input"},
          {"theta_coef", "FDM scale at lag 0 (order p)", true, 0, "input"},
          {"theta_rate", "geometric FDM decay rate", true, 0, "input"},
          {"theta2_coef", "FDM scale at lag 0 (order 2)", true, 0, "input"},
          {"theta2_rate", "geometric FDM decay rate (order 2)", true, 0, "input"},
          {"x0_l2", "marginal L_2 norm", true, 0, "input"},
          {"x0_lp", "marginal L_p norm", true, 0, "input"},
          {"alpha", "DAN exponent (variants ii/iii)", false, 0.0, "input"},
          {"c_p", "unspecified constant", false, 1.0, "user_supplied"},
          {"C2", "unspecified constant", false, 1.0, "user_supplied"}},
         [](const ParamMap& m) {
           detail::Args a(bound_registry()[4], m);
           const int variant = static_cast<int>(a["variant"]);
           if (variant < 1 || variant > 3)
             throw std::invalid_argument("nagaev_fdm: variant must be 1, 2, or 3");
           const auto var = variant == 1   ? NagaevFdmVariant::i
                            : variant == 2 ? NagaevFdmVariant::ii
                                           : NagaevFdmVariant::iii;
           ConstantPack c;
           c.c1 = a["c_p"];
           c.c2 = a["C2"];
           const auto prof_p = detail::geometric_profile(a["p"], a["theta_coef"],
                                                         a["theta_rate"]);
           const auto prof_2 = detail::geometric_profile(2.0, a["theta2_coef"],
                                                         a["theta2_rate"]);
           return nagaev_fdm(a["n"], a["x"], a["p"], var, prof_p, prof_2, a["x0_l2"],
                             a["x0_lp"], a["alpha"], c);
         }});

    add({"nagaev_dan",
         "Nagaev tail in terms of dependence-adjusted norms",
         {{"n", "sample size", true, 0, "input"},
          {"x", "threshold", true, 0, "input"},
          {"p", "moment order, > 2", true, 0, "input"},
          {"alpha", "DAN exponent (not the regime boundary)", true, 0, "input"},
          {"dan_p", "dependence-adjusted norm at order p", true, 0, "input"},
          {"dan_2", "dependence-adjusted norm at order 2", true, 0, "input"},
          {"C1", "unspecified constant", false, 1.0, "user_supplied"},
          {"C2", "unspecified constant", false, 1.0, "user_supplied"},
          {"C3", "unspecified constant", false, 1.0, "user_supplied"}},
         [](const ParamMap& m) {
           detail::Args a(bound_registry()[5], m);
           ConstantPack c;
           c.c1 = a["C1"];
           c.c2 = a["C2"];
           c.c3 = a["C3"];
           DanValue dp{a["p"], a["alpha"], a["dan_p"], 0, true};
           DanValue d2{2.0, a["alpha"], a["dan_2"], 0, true};
           return nagaev_dan(a["n"], a["x"], a["p"], a["alpha"], dp, d2, c);
         }});

    add({"nagaev_vector_max",
         "Nagaev tail for the max-norm of vector partial sums",
         {{"n", "sample size", true, 0, "input"},
          {"x", "threshold (must clear the admissibility threshold)", true, 0, "input"},
          {"q", "moment order, > 2", true, 0, "input"},
          {"alpha", "DAN exponent (not the regime boundary)", true, 0, "input"},
          {"d", "dimension", true, 0, "input"},
          {"psi_2alpha", "uniform FDM Psi_{2,alpha}", true, 0, "input"},
          {"dan_inf", "coordinate-max dependence-adjusted norm", true, 0, "input"},
          {"C", "unspecified constant", false, 1.0, "user_supplied"}},
         [](const ParamMap& m) {
           detail::Args a(bound_registry()[6], m);
           return nagaev_vector_max(a["n"], a["x"], a["q"], a["alpha"], a["d"],
                                    a["psi_2alpha"], a["dan_inf"], a["C"]);
         }});

    add({"bernstein_matrix_independent",
         "matrix Bernstein tail for independent bounded symmetric matrices",
         {{"n", "number of summands", true, 0, "input"},
          {"x", "threshold", true, 0, "input"},
          {"d", "matrix dimension", true, 0, "input"},
          {"sigma_sq", "norm of the summed second moment", true, 0, "input"},
          {"M", "almost-sure spectral bound", true, 0, "input"}},
         [](const ParamMap& m) {
           detail::Args a(bound_registry()[7], m);
           return bernstein_independent(a["n"], a["x"], a["d"], a["sigma_sq"], a["M"]);
         }});

    add({"bernstein_matrix_beta",
         "matrix Bernstein tail under geometric beta-mixing",
         {{"n", "number of summands, >= 2", true, 0, "input"},
          {"x", "threshold", true, 0, "input"},
          {"d", "matrix dimension", true, 0, "input"},
          {"nu_sq", "variance proxy", true, 0, "input"},
          {"M", "almost-sure spectral bound", true, 0, "input"},
          {"gamma", "mixing rate exponent", true, 0, "input"},
          {"C", "unspecified constant", false, 1.0, "user_supplied"}},
         [](const ParamMap& m) {
           detail::Args a(bound_registry()[8], m);
           return bernstein_beta_mixing(a["n"], a["x"], a["d"], a["nu_sq"], a["M"],
                                        a["gamma"], a["C"]);
         }});

    add({"bernstein_matrix_tau",
         "matrix Bernstein tail under geometric tau-mixing, all constants printed",
         {{"n", "number of summands, >= 2", true, 0, "input"},
          {"x", "threshold", true, 0, "input"},
          {"d", "matrix dimension", true, 0, "input"},
          {"nu_sq", "variance proxy", true, 0, "input"},
          {"M", "almost-sure spectral bound", true, 0, "input"},
          {"psi1", "mixing rate scale", true, 0, "input"},
          {"psi2", "mixing rate exponent", true, 0, "input"}},
         [](const ParamMap& m) {
           detail::Args a(bound_registry()[9], m);
           return bernstein_tau_mixing(a["n"], a["x"], a["d"], a["nu_sq"], a["M"],
                                       a["psi1"], a["psi2"]);
         }});

    add({"ustat_exponential",
         "exponential tail for non-degenerate bounded U-statistics of weakly "
         "dependent series",
         {{"n", "sample size, >= 4", true, 0, "input"},
          {"x", "excess over c' M / sqrt(n)", true, 0, "input"},
          {"M", "kernel bound scale", true, 0, "input"},
          {"c_prime", "unspecified centering constant", false, 1.0, "user_supplied"},
          {"C_prime", "unspecified rate constant", false, 1.0, "user_supplied"}},
         [](const ParamMap& m) {
           detail::Args a(bound_registry()[10], m);
           return ustat_exponential_bound(a["n"], a["x"], a["M"], a["c_prime"],
                                          a["C_prime"]);
         }});

    add({"vstat_fourier",
         "tail for degenerate V-statistic components of kernels with integrable "
         "Fourier transform",
         {{"n", "sample size, >= 2", true, 0, "input"},
          {"x", "threshold", true, 0, "input"},
          {"p", "component order, 1..r", true, 0, "input"},
          {"r", "kernel arity", true, 0, "input"},
          {"fourier_l1", "L1 norm of the kernel Fourier transform", true, 0, "input"},
          {"c", "mixing rate scale", true, 0, "input"},
          {"C", "mixing rate exponent", true, 0, "input"},
          {"C_prime", "unspecified rate constant", false, 1.0, "user_supplied"}},
         [](const ParamMap& m) {
           detail::Args a(bound_registry()[11], m);
           return vstat_fourier_bound(a["n"], a["x"], static_cast<int>(a["p"]),
                                      static_cast<int>(a["r"]), a["fourier_l1"], a["c"],
                                      a["C"], a["C_prime"]);
         }});

    return v;
  }();
  return entries;
}

inline const BoundEntry& find_bound(const std::string& id) {
  for (const auto& e : bound_registry())
    if (e.id == id) return e;
  throw std::invalid_argument("unknown bound id: " + id);
}

inline BoundResult evaluate_bound(const std::string& id, const ParamMap& params) {
  return find_bound(id).invoke(params);
}

}  // namespace depbound
