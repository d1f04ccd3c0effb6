#pragma once

// JSON and CSV serialization for specs, profiles, bounds, and reports.
// JSON keys mirror the in-memory field names; seeds are always explicit.

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "depbound/counterexample.hpp"
#include "depbound/dependence.hpp"
#include "depbound/harness.hpp"
#include "depbound/matrix_bounds.hpp"
#include "depbound/process.hpp"
#include "depbound/scalar_bounds.hpp"

namespace depbound {

using json = nlohmann::json;

// ---- innovation law ---------------------------------------------------------

inline json to_json(const InnovationLaw& law) {
  return {{"kind", law.name()}, {"param", law.param}};
}

inline InnovationLaw innovation_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const double param = j.value("param", 1.0);
  if (kind == "standard_gaussian") return InnovationLaw::standard_gaussian();
  if (kind == "scaled_gaussian") return InnovationLaw::scaled_gaussian(param);
  if (kind == "uniform_symmetric") return InnovationLaw::uniform_symmetric(param);
  if (kind == "rademacher") return InnovationLaw::rademacher();
  throw std::invalid_argument("unknown innovation kind: " + kind);
}

// ---- coefficient rules --------------------------------------------------------

inline json to_json(const CoefficientRule& r) {
  switch (r.kind) {
    case CoefficientKind::geometric:
      return {{"kind", "geometric"}, {"kappa", r.kappa}};
    case CoefficientKind::polynomial:
      return {{"kind", "polynomial"}, {"scale", r.scale}, {"beta", r.beta}};
    case CoefficientKind::explicit_list:
      return {{"kind", "explicit"}, {"values", r.values}};
  }
  throw std::logic_error("unreachable");
}

inline CoefficientRule coefficients_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "geometric") return CoefficientRule::geometric(j.at("kappa").get<double>());
  if (kind == "polynomial")
    return CoefficientRule::polynomial(j.at("scale").get<double>(), j.at("beta").get<double>());
  if (kind == "explicit")
    return CoefficientRule::explicit_list(j.at("values").get<std::vector<double>>());
  throw std::invalid_argument("unknown coefficient rule kind: " + kind);
}

// ---- process specs ------------------------------------------------------------

inline json to_json(const LinearProcessSpec& s) {
  return {{"type", "linear"},
          {"coefficients", to_json(s.coefficients)},
          {"innovation", to_json(s.innovation)},
          {"truncation_lag", s.truncation_lag}};
}

inline json to_json(const VarSpec& s) {
  json j{{"type", "var"}, {"dimension", s.dimension},
         {"innovation", to_json(s.innovation)}};
  if (s.diagonal) {
    j["kappa"] = s.kappa;
  } else {
    j["transition"] = s.transition.a;
  }
  if (!s.innovation_cov.empty()) j["innovation_cov"] = s.innovation_cov;
  return j;
}

inline json to_json(const MatrixSeriesSpec& s) {
  json j{{"type", "matrix"},
         {"generator", s.generator == MatrixGenerator::rank_one_from_var
                           ? "rank_one_from_var"
                           : "diagonal_ar"},
         {"var", to_json(s.var)}};
  if (s.clip) j["clip"] = *s.clip;
  return j;
}

inline json to_json(const ProcessSpec& s) {
  return std::visit([](const auto& v) { return to_json(v); }, s);
}

inline LinearProcessSpec linear_spec_from_json(const json& j) {
  return LinearProcessSpec(coefficients_from_json(j.at("coefficients")),
                           innovation_from_json(j.at("innovation")),
                           j.value("truncation_lag", std::size_t{0}));
}

inline VarSpec var_spec_from_json(const json& j) {
  const InnovationLaw law = j.contains("innovation")
                                ? innovation_from_json(j.at("innovation"))
                                : InnovationLaw::standard_gaussian();
  VarSpec s;
  if (j.contains("kappa")) {
    s = VarSpec::diagonal_ar(j.at("dimension").get<int>(), j.at("kappa").get<double>(), law);
  } else {
    const int d = j.at("dimension").get<int>();
    Mat a(d);
    a.a = j.at("transition").get<std::vector<double>>();
    if (a.a.size() != static_cast<std::size_t>(d) * static_cast<std::size_t>(d))
      throw std::invalid_argument("var spec: transition size mismatch");
    s = VarSpec::full(std::move(a), {}, law);
  }
  if (j.contains("innovation_cov"))
    s.innovation_cov = j.at("innovation_cov").get<std::vector<double>>();
  s.validate();
  return s;
}

inline MatrixSeriesSpec matrix_spec_from_json(const json& j) {
  MatrixSeriesSpec s;
  const std::string gen = j.at("generator").get<std::string>();
  if (gen == "rank_one_from_var")
    s.generator = MatrixGenerator::rank_one_from_var;
  else if (gen == "diagonal_ar")
    s.generator = MatrixGenerator::diagonal_ar;
  else
    throw std::invalid_argument("unknown matrix generator: " + gen);
  s.var = var_spec_from_json(j.at("var"));
  if (j.contains("clip")) s.clip = j.at("clip").get<double>();
  s.validate();
  return s;
}

inline ProcessSpec process_spec_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "linear") return linear_spec_from_json(j);
  if (type == "var") return var_spec_from_json(j);
  if (type == "matrix") return matrix_spec_from_json(j);
  throw std::invalid_argument("unknown process type: " + type);
}

// ---- dependence profiles -------------------------------------------------------

inline json to_json(const TailCertificate& t) {
  switch (t.kind) {
    case TailCertificate::Kind::none: return {{"kind", "none"}};
    case TailCertificate::Kind::finite: return {{"kind", "finite"}};
    case TailCertificate::Kind::geometric:
      return {{"kind", "geometric"}, {"coef", t.coef}, {"rate", t.rate}};
    case TailCertificate::Kind::polynomial:
      return {{"kind", "polynomial"}, {"coef", t.coef}, {"beta", t.beta}};
  }
  throw std::logic_error("unreachable");
}

inline json to_json(const DependenceProfile& prof) {
  return {{"p", prof.p},
          {"theta", prof.theta},
          {"theta_se", prof.theta_se},
          {"tail", to_json(prof.tail)},
          {"provenance",
           prof.provenance == Provenance::analytic ? "analytic" : "monte_carlo"}};
}

// CSV: m, theta, se, Theta (tail sum from m).
inline std::string profile_csv(const DependenceProfile& prof) {
  std::ostringstream os;
  os.precision(17);
  os << "m,theta,se,Theta\n";
  for (std::size_t m = 0; m < prof.theta.size(); ++m)
    os << m << ',' << prof.theta[m] << ',' << prof.theta_se[m] << ','
       << prof.tail_sum(m) << '\n';
  return os.str();
}

// ---- bounds ----------------------------------------------------------------

inline std::string to_string(ConstantsSource s) {
  switch (s) {
    case ConstantsSource::paper_explicit: return "paper_explicit";
    case ConstantsSource::user_supplied: return "user_supplied";
  }
  return "?";
}

inline json to_json(const BoundResult& b) {
  return {{"raw", b.raw},
          {"clamped", b.clamped},
          {"vacuous", b.vacuous},
          {"constants_source", to_string(b.constants_source)},
          {"echo", b.echo}};
}

inline json to_json(const MatrixVarianceProxy& v) {
  return {{"value", v.value},
          {"method", v.method == MatrixVarianceProxy::Method::exact_iid
                         ? "exact_iid"
                         : "window_monte_carlo"},
          {"windows_used", v.windows_used},
          {"reps", v.reps},
          {"se", v.se},
          {"lower_estimate", v.lower_estimate}};
}

// ---- counterexample ----------------------------------------------------------

inline json to_json(const SeparationWitness& w) {
  return {{"d", w.d},
          {"kappa", w.kappa},
          {"m", w.m},
          {"sets", w.sets},
          {"theta", w.theta},
          {"xi", w.xi},
          {"eta", w.eta},
          {"threshold", w.threshold},
          {"p_joint", w.p_joint},
          {"p_joint_se", w.p_joint_se},
          {"p_product", w.p_product},
          {"p_product_se", w.p_product_se},
          {"beta_lower_empirical", w.beta_lower_empirical},
          {"beta_lower_theoretical", w.beta_lower_theoretical},
          {"reps", w.reps},
          {"seed", w.seed},
          {"markov_collapse",
           "VAR(1) is Markov: the sigma(X_0) vs sigma(X_m) witness lower-bounds "
           "the process coefficient"}};
}

// ---- harness reports ----------------------------------------------------------

inline json to_json(const TailEstimate& e) {
  return {{"n", e.n},     {"x", e.x},           {"p_hat", e.p_hat},
          {"ci_low", e.ci_low}, {"ci_high", e.ci_high}, {"reps", e.reps},
          {"seed", e.seed}};
}

inline json to_json(const ComparisonReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"n", row.n},
                    {"x", row.x},
                    {"bound", to_json(row.bound)},
                    {"estimate", to_json(row.estimate)},
                    {"verdict", to_string(row.verdict)}});
  return {{"bound_id", r.bound_id},
          {"statistic", r.statistic},
          {"process", r.process},
          {"constants_source", to_string(r.constants_source)},
          {"applicable", r.applicable},
          {"inapplicable_reason", r.inapplicable_reason},
          {"rows", rows}};
}

inline std::string comparison_csv(const ComparisonReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "theorem,n,x,bound_raw,bound_clamped,p_hat,ci_low,ci_high,verdict\n";
  for (const auto& row : r.rows)
    os << r.bound_id << ',' << row.n << ',' << row.x << ',' << row.bound.raw << ','
       << row.bound.clamped << ',' << row.estimate.p_hat << ',' << row.estimate.ci_low
       << ',' << row.estimate.ci_high << ',' << to_string(row.verdict) << '\n';
  return os.str();
}

inline json to_json(const AutocovCheck& c) {
  return {{"n", c.n},
          {"reps", c.reps},
          {"holds", c.holds},
          {"min_slack", c.min_slack},
          {"max_lambda", c.max_lambda},
          {"slack_tol", c.slack_tol}};
}

// ---- small file helpers ----------------------------------------------------------

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace depbound
