#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <string>

#include "depbound/serialize.hpp"

using namespace depbound;

TEST_CASE("linear spec JSON roundtrip") {
  const LinearProcessSpec spec(CoefficientRule::geometric(0.5),
                               InnovationLaw::uniform_symmetric(1.5), 40);
  const json j = to_json(spec);
  REQUIRE(j.at("type") == "linear");
  REQUIRE(j.at("coefficients").at("kind") == "geometric");
  const LinearProcessSpec back = linear_spec_from_json(j);
  REQUIRE(back.coefficients.kind == CoefficientKind::geometric);
  REQUIRE(back.coefficients.kappa == 0.5);
  REQUIRE(back.innovation.name() == "uniform_symmetric");
  REQUIRE(back.innovation.param == 1.5);
  REQUIRE(back.truncation_lag == 40);

  const LinearProcessSpec ex(CoefficientRule::explicit_list({1.0, -0.5}),
                             InnovationLaw::rademacher());
  const LinearProcessSpec ex_back = linear_spec_from_json(to_json(ex));
  REQUIRE(ex_back.coefficients.values == std::vector<double>{1.0, -0.5});
  REQUIRE(ex_back.innovation.name() == "rademacher");

  const LinearProcessSpec poly(CoefficientRule::polynomial(2.0, 1.25),
                               InnovationLaw::scaled_gaussian(0.3));
  const LinearProcessSpec poly_back = linear_spec_from_json(to_json(poly));
  REQUIRE(poly_back.coefficients.kind == CoefficientKind::polynomial);
  REQUIRE(poly_back.coefficients.scale == 2.0);
  REQUIRE(poly_back.coefficients.beta == 1.25);
}

TEST_CASE("VAR spec JSON roundtrip: diagonal and full") {
  const VarSpec diag = VarSpec::diagonal_ar(3, 0.6);
  const json jd = to_json(diag);
  REQUIRE(jd.at("type") == "var");
  REQUIRE(jd.at("kappa") == 0.6);
  const VarSpec diag_back = var_spec_from_json(jd);
  REQUIRE(diag_back.diagonal);
  REQUIRE(diag_back.dimension == 3);
  REQUIRE(diag_back.kappa == 0.6);

  Mat a(2);
  a(0, 0) = 0.5;
  a(0, 1) = 0.1;
  a(1, 0) = 0.2;
  a(1, 1) = 0.25;
  const VarSpec full = VarSpec::full(a);
  const VarSpec full_back = var_spec_from_json(to_json(full));
  REQUIRE_FALSE(full_back.diagonal);
  REQUIRE(full_back.transition.a == a.a);

  VarSpec with_cov = VarSpec::diagonal_ar(2, 0.0);
  with_cov.innovation_cov = {2.0, 0.5};
  const VarSpec cov_back = var_spec_from_json(to_json(with_cov));
  REQUIRE(cov_back.innovation_cov == std::vector<double>{2.0, 0.5});
}

TEST_CASE("matrix spec JSON roundtrip and variant dispatch") {
  MatrixSeriesSpec spec;
  spec.generator = MatrixGenerator::rank_one_from_var;
  spec.var = VarSpec::diagonal_ar(2, 0.5);
  spec.clip = 1.5;
  const json j = to_json(spec);
  REQUIRE(j.at("type") == "matrix");
  REQUIRE(j.at("generator") == "rank_one_from_var");
  const MatrixSeriesSpec back = matrix_spec_from_json(j);
  REQUIRE(back.generator == MatrixGenerator::rank_one_from_var);
  REQUIRE(back.clip.has_value());
  REQUIRE(*back.clip == 1.5);

  // dispatch through the variant entry point
  const ProcessSpec p = process_spec_from_json(to_json(ProcessSpec{spec}));
  REQUIRE(process_kind(p) == "matrix");
}

TEST_CASE("bad JSON kinds are rejected") {
  REQUIRE_THROWS_AS(process_spec_from_json({{"type", "alien"}}), std::invalid_argument);
  REQUIRE_THROWS_AS(innovation_from_json({{"kind", "cauchy"}}), std::invalid_argument);
  REQUIRE_THROWS_AS(coefficients_from_json({{"kind", "hyperbolic"}}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(matrix_spec_from_json({{"type", "matrix"},
                                           {"generator", "unknown"},
                                           {"var", {{"dimension", 1}, {"kappa", 0.5}}}}),
                    std::invalid_argument);
  // transition array of the wrong size
  REQUIRE_THROWS_AS(var_spec_from_json({{"type", "var"},
                                        {"dimension", 2},
                                        {"transition", {0.1, 0.2, 0.3}}}),
                    std::invalid_argument);
}

TEST_CASE("report serialization carries every key") {
  const BoundResult b = BoundResult::probability(
      0.25, ConstantsSource::paper_explicit, {{"n", 10.0}, {"c_p", 0.5}});
  const json jb = to_json(b);
  for (const char* k : {"raw", "clamped", "vacuous", "constants_source", "echo"})
    REQUIRE(jb.contains(k));
  REQUIRE(jb.at("constants_source") == "paper_explicit");
  REQUIRE(jb.at("echo").at("c_p") == 0.5);

  DependenceProfile prof;
  prof.p = 2.0;
  prof.theta = {1.0, 0.5};
  prof.theta_se = {0.0, 0.0};
  prof.tail = TailCertificate::geometric(1.0, 0.5);
  const json jp = to_json(prof);
  for (const char* k : {"p", "theta", "theta_se", "tail", "provenance"})
    REQUIRE(jp.contains(k));
  REQUIRE(jp.at("tail").at("kind") == "geometric");

  SeparationWitness w;
  const json jw = to_json(w);
  for (const char* k :
       {"d", "kappa", "m", "sets", "theta", "xi", "eta", "threshold", "p_joint",
        "p_product", "beta_lower_empirical", "beta_lower_theoretical", "seed"})
    REQUIRE(jw.contains(k));

  AutocovCheck c;
  const json jc = to_json(c);
  for (const char* k : {"n", "reps", "holds", "min_slack", "max_lambda", "slack_tol"})
    REQUIRE(jc.contains(k));

  TailEstimate e;
  const json je = to_json(e);
  for (const char* k : {"n", "x", "p_hat", "ci_low", "ci_high", "reps", "seed"})
    REQUIRE(je.contains(k));
}

TEST_CASE("CSV headers are stable") {
  DependenceProfile prof;
  prof.p = 2.0;
  prof.theta = {1.0, 0.5};
  prof.theta_se = {0.0, 0.0};
  prof.tail = TailCertificate::finite();
  const std::string pcsv = profile_csv(prof);
  REQUIRE(pcsv.rfind("m,theta,se,Theta\n", 0) == 0);
  // one row per lag
  REQUIRE(std::count(pcsv.begin(), pcsv.end(), '\n') == 3);

  ComparisonReport rep;
  rep.bound_id = "nagaev_linear_short";
  ComparisonRow row;
  row.n = 10;
  row.x = 2.0;
  row.bound = BoundResult::probability(0.5, ConstantsSource::paper_explicit);
  rep.rows.push_back(row);
  const std::string ccsv = comparison_csv(rep);
  REQUIRE(ccsv.rfind("theorem,n,x,bound_raw,bound_clamped,p_hat,ci_low,ci_high,verdict\n",
                     0) == 0);
  REQUIRE(ccsv.find("nagaev_linear_short,10,2") != std::string::npos);
  REQUIRE(ccsv.find("dominated") != std::string::npos);
}

TEST_CASE("text file write/read roundtrip") {
  const auto path =
      (std::filesystem::temp_directory_path() / "depbound_serialize_test.txt").string();
  const std::string payload = "line1\nline2\n\x01\x02 binary-ish bytes";
  write_text_file(path, payload);
  REQUIRE(read_text_file(path) == payload);
  std::remove(path.c_str());
  REQUIRE_THROWS_AS(read_text_file(path), std::runtime_error);
}
