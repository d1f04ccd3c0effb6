#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "depbound/innovations.hpp"
#include "depbound/numeric.hpp"

using namespace depbound;

TEST_CASE("lp_norm closed forms") {
  const auto g = InnovationLaw::standard_gaussian();
  REQUIRE(g.lp_norm(2.0) == Catch::Approx(1.0).epsilon(1e-14));
  REQUIRE(g.lp_norm(4.0) == Catch::Approx(std::pow(3.0, 0.25)).epsilon(1e-14));

  const auto sg = InnovationLaw::scaled_gaussian(2.0);
  REQUIRE(sg.lp_norm(2.0) == Catch::Approx(2.0).epsilon(1e-14));
  REQUIRE(sg.variance() == Catch::Approx(4.0).epsilon(1e-14));

  const auto u = InnovationLaw::uniform_symmetric(1.0);
  REQUIRE(u.lp_norm(2.0) == Catch::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
  REQUIRE(u.lp_norm(4.0) == Catch::Approx(std::pow(5.0, -0.25)).epsilon(1e-14));
  REQUIRE(u.variance() == Catch::Approx(1.0 / 3.0).epsilon(1e-14));

  const auto r = InnovationLaw::rademacher();
  REQUIRE(r.lp_norm(1.0) == 1.0);
  REQUIRE(r.lp_norm(7.0) == 1.0);
  REQUIRE(r.variance() == 1.0);

  REQUIRE_THROWS_AS(g.lp_norm(0.5), std::invalid_argument);
}

TEST_CASE("coupled difference norms: closed forms") {
  const auto g = InnovationLaw::standard_gaussian();
  REQUIRE(g.coupled_diff_lp(2.0) == Catch::Approx(std::numbers::sqrt2).epsilon(1e-14));
  REQUIRE(g.coupled_diff_lp(4.0) ==
          Catch::Approx(std::numbers::sqrt2 * std::pow(3.0, 0.25)).epsilon(1e-14));

  // triangular difference of uniform(-h, h): E|D|^p = 2^{p+1} h^p / ((p+1)(p+2))
  const auto u = InnovationLaw::uniform_symmetric(1.0);
  REQUIRE(u.coupled_diff_lp(1.0) == Catch::Approx(2.0 / 3.0).epsilon(1e-14));
  REQUIRE(u.coupled_diff_lp(2.0) == Catch::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-14));

  const auto r = InnovationLaw::rademacher();
  REQUIRE(r.coupled_diff_lp(2.0) == Catch::Approx(std::numbers::sqrt2).epsilon(1e-14));
  REQUIRE(r.coupled_diff_lp(3.0) == Catch::Approx(std::pow(2.0, 2.0 / 3.0)).epsilon(1e-14));
}

TEST_CASE("coupled difference norms match Monte Carlo") {
  const rng::Key key{314, 0};
  for (const auto& law : {InnovationLaw::uniform_symmetric(1.5),
                          InnovationLaw::scaled_gaussian(0.7)}) {
    const double p = 3.0;
    const std::size_t reps = 200000;
    KahanSum acc, acc_sq;
    for (std::size_t i = 0; i < reps; ++i) {
      const double d = std::abs(law.sample(key, 2 * i) - law.sample(key, 2 * i + 1));
      const double dp = std::pow(d, p);
      acc.add(dp);
      acc_sq.add(dp * dp);
    }
    const double n = static_cast<double>(reps);
    const double mean = acc.value() / n;
    const double var = (acc_sq.value() - n * mean * mean) / (n - 1.0);
    const double se = std::sqrt(var / n);
    const double target = std::pow(law.coupled_diff_lp(p), p);
    REQUIRE(std::abs(mean - target) < 4.0 * se);
  }
}

TEST_CASE("samples respect support and are deterministic") {
  const rng::Key key{555, 9};
  const auto u = InnovationLaw::uniform_symmetric(2.5);
  const auto r = InnovationLaw::rademacher();
  for (std::uint64_t i = 0; i < 5000; ++i) {
    const double uv = u.sample(key, i);
    REQUIRE(uv >= -2.5);
    REQUIRE(uv < 2.5);
    const double rv = r.sample(key, i);
    REQUIRE((rv == 1.0 || rv == -1.0));
    REQUIRE(u.sample(key, i) == uv);
  }
}

TEST_CASE("gaussian samples have unit variance") {
  const rng::Key key{808, 0};
  const auto g = InnovationLaw::standard_gaussian();
  std::vector<double> xs(40000);
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = g.sample(key, i);
  const MeanVar mv = mean_var(xs);
  REQUIRE(std::abs(mv.mean) < 4.0 / std::sqrt(static_cast<double>(xs.size())));
  REQUIRE(std::abs(mv.var - 1.0) <
          4.0 * std::sqrt(2.0 / static_cast<double>(xs.size())));
}

TEST_CASE("constructor guards") {
  REQUIRE_THROWS_AS(InnovationLaw::scaled_gaussian(0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(InnovationLaw::uniform_symmetric(-1.0), std::invalid_argument);
}
