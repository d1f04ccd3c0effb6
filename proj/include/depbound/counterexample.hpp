#pragma once

// Gaussian VAR mixing contrast: the dimension-free alpha-mixing upper bound,
// the beta-mixing lower bound that forces beta -> 1 as d grows, and a Monte
// Carlo separation witness built from the half-line sets G = H = (-inf, 0].

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "depbound/numeric.hpp"
#include "depbound/process.hpp"
#include "depbound/rng.hpp"

namespace depbound {

struct AlphaBound {
  double value = 0.0;  // clamped to [0, 1/4]
  double raw = 0.0;    // sqrt(eigen ratio) * ||A||^m, unclamped
  double eigen_ratio = 1.0;
  double op_norm = 0.0;
  int m = 0;
};

// alpha(m) <= sqrt(lambda_max(Sigma)/lambda_min(Sigma)) * ||A||^m, clamped at
// the universal ceiling 1/4.
inline AlphaBound alpha_upper_bound(const VarSpec& spec, int m) {
  if (m < 0) throw std::invalid_argument("alpha_upper_bound: m must be >= 0");
  spec.validate();
  const Mat sigma = stationary_covariance(spec);
  const double lo = lambda_min(sigma);
  const double hi = lambda_max(sigma);
  if (!(lo > 0))
    throw std::invalid_argument(
        "alpha_upper_bound: stationary covariance is singular (lambda_min = " +
        std::to_string(lo) + ")");
  AlphaBound out;
  out.eigen_ratio = hi / lo;
  out.op_norm = spec.transition_norm();
  out.m = m;
  out.raw = std::sqrt(out.eigen_ratio) * std::pow(out.op_norm, m);
  out.value = std::min(out.raw, 0.25);
  return out;
}

// beta(m) >= 1 - 2 exp(-d kappa^{2m} / (18 pi^2)); may be negative, capped at 1.
inline double beta_lower_bound(double d, double kappa, int m) {
  if (!(kappa > 0 && kappa < 1))
    throw std::invalid_argument("beta_lower_bound: requires 0 < kappa < 1");
  if (!(d >= 1)) throw std::invalid_argument("beta_lower_bound: requires d >= 1");
  if (m < 1) throw std::invalid_argument("beta_lower_bound: requires m >= 1");
  const double pi = std::numbers::pi;
  const double v = 1.0 - 2.0 * std::exp(-d * std::pow(kappa, 2.0 * m) / (18.0 * pi * pi));
  return std::min(v, 1.0);
}

struct SeparationWitness {
  std::size_t d = 0;
  double kappa = 0.0;
  int m = 0;
  std::string sets = "G = H = (-inf, 0]";
  double theta = 0.0;      // joint orthant probability
  double xi = 0.0;         // product probability (= 1/4)
  double eta = 0.0;        // kappa^m / (3 pi)
  double threshold = 0.0;  // theta - eta/2
  double p_joint = 0.0;
  double p_joint_se = 0.0;
  double p_product = 0.0;
  double p_product_se = 0.0;
  double beta_lower_empirical = 0.0;  // p_joint - p_product
  double beta_lower_theoretical = 0.0;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  bool markov = true;  // sigma(X_0) vs sigma(X_m) gap equals the process coefficient
};

// Simulates d independent stationary AR(1) coordinates (unit variance) to
// time m; tests whether the fraction of coordinates with X_0 <= 0 and
// X_m <= 0 reaches theta - eta/2, against the same event computed with an
// independent copy of the time-m vector. The gap of the two hit rates is a
// lower bound for beta(sigma(X_0), sigma(X_m)) up to Monte Carlo error.
inline SeparationWitness separation_witness(std::size_t d, double kappa, int m,
                                            std::size_t reps, std::uint64_t seed) {
  if (!(kappa > 0 && kappa < 1))
    throw std::invalid_argument("separation_witness: requires 0 < kappa < 1");
  if (d < 1 || m < 1) throw std::invalid_argument("separation_witness: requires d, m >= 1");
  if (reps < 1000) throw std::invalid_argument("separation_witness: requires reps >= 1000");

  const double pi = std::numbers::pi;
  const double rho = std::pow(kappa, m);  // corr(X_0, X_m) with unit margins

  SeparationWitness w;
  w.d = d;
  w.kappa = kappa;
  w.m = m;
  w.theta = 0.25 + std::asin(rho) / (2.0 * pi);
  w.xi = 0.25;
  w.eta = rho / (3.0 * pi);
  w.threshold = w.theta - w.eta / 2.0;
  w.reps = reps;
  w.seed = seed;
  w.beta_lower_theoretical = beta_lower_bound(static_cast<double>(d), kappa, m);

  const double bridge = std::sqrt(1.0 - rho * rho);
  std::size_t joint_hits = 0;
  std::size_t product_hits = 0;
  const rng::Key root{seed, 0x636f756e74ULL};  // independent of simulator streams
  for (std::size_t r = 0; r < reps; ++r) {
    const rng::Key key = root.sub(r);
    std::size_t joint = 0;
    std::size_t product = 0;
    for (std::size_t j = 0; j < d; ++j) {
      // three normals per coordinate: X_0, the bridge to X_m, the independent copy
      const double x0 = key.normal(3 * j);
      const double xm = rho * x0 + bridge * key.normal(3 * j + 1);
      const double xm_indep = key.normal(3 * j + 2);
      const bool v = x0 <= 0.0;
      if (v && xm <= 0.0) ++joint;
      if (v && xm_indep <= 0.0) ++product;
    }
    const double dd = static_cast<double>(d);
    if (static_cast<double>(joint) / dd >= w.threshold) ++joint_hits;
    if (static_cast<double>(product) / dd >= w.threshold) ++product_hits;
  }
  const double nrep = static_cast<double>(reps);
  w.p_joint = static_cast<double>(joint_hits) / nrep;
  w.p_product = static_cast<double>(product_hits) / nrep;
  w.p_joint_se = std::sqrt(w.p_joint * (1.0 - w.p_joint) / nrep);
  w.p_product_se = std::sqrt(w.p_product * (1.0 - w.p_product) / nrep);
  w.beta_lower_empirical = w.p_joint - w.p_product;
  return w;
}

struct MarkovCollapseRecord {
  bool markov = false;
  std::string statement;
};

// VAR(1) is Markov, so the sigma(X_0)-vs-sigma(X_m) witness lower-bounds the
// process-level coefficient beta({X_t}; m). Pure bookkeeping for reports.
inline MarkovCollapseRecord markov_collapse_check(const VarSpec& spec, int m) {
  spec.validate();
  if (m < 1) throw std::invalid_argument("markov_collapse_check: requires m >= 1");
  MarkovCollapseRecord rec;
  rec.markov = true;
  rec.statement =
      "VAR(1) is Markov: beta({X_t}; " + std::to_string(m) +
      ") = beta(sigma(X_0), sigma(X_" + std::to_string(m) + "))";
  return rec;
}

// Non-Markov specs (e.g. finite-order MA with q >= 2) must refuse.
inline MarkovCollapseRecord markov_collapse_check(const LinearProcessSpec& spec, int m) {
  (void)m;
  if (spec.coefficients.kind == CoefficientKind::explicit_list &&
      spec.coefficients.values.size() <= 1) {
    MarkovCollapseRecord rec;
    rec.markov = true;
    rec.statement = "order-0 moving average is trivially Markov";
    return rec;
  }
  throw std::invalid_argument(
      "markov_collapse_check: process is not Markov; the two-sigma-field witness "
      "does not collapse to the process coefficient");
}

}  // namespace depbound
