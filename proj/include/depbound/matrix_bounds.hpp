#pragma once

// Matrix Bernstein inequalities (independent, beta-mixing, tau-mixing) and
// Monte Carlo estimation of the variance proxy nu^2.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "depbound/linalg.hpp"
#include "depbound/process.hpp"
#include "depbound/scalar_bounds.hpp"

namespace depbound {

// P{lambda_max(sum X_i) >= x} <= d exp(-x^2 / (2 sigma^2 + 2 M x / 3)).
inline BoundResult bernstein_independent(double n, double x, double d, double sigma_sq,
                                         double big_m) {
  if (!(sigma_sq >= 0)) throw std::invalid_argument("bernstein_independent: sigma^2 < 0");
  if (!(big_m > 0)) throw std::invalid_argument("bernstein_independent: M must be positive");
  const double raw = d * std::exp(-x * x / (2.0 * sigma_sq + 2.0 * big_m * x / 3.0));
  return BoundResult::probability(raw, ConstantsSource::paper_explicit,
                                  {{"n", n}, {"x", x}, {"d", d},
                                   {"sigma_sq", sigma_sq}, {"M", big_m}});
}

// Geometric beta-mixing rate exp(-gamma (m-1)):
// <= d exp(-C x^2 / (nu^2 n + M^2/gamma + x M gamma~)) with
// gamma~ = (log n / log 2) max(2, 32 log n / (gamma log 2)).
inline BoundResult bernstein_beta_mixing(double n, double x, double d, double nu_sq,
                                         double big_m, double gamma, double c = 1.0) {
  if (!(n >= 2)) throw std::invalid_argument("bernstein_beta_mixing: requires n >= 2");
  if (!(gamma > 0)) throw std::invalid_argument("bernstein_beta_mixing: gamma must be positive");
  if (!(c > 0)) throw std::invalid_argument("bernstein_beta_mixing: C must be positive");
  const double logn = std::log(n);
  const double gamma_tilde =
      (logn / std::numbers::ln2) * std::max(2.0, 32.0 * logn / (gamma * std::numbers::ln2));
  const double raw =
      d * std::exp(-c * x * x /
                   (nu_sq * n + big_m * big_m / gamma + x * big_m * gamma_tilde));
  return BoundResult::probability(raw, ConstantsSource::user_supplied,
                                  {{"n", n}, {"x", x}, {"d", d}, {"nu_sq", nu_sq},
                                   {"M", big_m}, {"gamma", gamma},
                                   {"gamma_tilde", gamma_tilde}, {"C", c}});
}

// Geometric tau-mixing rate M psi1 exp(-psi2 (m-1)):
// <= d exp(-x^2 / (8 (15^2 n nu^2 + 60^2 M^2/psi2) + 2 x M psi~)) with
// psi~1 = max(1/d, psi1) and psi~ = (log n/log 2) max{1, 8 log(psi~1 n^6 d)/psi2}.
inline BoundResult bernstein_tau_mixing(double n, double x, double d, double nu_sq,
                                        double big_m, double psi1, double psi2) {
  if (!(n >= 2)) throw std::invalid_argument("bernstein_tau_mixing: requires n >= 2");
  if (!(psi1 > 0 && psi2 > 0 && big_m > 0))
    throw std::invalid_argument("bernstein_tau_mixing: scale parameters must be positive");
  const double psi1_tilde = std::max(1.0 / d, psi1);
  const double psi_tilde =
      (std::log(n) / std::numbers::ln2) *
      std::max(1.0, 8.0 * std::log(psi1_tilde * std::pow(n, 6.0) * d) / psi2);
  const double denom = 8.0 * (225.0 * n * nu_sq + 3600.0 * big_m * big_m / psi2) +
                       2.0 * x * big_m * psi_tilde;
  const double raw = d * std::exp(-x * x / denom);
  return BoundResult::probability(raw, ConstantsSource::paper_explicit,
                                  {{"n", n}, {"x", x}, {"d", d}, {"nu_sq", nu_sq},
                                   {"M", big_m}, {"psi1", psi1}, {"psi2", psi2},
                                   {"psi1_tilde", psi1_tilde}, {"psi_tilde", psi_tilde}});
}

// ---- variance proxy ----------------------------------------------------------

struct MatrixVarianceProxy {
  double value = 0.0;
  enum class Method { exact_iid, window_monte_carlo } method = Method::window_monte_carlo;
  std::vector<std::size_t> windows_used;
  std::size_t reps = 0;
  double se = 0.0;
  bool lower_estimate = true;  // contiguous windows only, not the full subset sup
};

// Monte Carlo estimate of sup over contiguous window sizes w of
// lambda_max{E (sum_{i in window} X_i)^2} / w. Stationarity makes the window
// position irrelevant; the result is flagged as a lower estimate of the sup
// over all index subsets.
inline MatrixVarianceProxy variance_proxy(const MatrixSeriesSpec& spec,
                                          const std::vector<std::size_t>& window_sizes,
                                          std::size_t reps, std::uint64_t seed) {
  if (window_sizes.empty())
    throw std::invalid_argument("variance_proxy: need at least one window size");
  std::size_t wmax = 0;
  for (std::size_t w : window_sizes) {
    if (w < 1) throw std::invalid_argument("variance_proxy: window size must be >= 1");
    wmax = std::max(wmax, w);
  }
  const int d = spec.dimension();
  const std::size_t batches = 10;
  const std::size_t per_batch = std::max<std::size_t>(reps / batches, 1);

  MatrixVarianceProxy out;
  out.windows_used = window_sizes;
  out.reps = per_batch * batches;
  out.method = MatrixVarianceProxy::Method::window_monte_carlo;

  double best = 0.0;
  double best_se = 0.0;
  for (std::size_t w : window_sizes) {
    // accumulate E (sum X)^2 per batch; lambda_max of the pooled mean
    std::vector<Mat> batch_mean(batches, Mat(d));
    for (std::size_t bi = 0; bi < batches; ++bi) {
      Mat acc(d);
      for (std::size_t r = 0; r < per_batch; ++r) {
        const std::uint64_t rep_seed = rng::Key{seed, 0}.sub(bi * per_batch + r).stream;
        const auto xs = simulate_matrix_series(spec, w, rep_seed);
        Mat sum(d);
        for (const auto& m : xs) sum += m;
        acc += matmul(sum, sum);
      }
      acc *= 1.0 / static_cast<double>(per_batch);
      batch_mean[bi] = std::move(acc);
    }
    Mat pooled(d);
    for (const auto& m : batch_mean) pooled += m;
    pooled *= 1.0 / static_cast<double>(batches);
    const double est = lambda_max(pooled) / static_cast<double>(w);
    // batch spread of lambda_max as a standard error proxy
    std::vector<double> lam(batches);
    for (std::size_t bi = 0; bi < batches; ++bi)
      lam[bi] = lambda_max(batch_mean[bi]) / static_cast<double>(w);
    const MeanVar mv = mean_var(lam);
    if (est > best) {
      best = est;
      best_se = mv.se();
    }
  }
  out.value = best;
  out.se = best_se;
  return out;
}

// Exact lambda_max(E X^2) for i.i.d. series, estimated with w = 1 windows.
inline MatrixVarianceProxy variance_proxy_iid(const MatrixSeriesSpec& spec,
                                              std::size_t reps, std::uint64_t seed) {
  auto out = variance_proxy(spec, {1}, reps, seed);
  out.method = MatrixVarianceProxy::Method::exact_iid;
  return out;
}

}  // namespace depbound
