#pragma once

// Monte Carlo tail estimation, bound-vs-empirical comparison reports, and the
// autocovariance-eigenvalue inequality check
// lambda_max(Sigma-hat) <= max_theta |S_n(theta)|^2 / n.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "depbound/linalg.hpp"
#include "depbound/numeric.hpp"
#include "depbound/process.hpp"
#include "depbound/rng.hpp"
#include "depbound/scalar_bounds.hpp"
#include "depbound/ustat.hpp"

namespace depbound {

struct TailEstimate {
  std::size_t n = 0;
  double x = 0.0;
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
};

enum class TailStatistic { abs_sum, max_abs_sum_coord, matrix_lambda_max, u_statistic };

inline std::string to_string(TailStatistic s) {
  switch (s) {
    case TailStatistic::abs_sum: return "abs_sum";
    case TailStatistic::max_abs_sum_coord: return "max_abs_sum_coord";
    case TailStatistic::matrix_lambda_max: return "matrix_lambda_max";
    case TailStatistic::u_statistic: return "u_statistic";
  }
  return "?";
}

namespace detail {

inline double rep_statistic(const ProcessSpec& spec, TailStatistic stat, std::size_t n,
                            std::uint64_t rep_seed, const KernelSpec* kernel) {
  switch (stat) {
    case TailStatistic::abs_sum: {
      const auto* lp = std::get_if<LinearProcessSpec>(&spec);
      if (!lp)
        throw std::invalid_argument("estimate_tail: abs_sum requires a scalar linear process");
      const SeriesFragment frag = simulate_linear(*lp, n, rep_seed);
      KahanSum s;
      for (double v : frag.values) s.add(v);
      return std::abs(s.value());
    }
    case TailStatistic::max_abs_sum_coord: {
      const auto* var = std::get_if<VarSpec>(&spec);
      if (!var)
        throw std::invalid_argument("estimate_tail: max_abs_sum_coord requires a VAR spec");
      const SeriesFragment frag = simulate_var(*var, n, rep_seed);
      double best = 0.0;
      for (int j = 0; j < frag.d; ++j) {
        KahanSum s;
        for (std::size_t t = 0; t < n; ++t) s.add(frag.at(t, j));
        best = std::max(best, std::abs(s.value()));
      }
      return best;
    }
    case TailStatistic::matrix_lambda_max: {
      const auto* ms = std::get_if<MatrixSeriesSpec>(&spec);
      if (!ms)
        throw std::invalid_argument("estimate_tail: matrix_lambda_max requires a matrix spec");
      const auto xs = simulate_matrix_series(*ms, n, rep_seed);
      Mat sum(ms->dimension());
      for (const auto& m : xs) sum += m;
      return lambda_max(sum);
    }
    case TailStatistic::u_statistic: {
      if (!kernel)
        throw std::invalid_argument("estimate_tail: u_statistic requires a kernel");
      const auto* lp = std::get_if<LinearProcessSpec>(&spec);
      if (!lp)
        throw std::invalid_argument("estimate_tail: u_statistic requires a scalar linear process");
      const SeriesFragment frag = simulate_linear(*lp, n, rep_seed);
      return std::abs(u_statistic(frag, *kernel));
    }
  }
  throw std::logic_error("estimate_tail: unreachable");
}

}  // namespace detail

// One simulation pass per replication evaluates all grid points.
inline std::vector<TailEstimate> estimate_tail(const ProcessSpec& spec, TailStatistic stat,
                                               std::size_t n,
                                               const std::vector<double>& x_grid,
                                               std::size_t reps, std::uint64_t seed,
                                               const KernelSpec* kernel = nullptr) {
  if (reps < 1000) throw std::invalid_argument("estimate_tail: requires reps >= 1000");
  if (x_grid.empty()) throw std::invalid_argument("estimate_tail: empty x grid");
  validate(spec);

  std::vector<std::size_t> hits(x_grid.size(), 0);
  const rng::Key root{seed, 0x7461696cULL};
  for (std::size_t r = 0; r < reps; ++r) {
    const double s = detail::rep_statistic(spec, stat, n, root.sub(r).stream, kernel);
    for (std::size_t i = 0; i < x_grid.size(); ++i)
      if (s >= x_grid[i]) ++hits[i];
  }

  std::vector<TailEstimate> out;
  out.reserve(x_grid.size());
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    TailEstimate e;
    e.n = n;
    e.x = x_grid[i];
    e.reps = reps;
    e.seed = seed;
    e.p_hat = static_cast<double>(hits[i]) / static_cast<double>(reps);
    const BinomialCi ci = clopper_pearson(hits[i], reps, 0.99);
    e.ci_low = ci.low;
    e.ci_high = ci.high;
    out.push_back(e);
  }
  return out;
}

// ---- comparison reports -----------------------------------------------------

enum class Verdict { dominated, vacuous_bound, violation_flag };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::dominated: return "dominated";
    case Verdict::vacuous_bound: return "vacuous_bound";
    case Verdict::violation_flag: return "violation_flag";
  }
  return "?";
}

struct ComparisonRow {
  std::size_t n = 0;
  double x = 0.0;
  BoundResult bound;
  TailEstimate estimate;
  Verdict verdict = Verdict::dominated;
};

struct ComparisonReport {
  std::string bound_id;
  std::string statistic;
  std::string process;
  ConstantsSource constants_source = ConstantsSource::paper_explicit;
  bool applicable = true;
  std::string inapplicable_reason;
  std::vector<ComparisonRow> rows;

  [[nodiscard]] bool has_violation() const {
    for (const auto& r : rows)
      if (r.verdict == Verdict::violation_flag) return true;
    return false;
  }
};

// Pairs each grid point's bound with its estimate. The bound evaluator may
// throw to signal that the hypotheses fail for this spec, which yields a
// verdict-free report carrying the reason.
inline ComparisonReport compare(const std::string& bound_id,
                                const std::function<BoundResult(double x)>& bound_at,
                                const ProcessSpec& spec, TailStatistic stat, std::size_t n,
                                const std::vector<double>& x_grid, std::size_t reps,
                                std::uint64_t seed, const KernelSpec* kernel = nullptr) {
  ComparisonReport rep;
  rep.bound_id = bound_id;
  rep.statistic = to_string(stat);
  rep.process = process_kind(spec);

  std::vector<BoundResult> bounds;
  bounds.reserve(x_grid.size());
  try {
    for (double x : x_grid) bounds.push_back(bound_at(x));
  } catch (const std::exception& e) {
    rep.applicable = false;
    rep.inapplicable_reason = e.what();
    return rep;
  }
  if (!bounds.empty()) rep.constants_source = bounds.front().constants_source;

  const auto estimates = estimate_tail(spec, stat, n, x_grid, reps, seed, kernel);
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    ComparisonRow row;
    row.n = n;
    row.x = x_grid[i];
    row.bound = bounds[i];
    row.estimate = estimates[i];
    if (row.bound.vacuous)
      row.verdict = Verdict::vacuous_bound;
    else if (row.estimate.ci_low > row.bound.clamped)
      row.verdict = Verdict::violation_flag;
    else
      row.verdict = Verdict::dominated;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

// ---- autocovariance eigenvalue check -----------------------------------------

struct AutocovCheck {
  std::size_t n = 0;
  std::size_t reps = 0;
  std::size_t holds = 0;    // replications satisfying the inequality with slack
  double min_slack = 0.0;   // min over reps of (freq max / n - lambda_max)
  double max_lambda = 0.0;
  double slack_tol = 1e-8;
};

namespace detail {

// max over theta of |sum_t w_t e^{i t theta}|^2 via a zero-padded FFT on a
// grid of >= 8n points, refined by golden-section around the best grid point.
inline double periodogram_max(const std::vector<double>& w) {
  const std::size_t n = w.size();
  const std::size_t grid = next_pow2(std::max<std::size_t>(8 * n, 16));
  std::vector<std::complex<double>> a(grid);
  for (std::size_t t = 0; t < n; ++t) a[t] = w[t];
  fft(a);
  std::size_t best = 0;
  double best_val = 0.0;
  for (std::size_t k = 0; k < grid; ++k) {
    const double v = std::norm(a[k]);
    if (v > best_val) {
      best_val = v;
      best = k;
    }
  }
  // refine on [theta_{k-1}, theta_{k+1}]
  const double step = 2.0 * std::numbers::pi / static_cast<double>(grid);
  auto neg_power = [&](double theta) {
    std::complex<double> s{0.0, 0.0};
    const std::complex<double> rot{std::cos(theta), -std::sin(theta)};
    std::complex<double> ph{1.0, 0.0};
    for (std::size_t t = 0; t < n; ++t) {
      s += w[t] * ph;
      ph *= rot;
    }
    return -std::norm(s);
  };
  const double lo = (static_cast<double>(best) - 1.0) * step;
  const double hi = (static_cast<double>(best) + 1.0) * step;
  const double theta_star = golden_section_min(neg_power, lo, hi, 1e-12);
  return std::max(best_val, -neg_power(theta_star));
}

}  // namespace detail

// Per replication: sample autocovariances gamma-hat_k = n^{-1} sum_{l>k} w_l w_{l-k},
// lambda_max of the Toeplitz matrix (gamma-hat_{|j-k|}), and the periodogram
// maximum; the inequality lambda_max <= max|S_n|^2 / n is checked with slack.
inline AutocovCheck autocov_eigen_check(const LinearProcessSpec& spec, std::size_t n,
                                        std::size_t reps, std::uint64_t seed,
                                        double slack = 1e-8) {
  if (n > 2048) throw std::invalid_argument("autocov_eigen_check: n exceeds the eigen budget");
  if (n < 2 || reps < 1) throw std::invalid_argument("autocov_eigen_check: bad n or reps");
  spec.validate();

  AutocovCheck out;
  out.n = n;
  out.reps = reps;
  out.slack_tol = slack;
  out.min_slack = std::numeric_limits<double>::infinity();
  const rng::Key root{seed, 0x6175746fULL};
  for (std::size_t r = 0; r < reps; ++r) {
    const SeriesFragment frag = simulate_linear(spec, n, root.sub(r).stream);
    const std::vector<double>& w = frag.values;
    std::vector<double> gamma(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      KahanSum s;
      for (std::size_t l = k; l < n; ++l) s.add(w[l] * w[l - k]);
      gamma[k] = s.value() / static_cast<double>(n);
    }
    const double lam = toeplitz_lambda_max(gamma);
    const double freq = detail::periodogram_max(w) / static_cast<double>(n);
    const double gap = freq - lam;
    out.min_slack = std::min(out.min_slack, gap);
    out.max_lambda = std::max(out.max_lambda, lam);
    if (gap >= -slack) ++out.holds;
  }
  return out;
}

}  // namespace depbound
