#pragma once

// Small numeric utilities shared across the library: compensated summation,
// golden-section minimization, binomial confidence intervals, normal moments.

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace depbound {

// Neumaier compensated accumulator. Fixed accumulation order keeps results
// independent of how work is partitioned.
class KahanSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct MeanVar {
  double mean = 0.0;
  double var = 0.0;   // sample variance (n-1 denominator)
  std::size_t n = 0;
  [[nodiscard]] double se() const noexcept {
    return n > 1 ? std::sqrt(var / static_cast<double>(n)) : 0.0;
  }
};

inline MeanVar mean_var(const std::vector<double>& xs) {
  MeanVar mv;
  mv.n = xs.size();
  if (mv.n == 0) return mv;
  KahanSum s;
  for (double x : xs) s.add(x);
  mv.mean = s.value() / static_cast<double>(mv.n);
  if (mv.n > 1) {
    KahanSum sq;
    for (double x : xs) sq.add((x - mv.mean) * (x - mv.mean));
    mv.var = sq.value() / static_cast<double>(mv.n - 1);
  }
  return mv;
}

// Golden-section search for the minimum of a unimodal f on [a, b].
inline double golden_section_min(const std::function<double(double)>& f,
                                 double a, double b, double rel_tol = 1e-10,
                                 int max_iter = 400) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < max_iter && (b - a) > rel_tol * (std::abs(a) + std::abs(b)); ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
  }
  return f1 < f2 ? x1 : x2;
}

inline double phi_cdf(double x) noexcept {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

// E|Z|^p for Z ~ N(0,1): 2^{p/2} Gamma((p+1)/2) / sqrt(pi).
inline double gaussian_abs_moment(double p) {
  if (p < 0) throw std::invalid_argument("gaussian_abs_moment: p < 0");
  return std::exp(0.5 * p * std::numbers::ln2 +
                  std::lgamma(0.5 * (p + 1.0)) -
                  0.5 * std::log(std::numbers::pi));
}

// (E|Z|^p)^{1/p}.
inline double gaussian_lp_norm(double p) {
  if (p <= 0) throw std::invalid_argument("gaussian_lp_norm: p <= 0");
  return std::exp((0.5 * p * std::numbers::ln2 +
                   std::lgamma(0.5 * (p + 1.0)) -
                   0.5 * std::log(std::numbers::pi)) / p);
}

// Regularized incomplete beta function by continued fraction (Lentz).
inline double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_beta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  const double front = std::exp(a * std::log(x) + b * std::log1p(-x) - ln_beta);
  const bool swap = x > (a + 1.0) / (a + b + 2.0);
  if (swap) return 1.0 - incomplete_beta(b, a, 1.0 - x);
  const double tiny = 1e-300;
  double c = 1.0, d = 1.0 - (a + b) * x / (a + 1.0);
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 500; ++m) {
    const double m2 = 2.0 * m;
    double num = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
    d = 1.0 + num * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + num / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    num = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
    d = 1.0 + num * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + num / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-15) break;
  }
  return front * h / a;
}

// Smallest p with Binom(n, p) >= k quantile behavior, via bisection on the
// beta representation. Used by Clopper-Pearson below.
inline double beta_quantile(double a, double b, double q) {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (incomplete_beta(a, b, mid) < q) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct BinomialCi {
  double low = 0.0;
  double high = 1.0;
};

// Exact Clopper-Pearson two-sided interval at confidence level `conf`.
inline BinomialCi clopper_pearson(std::size_t successes, std::size_t trials,
                                  double conf = 0.99) {
  if (trials == 0) throw std::invalid_argument("clopper_pearson: zero trials");
  const double alpha = 1.0 - conf;
  const auto k = static_cast<double>(successes);
  const auto n = static_cast<double>(trials);
  BinomialCi ci;
  ci.low = (successes == 0) ? 0.0
                            : beta_quantile(k, n - k + 1.0, alpha / 2.0);
  ci.high = (successes == trials)
                ? 1.0
                : beta_quantile(k + 1.0, n - k, 1.0 - alpha / 2.0);
  return ci;
}

}  // namespace depbound
