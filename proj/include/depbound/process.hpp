#pragma once

// Declarative process specifications and reproducible simulators: truncated
// linear (MA) processes, VAR(1), and derived matrix-valued series. Identical
// (spec, n, seed) always yields bit-identical fragments.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "depbound/innovations.hpp"
#include "depbound/linalg.hpp"
#include "depbound/numeric.hpp"
#include "depbound/rng.hpp"

namespace depbound {

// ---- linear process coefficients -----------------------------------------

enum class CoefficientKind { geometric, polynomial, explicit_list };

// Rule for the MA coefficients f_j. Geometric: f_j = kappa^j; polynomial:
// f_j = K (1+j)^{-beta}; explicit: finite list.
struct CoefficientRule {
  CoefficientKind kind = CoefficientKind::explicit_list;
  double kappa = 0.0;            // geometric
  double scale = 1.0;            // polynomial K
  double beta = 0.0;             // polynomial exponent
  std::vector<double> values;    // explicit list

  static CoefficientRule geometric(double kappa) {
    if (!(kappa > 0.0 && kappa < 1.0))
      throw std::invalid_argument("geometric rule: kappa must lie in (0,1)");
    CoefficientRule r;
    r.kind = CoefficientKind::geometric;
    r.kappa = kappa;
    return r;
  }
  static CoefficientRule polynomial(double scale, double beta) {
    if (!(beta > 0.5))
      throw std::invalid_argument(
          "polynomial rule: beta must exceed 1/2 for a square-summable sequence");
    CoefficientRule r;
    r.kind = CoefficientKind::polynomial;
    r.scale = scale;
    r.beta = beta;
    return r;
  }
  static CoefficientRule explicit_list(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("explicit rule: empty coefficient list");
    CoefficientRule r;
    r.kind = CoefficientKind::explicit_list;
    r.values = std::move(v);
    return r;
  }

  [[nodiscard]] double coef(std::size_t j) const {
    switch (kind) {
      case CoefficientKind::geometric:
        return std::pow(kappa, static_cast<double>(j));
      case CoefficientKind::polynomial:
        return scale * std::pow(1.0 + static_cast<double>(j), -beta);
      case CoefficientKind::explicit_list:
        return j < values.size() ? values[j] : 0.0;
    }
    throw std::logic_error("unreachable");
  }

  // Total ||f||_2^2 = sum_j f_j^2 (exact per rule, infinite sum included).
  [[nodiscard]] double l2_sq_total() const {
    switch (kind) {
      case CoefficientKind::geometric:
        return 1.0 / (1.0 - kappa * kappa);
      case CoefficientKind::polynomial: {
        // K^2 sum (1+j)^{-2beta}; converges since beta > 1/2.
        KahanSum s;
        std::size_t j = 0;
        for (;; ++j) {
          const double c = coef(j);
          s.add(c * c);
          // integral tail bound: sum_{k>j} (1+k)^{-2b} <= (1+j)^{1-2b}/(2b-1)
          const double tail = scale * scale *
                              std::pow(1.0 + static_cast<double>(j), 1.0 - 2.0 * beta) /
                              (2.0 * beta - 1.0);
          if (tail < 1e-14 * std::max(s.value(), 1e-300) || j > 100000000) {
            s.add(tail);  // include the bound so the result is an upper estimate
            break;
          }
        }
        return s.value();
      }
      case CoefficientKind::explicit_list: {
        KahanSum s;
        for (double v : values) s.add(v * v);
        return s.value();
      }
    }
    throw std::logic_error("unreachable");
  }

  // Discarded L2 tail sum_{j>lag} f_j^2, closed form where possible.
  [[nodiscard]] double discarded_tail_l2(std::size_t lag) const {
    switch (kind) {
      case CoefficientKind::geometric: {
        const double r2 = kappa * kappa;
        return std::pow(r2, static_cast<double>(lag) + 1.0) / (1.0 - r2);
      }
      case CoefficientKind::polynomial: {
        // high-precision direct summation with a certified integral tail
        KahanSum s;
        std::size_t j = lag + 1;
        for (;; ++j) {
          const double c = coef(j);
          s.add(c * c);
          const double tail = scale * scale *
                              std::pow(1.0 + static_cast<double>(j), 1.0 - 2.0 * beta) /
                              (2.0 * beta - 1.0);
          if (tail < 1e-15 * std::max(s.value(), 1e-300) || j > lag + 100000000) {
            s.add(tail);
            break;
          }
        }
        return s.value();
      }
      case CoefficientKind::explicit_list: {
        KahanSum s;
        for (std::size_t j = lag + 1; j < values.size(); ++j) s.add(values[j] * values[j]);
        return s.value();
      }
    }
    throw std::logic_error("unreachable");
  }

  // sum_j |f_j|. Infinite for polynomial rules with beta <= 1.
  [[nodiscard]] double l1_norm() const {
    switch (kind) {
      case CoefficientKind::geometric:
        return 1.0 / (1.0 - kappa);
      case CoefficientKind::polynomial: {
        if (beta <= 1.0)
          throw std::domain_error("l1_norm: divergent for polynomial beta <= 1");
        KahanSum s;
        for (std::size_t j = 0;; ++j) {
          s.add(std::abs(coef(j)));
          const double tail = std::abs(scale) *
                              std::pow(1.0 + static_cast<double>(j), 1.0 - beta) /
                              (beta - 1.0);
          if (tail < 1e-14 * std::max(s.value(), 1e-300)) {
            s.add(tail);
            break;
          }
        }
        return s.value();
      }
      case CoefficientKind::explicit_list: {
        KahanSum s;
        for (double v : values) s.add(std::abs(v));
        return s.value();
      }
    }
    throw std::logic_error("unreachable");
  }

  // Smallest lag whose discarded L2 tail is below tol * ||f||_2^2.
  [[nodiscard]] std::size_t default_truncation_lag(double tol = 1e-8) const {
    if (kind == CoefficientKind::explicit_list) return std::max<std::size_t>(values.size(), 1) - 1;
    const double total = l2_sq_total();
    std::size_t lag = 1;
    while (discarded_tail_l2(lag) >= tol * total) {
      lag *= 2;
      if (lag > (1u << 26))
        throw std::runtime_error("default_truncation_lag: tail decays too slowly");
    }
    // binary search the first admissible lag
    std::size_t lo = lag / 2, hi = lag;
    while (lo + 1 < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      (discarded_tail_l2(mid) < tol * total ? hi : lo) = mid;
    }
    return std::max<std::size_t>(hi, 1);
  }
};

struct LinearProcessSpec {
  CoefficientRule coefficients;
  InnovationLaw innovation;
  std::size_t truncation_lag = 0;  // 0 means "choose the default"

  LinearProcessSpec() = default;
  // lag 0 means "choose the default"; explicit lists may legitimately end up
  // with lag 0 (an order-0, i.i.d. moving average).
  LinearProcessSpec(CoefficientRule rule, InnovationLaw law, std::size_t lag = 0)
      : coefficients(std::move(rule)), innovation(law), truncation_lag(lag) {
    if (truncation_lag == 0) truncation_lag = coefficients.default_truncation_lag();
  }

  [[nodiscard]] double discarded_tail() const {
    return coefficients.discarded_tail_l2(truncation_lag);
  }

  void validate() const {
    if (coefficients.kind != CoefficientKind::explicit_list && truncation_lag < 1)
      throw std::invalid_argument("truncation_lag must be >= 1");
    if (coefficients.kind == CoefficientKind::explicit_list && coefficients.values.empty())
      throw std::invalid_argument("explicit coefficient list is empty");
  }
};

// ---- VAR(1) ---------------------------------------------------------------

struct VarSpec {
  int dimension = 1;
  bool diagonal = true;
  double kappa = 0.0;                  // diagonal transition kappa * I
  Mat transition;                      // full transition matrix when !diagonal
  std::vector<double> innovation_cov;  // diagonal entries; empty = identity
  InnovationLaw innovation = InnovationLaw::standard_gaussian();

  static VarSpec diagonal_ar(int d, double kappa,
                             InnovationLaw law = InnovationLaw::standard_gaussian()) {
    if (d < 1) throw std::invalid_argument("VarSpec: dimension must be >= 1");
    if (!(kappa >= 0.0 && kappa < 1.0))
      throw std::invalid_argument("VarSpec: diagonal kappa must lie in [0,1)");
    VarSpec s;
    s.dimension = d;
    s.diagonal = true;
    s.kappa = kappa;
    s.innovation = law;
    return s;
  }

  static VarSpec full(Mat a, std::vector<double> innov_cov = {},
                      InnovationLaw law = InnovationLaw::standard_gaussian()) {
    VarSpec s;
    s.dimension = a.n;
    s.diagonal = false;
    s.transition = std::move(a);
    s.innovation_cov = std::move(innov_cov);
    s.innovation = law;
    const double norm = s.transition_norm();
    if (!(norm < 1.0))
      throw std::invalid_argument("VarSpec: non-stationary transition, ||A|| = " +
                                  std::to_string(norm) + " >= 1");
    return s;
  }

  [[nodiscard]] double transition_norm() const {
    return diagonal ? kappa : spectral_norm(transition);
  }

  void validate() const {
    if (dimension < 1) throw std::invalid_argument("VarSpec: dimension must be >= 1");
    const double norm = transition_norm();
    if (!(norm < 1.0))
      throw std::invalid_argument("VarSpec: non-stationary transition, ||A|| = " +
                                  std::to_string(norm) + " >= 1");
    if (!innovation_cov.empty() &&
        innovation_cov.size() != static_cast<std::size_t>(dimension))
      throw std::invalid_argument("VarSpec: innovation_cov size mismatch");
  }

  [[nodiscard]] double innov_var(int j) const {
    const double base = innovation.variance();
    return innovation_cov.empty() ? base : base * innovation_cov[static_cast<std::size_t>(j)];
  }

  [[nodiscard]] int default_burn_in(double tol = 1e-10) const {
    const double norm = transition_norm();
    if (norm == 0.0) return 0;
    return static_cast<int>(std::ceil(std::log(tol) / std::log(norm)));
  }
};

// ---- fragments ------------------------------------------------------------

struct SeriesFragment {
  std::size_t n = 0;
  int d = 1;
  std::vector<double> values;  // row-major n x d
  std::uint64_t seed = 0;
  int burn_in = 0;

  [[nodiscard]] double at(std::size_t t, int j = 0) const {
    return values[t * static_cast<std::size_t>(d) + static_cast<std::size_t>(j)];
  }
};

// values[t] = sum_{j=0}^{L} f_j eps_{t-j} from a single innovation stream of
// length n + L; deterministic in seed.
inline SeriesFragment simulate_linear(const LinearProcessSpec& spec, std::size_t n,
                                      std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("simulate_linear: n must be >= 1");
  if (!std::isfinite(spec.coefficients.l2_sq_total()))
    throw std::invalid_argument("simulate_linear: divergent ||f||_2");
  const std::size_t lag = spec.truncation_lag;
  const rng::Key key{seed, 0};
  std::vector<double> eps(n + lag);
  for (std::size_t i = 0; i < eps.size(); ++i)
    eps[i] = spec.innovation.sample(key, i);
  std::vector<double> f(lag + 1);
  for (std::size_t j = 0; j <= lag; ++j) f[j] = spec.coefficients.coef(j);

  SeriesFragment frag;
  frag.n = n;
  frag.d = 1;
  frag.seed = seed;
  frag.values.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    // eps index of time (t+1): t + lag; coefficient j multiplies eps at t+lag-j
    KahanSum s;
    for (std::size_t j = 0; j <= lag; ++j) s.add(f[j] * eps[t + lag - j]);
    frag.values[t] = s.value();
  }
  return frag;
}

// VAR(1) recursion from the zero vector, with burn-in long enough that the
// recorded fragment is effectively stationary.
inline SeriesFragment simulate_var(const VarSpec& spec, std::size_t n,
                                   std::uint64_t seed, int burn_in = -1) {
  if (n < 1) throw std::invalid_argument("simulate_var: n must be >= 1");
  const double norm = spec.transition_norm();
  if (!(norm < 1.0))
    throw std::invalid_argument("simulate_var: non-stationary transition, ||A|| = " +
                                std::to_string(norm));
  if (burn_in < 0) burn_in = spec.default_burn_in();
  const int d = spec.dimension;
  const rng::Key key{seed, 0};

  SeriesFragment frag;
  frag.n = n;
  frag.d = d;
  frag.seed = seed;
  frag.burn_in = burn_in;
  frag.values.resize(n * static_cast<std::size_t>(d));

  std::vector<double> x(static_cast<std::size_t>(d), 0.0),
      next(static_cast<std::size_t>(d), 0.0);
  std::uint64_t ctr = 0;
  const std::size_t steps = static_cast<std::size_t>(burn_in) + n;
  for (std::size_t step = 0; step < steps; ++step) {
    if (spec.diagonal) {
      for (int j = 0; j < d; ++j) next[static_cast<std::size_t>(j)] = spec.kappa * x[static_cast<std::size_t>(j)];
    } else {
      for (int i = 0; i < d; ++i) {
        KahanSum s;
        for (int j = 0; j < d; ++j) s.add(spec.transition(i, j) * x[static_cast<std::size_t>(j)]);
        next[static_cast<std::size_t>(i)] = s.value();
      }
    }
    for (int j = 0; j < d; ++j) {
      double e = spec.innovation.sample(key, ctr++);
      if (!spec.innovation_cov.empty())
        e *= std::sqrt(spec.innovation_cov[static_cast<std::size_t>(j)]);
      next[static_cast<std::size_t>(j)] += e;
    }
    x.swap(next);
    if (step >= static_cast<std::size_t>(burn_in)) {
      const std::size_t t = step - static_cast<std::size_t>(burn_in);
      std::copy(x.begin(), x.end(), frag.values.begin() + t * static_cast<std::size_t>(d));
    }
  }
  return frag;
}

// Solves Sigma = A Sigma A^T + Sigma_E by the truncated series
// sum_k A^k Sigma_E (A^T)^k with a certified tail bound.
inline Mat stationary_covariance(const VarSpec& spec, double tol = 1e-14,
                                 int max_iter = 100000) {
  const double norm = spec.transition_norm();
  if (!(norm < 1.0))
    throw std::invalid_argument("stationary_covariance: ||A|| = " + std::to_string(norm) +
                                " >= 1");
  const int d = spec.dimension;
  Mat sigma_e(d);
  for (int j = 0; j < d; ++j) sigma_e(j, j) = spec.innov_var(j);

  if (spec.diagonal) {
    Mat sigma(d);
    for (int j = 0; j < d; ++j) sigma(j, j) = sigma_e(j, j) / (1.0 - spec.kappa * spec.kappa);
    return sigma;
  }

  Mat sigma = sigma_e;
  Mat term = sigma_e;
  const Mat at = transpose(spec.transition);
  const double se_norm = spectral_norm(sigma_e);
  for (int k = 1; k <= max_iter; ++k) {
    term = matmul(matmul(spec.transition, term), at);
    sigma += term;
    const double r2 = norm * norm;
    const double tail = std::pow(r2, k + 1) * se_norm / (1.0 - r2);
    if (tail < tol * spectral_norm(sigma)) {
      // symmetrize rounding noise
      for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
          const double v = 0.5 * (sigma(i, j) + sigma(j, i));
          sigma(i, j) = sigma(j, i) = v;
        }
      return sigma;
    }
  }
  throw std::runtime_error("stationary_covariance: series did not converge within cap");
}

// ---- matrix-valued series ---------------------------------------------------

enum class MatrixGenerator { rank_one_from_var, diagonal_ar };

struct MatrixSeriesSpec {
  MatrixGenerator generator = MatrixGenerator::diagonal_ar;
  VarSpec var;
  std::optional<double> clip;  // spectral clip level M

  [[nodiscard]] int dimension() const { return var.dimension; }

  void validate() const {
    var.validate();
    if (clip && !(*clip > 0))
      throw std::invalid_argument("MatrixSeriesSpec: clip level must be positive");
  }
};

// Emits symmetric mean-zero d x d matrices. rank_one: X_t = v_t v_t^T - Sigma
// (analytic stationary covariance centering); diagonal_ar: X_t = diag(v_t).
inline std::vector<Mat> simulate_matrix_series(const MatrixSeriesSpec& spec, std::size_t n,
                                               std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("simulate_matrix_series: n must be >= 1");
  const int d = spec.dimension();
  const SeriesFragment frag = simulate_var(spec.var, n, seed);
  Mat center(d);
  if (spec.generator == MatrixGenerator::rank_one_from_var)
    center = stationary_covariance(spec.var);

  std::vector<Mat> out;
  out.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    Mat x(d);
    if (spec.generator == MatrixGenerator::rank_one_from_var) {
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          x(i, j) = frag.at(t, i) * frag.at(t, j) - center(i, j);
    } else {
      for (int j = 0; j < d; ++j) x(j, j) = frag.at(t, j);
    }
    if (spec.clip) {
      const double m = *spec.clip;
      double norm;
      if (spec.generator == MatrixGenerator::diagonal_ar) {
        norm = 0.0;
        for (int j = 0; j < d; ++j) norm = std::max(norm, std::abs(x(j, j)));
      } else {
        norm = spectral_norm(x);
      }
      if (norm > m) x *= m / norm;
    }
    out.push_back(std::move(x));
  }
  return out;
}

// Any simulable process the harness and CLI can target.
using ProcessSpec = std::variant<LinearProcessSpec, VarSpec, MatrixSeriesSpec>;

inline std::string process_kind(const ProcessSpec& spec) {
  if (std::holds_alternative<LinearProcessSpec>(spec)) return "linear";
  if (std::holds_alternative<VarSpec>(spec)) return "var";
  return "matrix";
}

inline void validate(const ProcessSpec& spec) {
  std::visit([](const auto& s) { s.validate(); }, spec);
}

}  // namespace depbound
