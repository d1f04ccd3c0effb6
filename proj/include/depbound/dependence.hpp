#pragma once

// Coupling-based dependence quantities: functional dependence measures
// theta_{m,p} with tail sums Theta_{m,p}, dependence-adjusted norms,
// uniform (vector) versions, tau-coupling upper bounds, and the empirical
// weak-dependence covariance probe.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "depbound/innovations.hpp"
#include "depbound/numeric.hpp"
#include "depbound/process.hpp"
#include "depbound/rng.hpp"

namespace depbound {

enum class Provenance { analytic, monte_carlo };

// Certified behavior of theta_m beyond the last computed lag M.
// geometric: theta_m = coef * rate^m exactly; polynomial: theta_m =
// coef * (1+m)^{-beta} exactly (tail sums use an integral upper bound);
// finite: theta_m = 0 beyond M.
struct TailCertificate {
  enum class Kind { none, finite, geometric, polynomial } kind = Kind::none;
  double coef = 0.0;
  double rate = 0.0;
  double beta = 0.0;

  static TailCertificate none() { return {}; }
  static TailCertificate finite() { return {Kind::finite, 0, 0, 0}; }
  static TailCertificate geometric(double coef, double rate) {
    return {Kind::geometric, coef, rate, 0};
  }
  static TailCertificate polynomial(double coef, double beta) {
    return {Kind::polynomial, coef, 0, beta};
  }

  [[nodiscard]] bool certified() const { return kind != Kind::none; }

  [[nodiscard]] double theta_at(std::size_t m) const {
    switch (kind) {
      case Kind::none:
        throw std::logic_error("tail certificate absent");
      case Kind::finite:
        return 0.0;
      case Kind::geometric:
        return coef * std::pow(rate, static_cast<double>(m));
      case Kind::polynomial:
        return coef * std::pow(1.0 + static_cast<double>(m), -beta);
    }
    throw std::logic_error("unreachable");
  }

  // Upper bound on sum_{k >= m} theta_k.
  [[nodiscard]] double sum_from(std::size_t m) const {
    switch (kind) {
      case Kind::none:
        throw std::logic_error("tail certificate absent");
      case Kind::finite:
        return 0.0;
      case Kind::geometric:
        return coef * std::pow(rate, static_cast<double>(m)) / (1.0 - rate);
      case Kind::polynomial: {
        if (beta <= 1.0) return std::numeric_limits<double>::infinity();
        const double m1 = 1.0 + static_cast<double>(m);
        return coef * (std::pow(m1, -beta) + std::pow(m1, 1.0 - beta) / (beta - 1.0));
      }
    }
    throw std::logic_error("unreachable");
  }

  // Certified upper bound on sup_{m > m0} (m+1)^alpha * Theta_m, where
  // Theta_m uses this certificate's tail sums. Returns nullopt when the
  // supremum cannot be certified finite.
  [[nodiscard]] std::optional<double> sup_weighted_from(double alpha,
                                                        std::size_t m0) const {
    auto weighted = [&](double m) {
      return std::pow(m + 1.0, alpha) *
             sum_from(static_cast<std::size_t>(std::llround(m)));
    };
    switch (kind) {
      case Kind::none:
        return std::nullopt;
      case Kind::finite:
        return 0.0;
      case Kind::geometric: {
        // f(m) = (m+1)^a * C r^m / (1-r): decreasing beyond m_c = a/(-ln r) - 1
        const double mc = alpha / (-std::log(rate)) - 1.0;
        double best = weighted(static_cast<double>(m0 + 1));
        if (mc > static_cast<double>(m0 + 1)) {
          // evaluate at the integer lags bracketing the real critical point
          const auto lo = static_cast<std::size_t>(std::floor(mc));
          best = std::max(best, weighted(static_cast<double>(lo)));
          best = std::max(best, weighted(static_cast<double>(lo + 1)));
        }
        return best;
      }
      case Kind::polynomial: {
        // Theta bound decays like (1+m)^{1-beta}; sup finite iff alpha < beta-1
        if (!(alpha < beta - 1.0)) return std::nullopt;
        return weighted(static_cast<double>(m0 + 1));  // decreasing in m
      }
    }
    return std::nullopt;
  }
};

struct DependenceProfile {
  double p = 2.0;
  std::vector<double> theta;     // theta_{0,p} .. theta_{M,p}
  std::vector<double> theta_se;  // zero for analytic entries
  TailCertificate tail;
  Provenance provenance = Provenance::analytic;

  [[nodiscard]] std::size_t max_lag() const { return theta.empty() ? 0 : theta.size() - 1; }

  // theta_m for arbitrary m; requires a certificate beyond the computed lags.
  [[nodiscard]] double theta_at(std::size_t m) const {
    if (m < theta.size()) return theta[m];
    return tail.theta_at(m);
  }

  // Theta_m = sum_{k=m}^{M} theta_k + tail bound beyond M.
  [[nodiscard]] double tail_sum(std::size_t m) const {
    KahanSum s;
    for (std::size_t k = m; k < theta.size(); ++k) s.add(theta[k]);
    if (tail.certified()) s.add(tail.sum_from(theta.size()));
    return s.value();
  }
};

struct DanValue {
  double p = 2.0;
  double alpha = 0.0;
  double value = 0.0;
  std::size_t argmax_m = 0;
  bool certified = false;
};

// ---- analytic FDM for linear processes ------------------------------------

// For the linear process, the single-innovation coupling gives
// X_m - X_m' = f_m (eps_0 - eps_0'), hence theta_{m,p} = |f_m| ||eps-eps'||_p.
inline DependenceProfile fdm_analytic_linear(const LinearProcessSpec& spec, double p,
                                             std::size_t max_lag) {
  const double cd = spec.innovation.coupled_diff_lp(p);
  DependenceProfile prof;
  prof.p = p;
  prof.provenance = Provenance::analytic;
  prof.theta.resize(max_lag + 1);
  prof.theta_se.assign(max_lag + 1, 0.0);
  for (std::size_t m = 0; m <= max_lag; ++m)
    prof.theta[m] = std::abs(spec.coefficients.coef(m)) * cd;
  switch (spec.coefficients.kind) {
    case CoefficientKind::geometric:
      prof.tail = TailCertificate::geometric(cd, spec.coefficients.kappa);
      break;
    case CoefficientKind::polynomial:
      prof.tail =
          TailCertificate::polynomial(cd * std::abs(spec.coefficients.scale),
                                      spec.coefficients.beta);
      break;
    case CoefficientKind::explicit_list:
      if (max_lag + 1 >= spec.coefficients.values.size()) {
        prof.tail = TailCertificate::finite();
      } else {
        // remaining explicit entries not covered; extend theta instead
        for (std::size_t m = max_lag + 1; m < spec.coefficients.values.size(); ++m) {
          prof.theta.push_back(std::abs(spec.coefficients.values[m]) * cd);
          prof.theta_se.push_back(0.0);
        }
        prof.tail = TailCertificate::finite();
      }
      break;
  }
  return prof;
}

// ---- dependence-adjusted norm ---------------------------------------------

inline DanValue dan(const DependenceProfile& prof, double alpha) {
  if (alpha > 0.0 && !prof.tail.certified())
    throw std::runtime_error(
        "dan: supremum over uncomputed lags cannot be certified without an "
        "analytic tail bound (alpha > 0)");
  DanValue out;
  out.p = prof.p;
  out.alpha = alpha;
  double best = -1.0;
  for (std::size_t m = 0; m < prof.theta.size(); ++m) {
    const double v = std::pow(static_cast<double>(m) + 1.0, alpha) * prof.tail_sum(m);
    if (v > best) {
      best = v;
      out.argmax_m = m;
    }
  }
  out.value = best;
  out.certified = true;
  if (prof.tail.certified()) {
    const auto beyond = prof.tail.sup_weighted_from(alpha, prof.max_lag());
    if (!beyond)
      throw std::runtime_error(
          "dan: analytic tail cannot certify a finite supremum at alpha = " +
          std::to_string(alpha));
    if (*beyond > best) {
      // the certified bound beyond M dominates; report it as the value
      out.value = *beyond;
      out.argmax_m = prof.max_lag() + 1;
    }
  } else {
    out.certified = false;  // alpha == 0 path for Monte Carlo profiles
  }
  return out;
}

// ---- Monte Carlo FDM for black-box causal maps -----------------------------

// g consumes a window of innovations ordered oldest-to-newest and returns the
// process value at the window's last time point.
using CausalMap = std::function<double(std::span<const double>)>;

inline DependenceProfile fdm_monte_carlo(const CausalMap& g, const InnovationLaw& law,
                                         double p, std::size_t max_lag,
                                         std::size_t window, std::size_t reps,
                                         std::uint64_t seed) {
  if (window < max_lag + 1) window = max_lag + 1;
  if (reps < 100) throw std::invalid_argument("fdm_monte_carlo: reps must be >= 100");

  const std::size_t total = window + max_lag;  // innovations at t in [-(window-1), max_lag]
  std::vector<double> eps(total), buf(window), buf2(window);
  std::vector<KahanSum> moment(max_lag + 1), moment_sq(max_lag + 1);

  const rng::Key root{seed, 0};
  for (std::size_t r = 0; r < reps; ++r) {
    const rng::Key key = root.sub(r);
    for (std::size_t i = 0; i < total; ++i) eps[i] = law.sample(key, i);
    const double eps0_prime = law.sample(key, total);
    const std::size_t zero_idx = window - 1;  // position of t = 0 in eps
    for (std::size_t m = 0; m <= max_lag; ++m) {
      // window covering t = m-window+1 .. m
      for (std::size_t i = 0; i < window; ++i) buf[i] = eps[m + i];
      buf2 = buf;
      buf2[zero_idx - m] = eps0_prime;  // t = 0 sits at offset window-1-m
      const double x = g(std::span<const double>(buf));
      const double xp = g(std::span<const double>(buf2));
      if (!std::isfinite(x) || !std::isfinite(xp))
        throw std::runtime_error("fdm_monte_carlo: non-finite map output at replication " +
                                 std::to_string(r));
      const double dpow = std::pow(std::abs(x - xp), p);
      moment[m].add(dpow);
      moment_sq[m].add(dpow * dpow);
    }
  }

  DependenceProfile prof;
  prof.p = p;
  prof.provenance = Provenance::monte_carlo;
  prof.theta.resize(max_lag + 1);
  prof.theta_se.resize(max_lag + 1);
  const auto nrep = static_cast<double>(reps);
  for (std::size_t m = 0; m <= max_lag; ++m) {
    const double mean = moment[m].value() / nrep;
    const double var =
        std::max(0.0, (moment_sq[m].value() - nrep * mean * mean) / (nrep - 1.0));
    const double se_mean = std::sqrt(var / nrep);
    if (mean <= 0.0) {
      prof.theta[m] = 0.0;
      prof.theta_se[m] = 0.0;
    } else {
      prof.theta[m] = std::pow(mean, 1.0 / p);
      // delta method on the p-th moment
      prof.theta_se[m] = se_mean * std::pow(mean, 1.0 / p - 1.0) / p;
    }
  }
  prof.tail = TailCertificate::none();
  return prof;
}

// Builds the causal map of a (truncated) linear spec, for feeding simulators
// and Monte Carlo estimators with the same g.
inline CausalMap linear_causal_map(const LinearProcessSpec& spec) {
  std::vector<double> f(spec.truncation_lag + 1);
  for (std::size_t j = 0; j <= spec.truncation_lag; ++j)
    f[j] = spec.coefficients.coef(j);
  return [f](std::span<const double> w) {
    KahanSum s;
    const std::size_t n = w.size();
    for (std::size_t j = 0; j < f.size() && j < n; ++j) s.add(f[j] * w[n - 1 - j]);
    return s.value();
  };
}

// ---- uniform (vector) FDM ---------------------------------------------------

// A d-dimensional causal map over a scalar innovation stream: out[j] =
// g_j(window). VAR processes use d innovations per time step (flattened
// oldest-first, coordinate-major within a step).
struct VectorCausalMap {
  int d = 1;
  int innovations_per_step = 1;
  std::function<void(std::span<const double>, std::span<double>)> eval;
};

inline VectorCausalMap vector_map_from_var(const VarSpec& spec, std::size_t window) {
  // X_t = sum_{j<window} A^j E_{t-j}; coupling replaces the whole vector E_0.
  const int d = spec.dimension;
  std::vector<Mat> powers;
  powers.push_back(Mat::identity(d));
  for (std::size_t j = 1; j < window; ++j)
    powers.push_back(spec.diagonal
                         ? [&] {
                             Mat m = powers.back();
                             m *= spec.kappa;
                             return m;
                           }()
                         : matmul(powers.back(), spec.transition));
  std::vector<double> scale(static_cast<std::size_t>(d), 1.0);
  for (int j = 0; j < d; ++j)
    if (!spec.innovation_cov.empty())
      scale[static_cast<std::size_t>(j)] = std::sqrt(spec.innovation_cov[static_cast<std::size_t>(j)]);

  VectorCausalMap vm;
  vm.d = d;
  vm.innovations_per_step = d;
  vm.eval = [d, powers, scale](std::span<const double> w, std::span<double> out) {
    const std::size_t steps = w.size() / static_cast<std::size_t>(d);
    for (int i = 0; i < d; ++i) out[static_cast<std::size_t>(i)] = 0.0;
    for (std::size_t j = 0; j < powers.size() && j < steps; ++j) {
      // innovation vector at time t-j sits at the end minus j steps
      const std::size_t base = (steps - 1 - j) * static_cast<std::size_t>(d);
      const Mat& aj = powers[j];
      for (int i = 0; i < d; ++i) {
        double acc = out[static_cast<std::size_t>(i)];
        for (int k = 0; k < d; ++k)
          acc += aj(i, k) * scale[static_cast<std::size_t>(k)] * w[base + static_cast<std::size_t>(k)];
        out[static_cast<std::size_t>(i)] = acc;
      }
    }
  };
  return vm;
}

// Coordinate maps g_j applied to a scalar linear process (Lipschitz transform
// setting).
inline VectorCausalMap vector_map_from_lipschitz(
    const LinearProcessSpec& spec, std::vector<std::function<double(double)>> maps) {
  auto base = linear_causal_map(spec);
  VectorCausalMap vm;
  vm.d = static_cast<int>(maps.size());
  vm.innovations_per_step = 1;
  vm.eval = [base, maps = std::move(maps)](std::span<const double> w, std::span<double> out) {
    const double v = base(w);
    for (std::size_t j = 0; j < maps.size(); ++j) out[j] = maps[j](v);
  };
  return vm;
}

struct UniformFdmProfile {
  double q = 2.0;
  double alpha = 0.0;
  DependenceProfile delta;                    // delta_{i,q} with Omega tail sums
  std::vector<DependenceProfile> coordinate;  // per-coordinate theta profiles
  double vector_dan = 0.0;                    // || |X_.|_inf ||_{q,alpha}, computed lags only
  double psi_2alpha = 0.0;                    // max_j coordinate DAN, computed lags only
  bool certified = false;                     // Monte Carlo: no tail certificate
};

inline UniformFdmProfile uniform_fdm(const VectorCausalMap& vm, const InnovationLaw& law,
                                     double q, double alpha, std::size_t max_lag,
                                     std::size_t window, std::size_t reps,
                                     std::uint64_t seed) {
  if (window < max_lag + 1) window = max_lag + 1;
  if (reps < 100) throw std::invalid_argument("uniform_fdm: reps must be >= 100");
  const int d = vm.d;
  const auto per = static_cast<std::size_t>(vm.innovations_per_step);
  const std::size_t total_steps = window + max_lag;
  std::vector<double> eps(total_steps * per), prime(per);
  std::vector<double> buf(window * per), buf2(window * per);
  std::vector<double> x(static_cast<std::size_t>(d)), xp(static_cast<std::size_t>(d));

  std::vector<KahanSum> dmom(max_lag + 1), dmom_sq(max_lag + 1);
  std::vector<std::vector<KahanSum>> cmom(static_cast<std::size_t>(d),
                                          std::vector<KahanSum>(max_lag + 1));

  const rng::Key root{seed, 0};
  for (std::size_t r = 0; r < reps; ++r) {
    const rng::Key key = root.sub(r);
    for (std::size_t i = 0; i < eps.size(); ++i) eps[i] = law.sample(key, i);
    for (std::size_t i = 0; i < per; ++i) prime[i] = law.sample(key, eps.size() + i);
    for (std::size_t m = 0; m <= max_lag; ++m) {
      const std::size_t begin = m * per;
      std::copy(eps.begin() + static_cast<std::ptrdiff_t>(begin),
                eps.begin() + static_cast<std::ptrdiff_t>(begin + window * per), buf.begin());
      buf2 = buf;
      const std::size_t zero_off = (window - 1 - m) * per;
      std::copy(prime.begin(), prime.end(), buf2.begin() + static_cast<std::ptrdiff_t>(zero_off));
      vm.eval(buf, x);
      vm.eval(buf2, xp);
      double maxdiff = 0.0;
      for (int j = 0; j < d; ++j) {
        const double dj = std::abs(x[static_cast<std::size_t>(j)] - xp[static_cast<std::size_t>(j)]);
        if (!std::isfinite(dj))
          throw std::runtime_error("uniform_fdm: non-finite map output at replication " +
                                   std::to_string(r));
        maxdiff = std::max(maxdiff, dj);
        cmom[static_cast<std::size_t>(j)][m].add(std::pow(dj, q));
      }
      const double dq = std::pow(maxdiff, q);
      dmom[m].add(dq);
      dmom_sq[m].add(dq * dq);
    }
  }

  const auto nrep = static_cast<double>(reps);
  UniformFdmProfile out;
  out.q = q;
  out.alpha = alpha;
  out.delta.p = q;
  out.delta.provenance = Provenance::monte_carlo;
  out.delta.theta.resize(max_lag + 1);
  out.delta.theta_se.resize(max_lag + 1);
  for (std::size_t m = 0; m <= max_lag; ++m) {
    const double mean = dmom[m].value() / nrep;
    const double var =
        std::max(0.0, (dmom_sq[m].value() - nrep * mean * mean) / (nrep - 1.0));
    out.delta.theta[m] = mean > 0.0 ? std::pow(mean, 1.0 / q) : 0.0;
    out.delta.theta_se[m] =
        mean > 0.0 ? std::sqrt(var / nrep) * std::pow(mean, 1.0 / q - 1.0) / q : 0.0;
  }
  out.coordinate.resize(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    auto& prof = out.coordinate[static_cast<std::size_t>(j)];
    prof.p = q;
    prof.provenance = Provenance::monte_carlo;
    prof.theta.resize(max_lag + 1);
    prof.theta_se.assign(max_lag + 1, 0.0);
    for (std::size_t m = 0; m <= max_lag; ++m) {
      const double mean = cmom[static_cast<std::size_t>(j)][m].value() / nrep;
      prof.theta[m] = mean > 0.0 ? std::pow(mean, 1.0 / q) : 0.0;
    }
  }
  // DANs over computed lags (uncertified: Monte Carlo profiles carry no tail)
  auto computed_dan = [&](const DependenceProfile& prof) {
    double best = 0.0;
    for (std::size_t m = 0; m < prof.theta.size(); ++m)
      best = std::max(best,
                      std::pow(static_cast<double>(m) + 1.0, alpha) * prof.tail_sum(m));
    return best;
  };
  out.vector_dan = computed_dan(out.delta);
  for (const auto& prof : out.coordinate)
    out.psi_2alpha = std::max(out.psi_2alpha, computed_dan(prof));
  out.certified = false;
  return out;
}

// ---- tau coupling upper bound ----------------------------------------------

struct TauEstimate {
  double value = 0.0;
  double se = 0.0;
};

// E||X_m - Y_m|| where Y_m regenerates ALL innovations up to time 0
// (full-past coupling); this upper-bounds tau(sigma(past), X_m).
inline TauEstimate tau_coupling_bound(const LinearProcessSpec& spec, std::size_t m,
                                      std::size_t reps, std::uint64_t seed) {
  const std::size_t lag = spec.truncation_lag;
  std::vector<double> f(lag + 1);
  for (std::size_t j = 0; j <= lag; ++j) f[j] = spec.coefficients.coef(j);

  // X_m - Y_m = sum_{j >= m} f_j (eps_{m-j} - eps'_{m-j}); only the past
  // (t <= 0) innovations are regenerated.
  KahanSum acc, acc_sq;
  const rng::Key root{seed, 0};
  for (std::size_t r = 0; r < reps; ++r) {
    const rng::Key key = root.sub(r);
    KahanSum diff;
    std::uint64_t ctr = 0;
    for (std::size_t j = m; j <= lag; ++j) {
      const double e = spec.innovation.sample(key, ctr++);
      const double ep = spec.innovation.sample(key, ctr++);
      diff.add(f[j] * (e - ep));
    }
    const double v = std::abs(diff.value());
    acc.add(v);
    acc_sq.add(v * v);
  }
  const auto n = static_cast<double>(reps);
  TauEstimate est;
  est.value = acc.value() / n;
  const double var = std::max(0.0, (acc_sq.value() - n * est.value * est.value) / (n - 1.0));
  est.se = std::sqrt(var / n);
  return est;
}

inline TauEstimate tau_coupling_bound(const VarSpec& spec, std::size_t m,
                                      std::size_t reps, std::uint64_t seed) {
  const int d = spec.dimension;
  const std::size_t lag = static_cast<std::size_t>(std::max(spec.default_burn_in(), 1));
  std::vector<Mat> powers;
  powers.push_back(Mat::identity(d));
  for (std::size_t j = 1; j <= lag; ++j) {
    if (spec.diagonal) {
      Mat mm = powers.back();
      mm *= spec.kappa;
      powers.push_back(std::move(mm));
    } else {
      powers.push_back(matmul(powers.back(), spec.transition));
    }
  }
  KahanSum acc, acc_sq;
  const rng::Key root{seed, 0};
  std::vector<double> diff(static_cast<std::size_t>(d));
  for (std::size_t r = 0; r < reps; ++r) {
    const rng::Key key = root.sub(r);
    std::fill(diff.begin(), diff.end(), 0.0);
    std::uint64_t ctr = 0;
    for (std::size_t j = m; j <= lag; ++j) {
      for (int k = 0; k < d; ++k) {
        double e = spec.innovation.sample(key, ctr++);
        double ep = spec.innovation.sample(key, ctr++);
        const double sc = spec.innovation_cov.empty()
                              ? 1.0
                              : std::sqrt(spec.innovation_cov[static_cast<std::size_t>(k)]);
        const double de = sc * (e - ep);
        for (int i = 0; i < d; ++i)
          diff[static_cast<std::size_t>(i)] += powers[j](i, k) * de;
      }
    }
    double norm2 = 0.0;
    for (double v : diff) norm2 += v * v;
    const double v = std::sqrt(norm2);
    acc.add(v);
    acc_sq.add(v * v);
  }
  const auto n = static_cast<double>(reps);
  TauEstimate est;
  est.value = acc.value() / n;
  const double var = std::max(0.0, (acc_sq.value() - n * est.value * est.value) / (n - 1.0));
  est.se = std::sqrt(var / n);
  return est;
}

// ---- weak dependence covariance probe ---------------------------------------

struct LipschitzBlockFn {
  std::function<double(std::span<const double>)> fn;
  double lip = 1.0;   // declared Lipschitz constant (sum-of-coordinates metric)
  std::size_t arity = 1;
};

struct WeakDependenceProbe {
  double cov = 0.0;
  double se = 0.0;
  double psi_theta = 0.0, psi_eta = 0.0, psi_kappa = 0.0, psi_lambda = 0.0;
  double zeta_theta = 0.0, zeta_eta = 0.0, zeta_kappa = 0.0, zeta_lambda = 0.0;
};

// Estimates |Cov(g1(X_1..X_u), g2(X_{u+r}..X_{u+r+v-1}))| and divides by the
// psi value of each convention to report the implied zeta-hat(r).
inline WeakDependenceProbe weak_dependence_probe(
    const std::function<SeriesFragment(std::size_t, std::uint64_t)>& make_fragment,
    const LipschitzBlockFn& g1, const LipschitzBlockFn& g2, std::size_t gap,
    std::size_t reps, std::uint64_t seed) {
  if (!(g1.lip > 0.0 && g2.lip > 0.0))
    throw std::invalid_argument("weak_dependence_probe: Lipschitz constants must be positive");
  if (gap < 1) throw std::invalid_argument("weak_dependence_probe: gap must be >= 1");
  const std::size_t u = g1.arity, v = g2.arity;
  const std::size_t len = u + gap + v - 1;

  std::vector<double> a(reps), b(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    const SeriesFragment frag = make_fragment(len, rng::Key{seed, 0}.sub(r).stream);
    a[r] = g1.fn(std::span<const double>(frag.values.data(), u));
    b[r] = g2.fn(std::span<const double>(frag.values.data() + (u + gap - 1), v));
  }
  const MeanVar ma = mean_var(a), mb = mean_var(b);
  // two-pass centered products: exactly zero for constant functions
  std::vector<double> prod(reps);
  for (std::size_t r = 0; r < reps; ++r) prod[r] = (a[r] - ma.mean) * (b[r] - mb.mean);
  const MeanVar mp = mean_var(prod);

  WeakDependenceProbe out;
  out.cov = mp.mean;
  out.se = mp.se();
  const auto du = static_cast<double>(u), dv = static_cast<double>(v);
  out.psi_theta = dv * g2.lip;
  out.psi_eta = du * g1.lip + dv * g2.lip;
  out.psi_kappa = du * dv * g1.lip * g2.lip;
  out.psi_lambda = out.psi_eta + out.psi_kappa;
  const double ac = std::abs(out.cov);
  out.zeta_theta = ac / out.psi_theta;
  out.zeta_eta = ac / out.psi_eta;
  out.zeta_kappa = ac / out.psi_kappa;
  out.zeta_lambda = ac / out.psi_lambda;
  return out;
}

}  // namespace depbound
