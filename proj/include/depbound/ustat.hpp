#pragma once

// Exact U- and V-statistics at desk scale, brute-force Hoeffding
// decomposition for finite-support laws, and the two dependent
// U/V-statistic tail bound calculators.

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "depbound/numeric.hpp"
#include "depbound/process.hpp"
#include "depbound/scalar_bounds.hpp"

namespace depbound {

struct KernelSpec {
  int arity = 2;  // r <= 4
  std::function<double(std::span<const double>)> evaluator;
  std::optional<double> fourier_l1;  // user-declared ||h-hat||_{L_1}

  void validate() const {
    if (arity < 1 || arity > 4)
      throw std::invalid_argument("KernelSpec: arity must lie in [1, 4]");
    if (!evaluator) throw std::invalid_argument("KernelSpec: missing evaluator");
  }

  // Spot-checks symmetry on random permutations of random inputs.
  void check_symmetry(std::uint64_t seed = 7, int trials = 32, double tol = 1e-12) const {
    validate();
    const rng::Key key{seed, 0};
    std::vector<double> pt(static_cast<std::size_t>(arity));
    std::uint64_t ctr = 0;
    for (int t = 0; t < trials; ++t) {
      for (auto& v : pt) v = 2.0 * key.uniform(ctr++) - 1.0;
      const double base = evaluator(pt);
      std::vector<double> perm = pt;
      // random transposition
      if (arity > 1) {
        const auto i = static_cast<std::size_t>(key.bits(ctr++) % static_cast<std::uint64_t>(arity));
        const auto j = static_cast<std::size_t>(key.bits(ctr++) % static_cast<std::uint64_t>(arity));
        std::swap(perm[i], perm[j]);
        const double swapped = evaluator(perm);
        if (std::abs(base - swapped) > tol * std::max(1.0, std::abs(base)))
          throw std::invalid_argument("KernelSpec: evaluator is not symmetric");
      }
    }
  }
};

// ---- exact U / V statistics -----------------------------------------------

// Exact enumeration over all increasing index tuples; compensated summation.
inline double u_statistic(const SeriesFragment& frag, const KernelSpec& kernel) {
  kernel.validate();
  const std::size_t n = frag.n;
  const auto r = static_cast<std::size_t>(kernel.arity);
  if (n < r) throw std::invalid_argument("u_statistic: need n >= kernel arity");
  std::vector<std::size_t> idx(r);
  for (std::size_t i = 0; i < r; ++i) idx[i] = i;
  std::vector<double> pt(r);
  KahanSum s;
  std::size_t count = 0;
  while (true) {
    for (std::size_t i = 0; i < r; ++i) pt[i] = frag.values[idx[i]];
    s.add(kernel.evaluator(pt));
    ++count;
    // next increasing tuple
    std::size_t k = r;
    while (k > 0) {
      --k;
      if (idx[k] < n - (r - k)) {
        ++idx[k];
        for (std::size_t j = k + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
        break;
      }
      if (k == 0) return s.value() / static_cast<double>(count);
    }
  }
}

// Exact V-statistic: n^{-r} sum over all index tuples. The enumeration
// budget caps n^r; exceeding it is an explicit error (sampled estimators are
// out of scope).
inline double v_statistic(const SeriesFragment& frag, const KernelSpec& kernel,
                          double budget = 4e6) {
  kernel.validate();
  const std::size_t n = frag.n;
  const auto r = static_cast<std::size_t>(kernel.arity);
  if (n < r) throw std::invalid_argument("v_statistic: need n >= kernel arity");
  if (std::pow(static_cast<double>(n), static_cast<double>(r)) > budget)
    throw std::invalid_argument(
        "v_statistic: n^r exceeds the enumeration budget; a sampled estimator is out "
        "of scope");
  std::vector<std::size_t> idx(r, 0);
  std::vector<double> pt(r);
  KahanSum s;
  while (true) {
    for (std::size_t i = 0; i < r; ++i) pt[i] = frag.values[idx[i]];
    s.add(kernel.evaluator(pt));
    std::size_t k = r;
    bool done = true;
    while (k > 0) {
      --k;
      if (++idx[k] < n) {
        done = false;
        break;
      }
      idx[k] = 0;
    }
    if (done) break;
  }
  return s.value() / std::pow(static_cast<double>(n), static_cast<double>(r));
}

// ---- Hoeffding decomposition on finite-support laws --------------------------

struct FiniteSupportLaw {
  std::vector<double> atoms;
  std::vector<double> probs;

  void validate() const {
    if (atoms.size() != probs.size() || atoms.empty())
      throw std::invalid_argument("FiniteSupportLaw: atoms/probs size mismatch");
    KahanSum s;
    for (double p : probs) {
      if (!(p > 0)) throw std::invalid_argument("FiniteSupportLaw: probabilities must be positive");
      s.add(p);
    }
    if (std::abs(s.value() - 1.0) > 1e-12)
      throw std::invalid_argument("FiniteSupportLaw: probabilities must sum to 1");
    for (std::size_t i = 0; i < atoms.size(); ++i)
      for (std::size_t j = i + 1; j < atoms.size(); ++j)
        if (atoms[i] == atoms[j])
          throw std::invalid_argument("FiniteSupportLaw: atoms must be distinct");
  }

  [[nodiscard]] double mean() const {
    KahanSum s;
    for (std::size_t i = 0; i < atoms.size(); ++i) s.add(atoms[i] * probs[i]);
    return s.value();
  }
};

// Tabulated components of the Hoeffding decomposition on the support.
// component(p) maps a tuple of support indices (length p) to h_p evaluated
// at the corresponding atoms.
struct HoeffdingDecomposition {
  double theta = 0.0;
  int arity = 2;
  std::size_t support = 0;
  std::vector<std::vector<double>> tables;  // tables[p-1]: support^p values

  [[nodiscard]] double component(int p, std::span<const std::size_t> idx) const {
    std::size_t flat = 0;
    for (int i = 0; i < p; ++i) flat = flat * support + idx[static_cast<std::size_t>(i)];
    return tables[static_cast<std::size_t>(p - 1)][flat];
  }
};

// theta = E h under the product law; g_p by exact summation over the product
// law; h_p by the recursive subtraction over lower-order components.
inline HoeffdingDecomposition hoeffding_decompose(const KernelSpec& kernel,
                                                  const FiniteSupportLaw& law,
                                                  double budget = 4e6) {
  kernel.validate();
  law.validate();
  const auto r = static_cast<std::size_t>(kernel.arity);
  const std::size_t s = law.atoms.size();
  if (std::pow(static_cast<double>(s), static_cast<double>(r)) > budget)
    throw std::invalid_argument("hoeffding_decompose: support^r exceeds the budget");

  auto table_size = [&](std::size_t p) {
    std::size_t t = 1;
    for (std::size_t i = 0; i < p; ++i) t *= s;
    return t;
  };
  auto unflatten = [&](std::size_t flat, std::size_t p, std::vector<std::size_t>& idx) {
    for (std::size_t i = p; i-- > 0;) {
      idx[i] = flat % s;
      flat /= s;
    }
  };

  // g_p(x_1..x_p) = E h(x_1..x_p, X~...) - theta, tabulated exactly
  std::vector<std::vector<double>> g(r);
  std::vector<double> pt(r);
  std::vector<std::size_t> idx(r);
  // full table of h on support^r first
  std::vector<double> h_table(table_size(r));
  for (std::size_t flat = 0; flat < h_table.size(); ++flat) {
    unflatten(flat, r, idx);
    for (std::size_t i = 0; i < r; ++i) pt[i] = law.atoms[idx[i]];
    h_table[flat] = kernel.evaluator(std::span<const double>(pt.data(), r));
  }
  // theta = E h over the product law
  KahanSum theta_sum;
  for (std::size_t flat = 0; flat < h_table.size(); ++flat) {
    unflatten(flat, r, idx);
    double w = 1.0;
    for (std::size_t i = 0; i < r; ++i) w *= law.probs[idx[i]];
    theta_sum.add(w * h_table[flat]);
  }
  const double theta = theta_sum.value();

  // marginalize from the back: g_r = h - theta; g_{p} = E_{x_{p+1}} g_{p+1}
  g[r - 1].resize(h_table.size());
  for (std::size_t flat = 0; flat < h_table.size(); ++flat)
    g[r - 1][flat] = h_table[flat] - theta;
  for (std::size_t p = r - 1; p >= 1; --p) {
    g[p - 1].assign(table_size(p), 0.0);
    for (std::size_t flat = 0; flat < g[p - 1].size(); ++flat) {
      KahanSum acc;
      for (std::size_t a = 0; a < s; ++a)
        acc.add(law.probs[a] * g[p][flat * s + a]);
      g[p - 1][flat] = acc.value();
    }
  }

  // h_1 = g_1; h_p = g_p - sum over proper sub-tuples of lower components
  HoeffdingDecomposition dec;
  dec.theta = theta;
  dec.arity = kernel.arity;
  dec.support = s;
  dec.tables.resize(r);
  dec.tables[0] = g[0];
  std::vector<std::size_t> sub;
  for (std::size_t p = 2; p <= r; ++p) {
    dec.tables[p - 1].resize(table_size(p));
    std::vector<std::size_t> tup(p);
    for (std::size_t flat = 0; flat < dec.tables[p - 1].size(); ++flat) {
      unflatten(flat, p, tup);
      double acc = g[p - 1][flat];
      // subtract h_k over all k-subsets of positions, k < p
      for (std::size_t k = 1; k < p; ++k) {
        // enumerate k-subsets of {0..p-1}
        std::vector<std::size_t> comb(k);
        for (std::size_t i = 0; i < k; ++i) comb[i] = i;
        while (true) {
          sub.resize(k);
          for (std::size_t i = 0; i < k; ++i) sub[i] = tup[comb[i]];
          acc -= dec.component(static_cast<int>(k), sub);
          std::size_t j = k;
          bool done = true;
          while (j > 0) {
            --j;
            if (comb[j] < p - (k - j)) {
              ++comb[j];
              for (std::size_t t = j + 1; t < k; ++t) comb[t] = comb[t - 1] + 1;
              done = false;
              break;
            }
          }
          if (done) break;
        }
      }
      dec.tables[p - 1][flat] = acc;
    }
  }
  return dec;
}

// ---- bound calculators ----------------------------------------------------

// P(|U_n| >= c' M/sqrt(n) + x) <= 2 exp(-C' x^2 n / (M^2 + M x (log n)(log log 4n))).
inline BoundResult ustat_exponential_bound(double n, double x, double big_m,
                                           double c_prime = 1.0, double c_big = 1.0) {
  if (!(n >= 4)) throw std::invalid_argument("ustat_exponential_bound: requires n >= 4");
  if (!(x >= 0)) throw std::invalid_argument("ustat_exponential_bound: requires x >= 0");
  if (!(big_m > 0 && c_prime > 0 && c_big > 0))
    throw std::invalid_argument("ustat_exponential_bound: positive inputs required");
  const double raw =
      2.0 * std::exp(-c_big * x * x * n /
                     (big_m * big_m +
                      big_m * x * std::log(n) * std::log(std::log(4.0 * n))));
  const double threshold = c_prime * big_m / std::sqrt(n) + x;
  return BoundResult::probability(raw, ConstantsSource::user_supplied,
                                  {{"n", n}, {"x", x}, {"M", big_m},
                                   {"c_prime", c_prime}, {"C_prime", c_big},
                                   {"applies_to_threshold", threshold}});
}

// P(|V_n(h_p)| >= x) <= 6 exp(-C' n x^{2/p} / (A_p^{1/p} + x^{1/p} M_p^{1/p}))
// with A_p = 2^{2r} ||h^||^2 {64 c^{1/3}/(1 - e^{-C/3}) + (log n)^4/n}^p and
// M_p = 2^r ||h^|| (log n)^{2p}.
inline BoundResult vstat_fourier_bound(double n, double x, int p, int r, double fourier_l1,
                                       double c_mix, double big_c_mix,
                                       double c_prime = 1.0) {
  if (!(n >= 2)) throw std::invalid_argument("vstat_fourier_bound: requires n >= 2");
  if (p < 1 || p > r) throw std::invalid_argument("vstat_fourier_bound: requires 1 <= p <= r");
  if (!(fourier_l1 > 0))
    throw std::invalid_argument("vstat_fourier_bound: fourier_l1 must be declared positive");
  if (!(c_mix > 0 && big_c_mix > 0 && c_prime > 0))
    throw std::invalid_argument("vstat_fourier_bound: positive inputs required");
  const double logn = std::log(n);
  const double inner = 64.0 * std::cbrt(c_mix) / (1.0 - std::exp(-big_c_mix / 3.0)) +
                       std::pow(logn, 4.0) / n;
  const double a_p = std::pow(2.0, 2.0 * r) * fourier_l1 * fourier_l1 *
                     std::pow(inner, static_cast<double>(p));
  const double m_p = std::pow(2.0, static_cast<double>(r)) * fourier_l1 *
                     std::pow(logn, 2.0 * p);
  const double pd = static_cast<double>(p);
  const double raw =
      6.0 * std::exp(-c_prime * n * std::pow(x, 2.0 / pd) /
                     (std::pow(a_p, 1.0 / pd) + std::pow(x, 1.0 / pd) * std::pow(m_p, 1.0 / pd)));
  return BoundResult::probability(raw, ConstantsSource::user_supplied,
                                  {{"n", n}, {"x", x}, {"p", pd}, {"r", static_cast<double>(r)},
                                   {"fourier_l1", fourier_l1}, {"c", c_mix},
                                   {"C", big_c_mix}, {"C_prime", c_prime},
                                   {"A_p", a_p}, {"M_p", m_p}});
}

// Builtin kernels for the CLI.
inline KernelSpec builtin_kernel(const std::string& name, int arity = 2,
                                 double bandwidth = 1.0) {
  KernelSpec k;
  k.arity = arity;
  if (name == "sum") {
    k.evaluator = [](std::span<const double> xs) {
      KahanSum s;
      for (double v : xs) s.add(v);
      return s.value();
    };
  } else if (name == "product") {
    k.evaluator = [](std::span<const double> xs) {
      double p = 1.0;
      for (double v : xs) p *= v;
      return p;
    };
  } else if (name == "distance") {
    if (arity != 2) throw std::invalid_argument("distance kernel has arity 2");
    k.evaluator = [](std::span<const double> xs) { return std::abs(xs[0] - xs[1]); };
  } else if (name == "gaussian_rbf") {
    if (arity != 2) throw std::invalid_argument("gaussian_rbf kernel has arity 2");
    if (!(bandwidth > 0)) throw std::invalid_argument("gaussian_rbf: bandwidth must be positive");
    k.evaluator = [bandwidth](std::span<const double> xs) {
      const double d = xs[0] - xs[1];
      return std::exp(-d * d / (2.0 * bandwidth * bandwidth));
    };
  } else {
    throw std::invalid_argument("unknown builtin kernel: " + name);
  }
  return k;
}

}  // namespace depbound
