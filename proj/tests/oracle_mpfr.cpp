#include "oracle_mpfr.hpp"

#include <mpfr.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "depbound/numeric.hpp"

namespace oracle {
namespace {

constexpr mpfr_prec_t kPrec = 256;

// Minimal RAII value type over mpfr_t.
class Mp {
 public:
  Mp() { mpfr_init2(v_, kPrec); mpfr_set_zero(v_, 1); }
  explicit Mp(double d) { mpfr_init2(v_, kPrec); mpfr_set_d(v_, d, MPFR_RNDN); }
  Mp(const Mp& o) { mpfr_init2(v_, kPrec); mpfr_set(v_, o.v_, MPFR_RNDN); }
  Mp& operator=(const Mp& o) {
    mpfr_set(v_, o.v_, MPFR_RNDN);
    return *this;
  }
  ~Mp() { mpfr_clear(v_); }

  [[nodiscard]] double d() const { return mpfr_get_d(v_, MPFR_RNDN); }

  friend Mp operator+(const Mp& a, const Mp& b) { Mp r; mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Mp operator-(const Mp& a, const Mp& b) { Mp r; mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Mp operator*(const Mp& a, const Mp& b) { Mp r; mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Mp operator/(const Mp& a, const Mp& b) { Mp r; mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  Mp& operator+=(const Mp& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Mp operator-() const { Mp r; mpfr_neg(r.v_, v_, MPFR_RNDN); return r; }

  static Mp exp(const Mp& a) { Mp r; mpfr_exp(r.v_, a.v_, MPFR_RNDN); return r; }
  static Mp log(const Mp& a) { Mp r; mpfr_log(r.v_, a.v_, MPFR_RNDN); return r; }
  static Mp sqrt(const Mp& a) { Mp r; mpfr_sqrt(r.v_, a.v_, MPFR_RNDN); return r; }
  static Mp pow(const Mp& a, const Mp& b) { Mp r; mpfr_pow(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  static Mp gamma(const Mp& a) { Mp r; mpfr_gamma(r.v_, a.v_, MPFR_RNDN); return r; }
  static Mp pi() { Mp r; mpfr_const_pi(r.v_, MPFR_RNDN); return r; }
  static Mp max(const Mp& a, const Mp& b) { Mp r; mpfr_max(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }

 private:
  mpfr_t v_;
};

double param(const depbound::ParamMap& m, const std::string& k, double fallback) {
  auto it = m.find(k);
  return it == m.end() ? fallback : it->second;
}

double param(const depbound::ParamMap& m, const std::string& k) {
  auto it = m.find(k);
  if (it == m.end()) throw std::invalid_argument("oracle: missing parameter " + k);
  return it->second;
}

// G_q with the library's stopping rule decided in double, terms in MPFR.
Mp gq_mirror(double q, double y, double rel_tol = 1e-12) {
  const double y2d = y * y;
  const Mp y2 = Mp(y) * Mp(y);
  const Mp qm(q);
  depbound::KahanSum sd;
  Mp s;
  for (std::size_t j = 1;; ++j) {
    const auto jd = static_cast<double>(j);
    sd.add(std::exp(-std::pow(jd, q) * y2d));
    s += Mp::exp(-(Mp::pow(Mp(jd), qm) * y2));
    if (j < 4) continue;
    double tail = 0.0;
    Mp tail_m;
    for (int k = 0; k < 200; ++k) {
      const double jk = std::ldexp(jd, k);
      const double block = jk * std::exp(-std::pow(jk, q) * y2d);
      tail += block;
      tail_m += Mp(jk) * Mp::exp(-(Mp::pow(Mp(jk), qm) * y2));
      if (block < 1e-3 * tail * std::numeric_limits<double>::epsilon()) break;
    }
    if (tail <= rel_tol * sd.value()) return s + tail_m;
    if (j > 100000000) throw std::runtime_error("oracle gq_mirror: no convergence");
  }
}

// theta_m of the registry's geometric profile, in both precisions.
double theta_d(double coef, double rate, std::size_t m) {
  return coef * std::pow(rate, static_cast<double>(m));
}
Mp theta_m(double coef, double rate, std::size_t m) {
  return Mp(coef) * Mp::pow(Mp(rate), Mp(static_cast<double>(m)));
}

// Theta_0 = sum_{k=0}^{lags} theta_k + coef rate^{lags+1}/(1-rate), mirroring
// DependenceProfile::tail_sum(0) for the registry profile (lags = 64).
Mp theta0_mirror(double coef, double rate, std::size_t lags = 64) {
  Mp s;
  for (std::size_t k = 0; k <= lags; ++k) s += theta_m(coef, rate, k);
  s += theta_m(coef, rate, lags + 1) / (Mp(1.0) - Mp(rate));
  return s;
}

Mp nagaev_fdm_i_mirror(double n, double x, double p, double coefp, double ratep,
                       double coef2, double rate2, double x0_l2, double x0_lp,
                       double cp) {
  constexpr std::size_t kLags = 64;  // registry profile length
  auto mu_d = [&](std::size_t j) {
    const double th = theta_d(coefp, ratep, j);
    return std::pow(std::pow(static_cast<double>(j), 0.5 * p - 1.0) * std::pow(th, p),
                    1.0 / (p + 1.0));
  };
  auto mu_m = [&](std::size_t j) {
    const Mp th = theta_m(coefp, ratep, j);
    return Mp::pow(Mp::pow(Mp(static_cast<double>(j)), Mp(0.5 * p - 1.0)) *
                       Mp::pow(th, Mp(p)),
                   Mp(1.0 / (p + 1.0)));
  };

  depbound::KahanSum nu_d;
  Mp nu;
  for (std::size_t j = 1;; ++j) {
    const double mjd = mu_d(j);
    nu_d.add(mjd);
    nu += mu_m(j);
    if (j >= 8 && j >= kLags) {
      const double ratio = mu_d(j + 1) / std::max(mjd, 1e-300);
      if (ratio < 1.0) {
        const double tail = mjd * ratio / (1.0 - ratio);
        if (tail < 1e-12 * nu_d.value()) {
          nu_d.add(tail);
          const Mp ratio_m = mu_m(j + 1) / mu_m(j);
          nu += mu_m(j) * ratio_m / (Mp(1.0) - ratio_m);
          break;
        }
      }
    }
    if (j > 10000000) throw std::runtime_error("oracle nagaev_fdm(i): nu diverges");
  }

  const Mp cpm(cp), nm(n), xm(x), pm(p);
  Mp raw = cpm * nm / Mp::pow(xm, pm) *
           (Mp::pow(nu, Mp(p + 1.0)) + Mp::pow(Mp(x0_lp), pm));

  const double nu_dv = nu_d.value();
  depbound::KahanSum expo_d;
  Mp expo;
  for (std::size_t k = 1;; ++k) {
    const double mukd = mu_d(k);
    const double th2d = theta_d(coef2, rate2, k);
    const double term =
        th2d > 0.0
            ? std::exp(-cp * mukd * mukd * x * x / (n * nu_dv * nu_dv * th2d * th2d))
            : 0.0;
    expo_d.add(term);
    if (th2d > 0.0) {
      const Mp muk = mu_m(k);
      const Mp th2 = theta_m(coef2, rate2, k);
      expo += Mp::exp(-(cpm * muk * muk * xm * xm / (nm * nu * nu * th2 * th2)));
    }
    if (k >= 8 && k >= kLags && term < 1e-15 * std::max(expo_d.value(), 1e-300)) break;
    if (k > 1000000) break;
  }
  raw += Mp(4.0) * expo;
  raw += Mp(2.0) * Mp::exp(-(cpm * xm * xm / (nm * Mp(x0_l2) * Mp(x0_l2))));
  return raw;
}

}  // namespace

double evaluate(const std::string& id, const depbound::ParamMap& m,
                const std::map<std::string, double>& echo) {
  const Mp one(1.0), two(2.0);

  if (id == "nagaev_linear_short") {
    const Mp n(param(m, "n")), x(param(m, "x")), p(param(m, "p"));
    const Mp f(param(m, "f_l1")), lp(param(m, "eps_lp")), l2(param(m, "eps_l2"));
    const Mp cp = two * Mp::exp(-p) / ((p + two) * (p + two));
    const Mp t1 = Mp::pow(one + two / p, p) * n * Mp::pow(f * lp, p) / Mp::pow(x, p);
    const Mp t2 = two * Mp::exp(-(cp * x * x / (n * f * f * l2 * l2)));
    return (t1 + t2).d();
  }
  if (id == "nagaev_linear_long") {
    const Mp n(param(m, "n")), x(param(m, "x")), p(param(m, "p")), beta(param(m, "beta"));
    const Mp k(param(m, "K")), lp(param(m, "eps_lp")), l2(param(m, "eps_l2"));
    const Mp c1(param(m, "C1", 1.0)), c2(param(m, "C2", 1.0));
    const Mp t1 = c1 * Mp::pow(n, one + p * (one - beta)) * Mp::pow(k * lp, p) /
                  Mp::pow(x, p);
    const Mp t2 = two * Mp::exp(-(c2 * x * x /
                                  (Mp::pow(n, Mp(3.0) - two * beta) * l2 * l2 * k * k)));
    return (t1 + t2).d();
  }
  if (id == "merlevede") {
    const Mp n(param(m, "n")), x(param(m, "x")), s2(param(m, "sigma_sq")), b(param(m, "B"));
    const Mp c1(param(m, "C1", 1.0)), c2(param(m, "C2", 1.0));
    const Mp t(echo.at("t_star"));
    const Mp logn2 = Mp::log(n) * Mp::log(n);
    const Mp mgf = c2 * t * t * (n * s2 + b * b) / (one - c1 * t * b * logn2);
    return Mp::exp(-(t * x) + mgf).d();
  }
  if (id == "doukhan_louhichi") {
    const Mp n(param(m, "n")), x(param(m, "x")), a(param(m, "a")), b(param(m, "b"));
    const Mp k(param(m, "K")), bm(param(m, "M")), l1(param(m, "L1")), l2(param(m, "L2"));
    const Mp kvee = Mp::max(k * k, two);
    const Mp c1 = Mp::pow(two, a + b + Mp(3.0)) * k * k * bm * bm * l1 * kvee;
    const Mp c2 = two * Mp::pow(bm * l2 * kvee, one / (a + b + two));
    const Mp expo = (two * a + two * b + Mp(3.0)) / (a + b + two);
    return Mp::exp(-(x * x / (c1 * n + c2 * Mp::pow(x, expo)))).d();
  }
  if (id == "nagaev_fdm") {
    const double variant = param(m, "variant", 1.0);
    const double n = param(m, "n"), x = param(m, "x"), p = param(m, "p");
    const double coefp = param(m, "theta_coef"), ratep = param(m, "theta_rate");
    const double cp = param(m, "c_p", 1.0), c2 = param(m, "C2", 1.0);
    if (variant == 1.0) {
      return nagaev_fdm_i_mirror(n, x, p, coefp, ratep, param(m, "theta2_coef"),
                                 param(m, "theta2_rate"), param(m, "x0_l2"),
                                 param(m, "x0_lp"), cp)
          .d();
    }
    const Mp theta0 = theta0_mirror(coefp, ratep);
    const Mp nm(n), xm(x), pm(p);
    const double theta0_d = theta0.d();
    if (variant == 2.0) {
      const Mp t1 = Mp(cp) * Mp::pow(theta0, pm) * nm / Mp::pow(xm, pm);
      const double y = c2 * x / (std::sqrt(n) * theta0_d);
      const Mp t2 = Mp(4.0) * gq_mirror(1.0 - 2.0 / p, y);
      return (t1 + t2).d();
    }
    const double alpha = param(m, "alpha", 0.0);
    const Mp t1 = Mp(cp) * Mp::pow(theta0, pm) * Mp::pow(nm, Mp(p * (0.5 - alpha))) /
                  Mp::pow(xm, pm);
    const double y =
        c2 * x /
        (std::pow(n, (2.0 * p - 1.0 - 2.0 * alpha * p) / (2.0 + 2.0 * p)) * theta0_d);
    const Mp t2 = Mp(4.0) * gq_mirror((p - 2.0) / (p + 1.0), y);
    return (t1 + t2).d();
  }
  if (id == "nagaev_dan") {
    const double alpha = param(m, "alpha"), pd = param(m, "p"), nd = param(m, "n");
    const Mp n(nd), x(param(m, "x")), p(pd);
    const Mp dp(param(m, "dan_p")), d2(param(m, "dan_2"));
    const Mp c1(param(m, "C1", 1.0)), c2(param(m, "C2", 1.0)), c3(param(m, "C3", 1.0));
    const Mp a_n = alpha > 0.5 - 1.0 / pd
                       ? one
                       : Mp::pow(n, Mp(0.5 * pd - 1.0 - alpha * pd));
    const Mp t1 = c1 * a_n * n * Mp::pow(dp, p) / Mp::pow(x, p);
    const Mp t2 = c2 * Mp::exp(-(c3 * x * x / (n * d2 * d2)));
    return (t1 + t2).d();
  }
  if (id == "nagaev_vector_max") {
    const double alpha = param(m, "alpha"), qd = param(m, "q"), nd = param(m, "n");
    const Mp n(nd), x(param(m, "x")), q(qd);
    const Mp psi(param(m, "psi_2alpha")), dan(param(m, "dan_inf"));
    const Mp c(param(m, "C", 1.0));
    const Mp ell = Mp::max(one, Mp::log(Mp(param(m, "d"))));
    const bool regime_i = alpha > 0.5 - 1.0 / qd;
    const Mp poly_n = regime_i ? n : Mp::pow(n, Mp(0.5 * qd - alpha * qd));
    const Mp t1 = c * poly_n * Mp::pow(ell, Mp(0.5 * qd)) * Mp::pow(dan, q) / Mp::pow(x, q);
    const Mp t2 = c * Mp::exp(-(c * x * x / (n * psi * psi)));
    return (t1 + t2).d();
  }
  if (id == "bernstein_matrix_independent") {
    const Mp x(param(m, "x")), d(param(m, "d")), s2(param(m, "sigma_sq")), bm(param(m, "M"));
    return (d * Mp::exp(-(x * x / (two * s2 + two * bm * x / Mp(3.0))))).d();
  }
  if (id == "bernstein_matrix_beta") {
    const Mp n(param(m, "n")), x(param(m, "x")), d(param(m, "d"));
    const Mp nu(param(m, "nu_sq")), bm(param(m, "M")), g(param(m, "gamma"));
    const Mp c(param(m, "C", 1.0));
    const Mp ln2 = Mp::log(two);
    const Mp gt = (Mp::log(n) / ln2) * Mp::max(two, Mp(32.0) * Mp::log(n) / (g * ln2));
    return (d * Mp::exp(-(c * x * x / (nu * n + bm * bm / g + x * bm * gt)))).d();
  }
  if (id == "bernstein_matrix_tau") {
    const Mp n(param(m, "n")), x(param(m, "x")), d(param(m, "d"));
    const Mp nu(param(m, "nu_sq")), bm(param(m, "M"));
    const Mp p1(param(m, "psi1")), p2(param(m, "psi2"));
    const Mp p1t = Mp::max(one / d, p1);
    const Mp pt = (Mp::log(n) / Mp::log(two)) *
                  Mp::max(one, Mp(8.0) * Mp::log(p1t * Mp::pow(n, Mp(6.0)) * d) / p2);
    const Mp denom = Mp(8.0) * (Mp(225.0) * n * nu + Mp(3600.0) * bm * bm / p2) +
                     two * x * bm * pt;
    return (d * Mp::exp(-(x * x / denom))).d();
  }
  if (id == "ustat_exponential") {
    const Mp n(param(m, "n")), x(param(m, "x")), bm(param(m, "M"));
    const Mp cb(param(m, "C_prime", 1.0));
    const Mp denom = bm * bm + bm * x * Mp::log(n) * Mp::log(Mp::log(Mp(4.0) * n));
    return (two * Mp::exp(-(cb * x * x * n / denom))).d();
  }
  if (id == "vstat_fourier") {
    const double pd = param(m, "p"), rd = param(m, "r");
    const Mp n(param(m, "n")), x(param(m, "x")), h(param(m, "fourier_l1"));
    const Mp cmix(param(m, "c")), cbig(param(m, "C")), cp(param(m, "C_prime", 1.0));
    const Mp logn = Mp::log(n);
    const Mp inner = Mp(64.0) * Mp::pow(cmix, one / Mp(3.0)) /
                         (one - Mp::exp(-(cbig / Mp(3.0)))) +
                     Mp::pow(logn, Mp(4.0)) / n;
    const Mp a_p = Mp::pow(two, Mp(2.0 * rd)) * h * h * Mp::pow(inner, Mp(pd));
    const Mp m_p = Mp::pow(two, Mp(rd)) * h * Mp::pow(logn, Mp(2.0 * pd));
    const Mp raw = Mp(6.0) * Mp::exp(-(cp * n * Mp::pow(x, Mp(2.0 / pd)) /
                                       (Mp::pow(a_p, one / Mp(pd)) +
                                        Mp::pow(x, one / Mp(pd)) * Mp::pow(m_p, one / Mp(pd)))));
    return raw.d();
  }
  throw std::invalid_argument("oracle: unknown bound id " + id);
}

double beta_lower(double d, double kappa, int m) {
  const Mp pi = Mp::pi();
  const Mp e = Mp(d) * Mp::pow(Mp(kappa), Mp(2.0 * m)) / (Mp(18.0) * pi * pi);
  const double v = (Mp(1.0) - Mp(2.0) * Mp::exp(-e)).d();
  return std::min(v, 1.0);
}

double alpha_formula(double lambda_max, double lambda_min, double op_norm, int m) {
  return (Mp::sqrt(Mp(lambda_max) / Mp(lambda_min)) *
          Mp::pow(Mp(op_norm), Mp(static_cast<double>(m))))
      .d();
}

double phi_moment(std::size_t n, int p, double c, const std::vector<double>& phi) {
  Mp s;
  for (std::size_t i = 0; i < n; ++i)
    s += Mp(static_cast<double>(n - i)) * Mp(phi[i]);
  return Mp::pow(Mp(8.0) * Mp(c) * Mp(c) * Mp(static_cast<double>(p)) * s,
                 Mp(0.5 * p))
      .d();
}

double rosenthal_geometric(std::size_t n, double p, double coef2, double rate2,
                           double coefp, double ratep, std::size_t lags, double x0_l2,
                           double x0_lp) {
  const Mp pm(p);
  const Mp pl = pm / Mp::log(pm);
  Mp s2, sp_tail, sp_weighted;
  for (std::size_t j = 1; j <= n; ++j) {
    s2 += theta_m(coef2, rate2, j);
    sp_weighted += Mp::pow(Mp(static_cast<double>(j)), Mp(0.5 - 1.0 / p)) *
                   theta_m(coefp, ratep, j);
  }
  for (std::size_t j = n + 1; j <= lags; ++j) sp_tail += theta_m(coefp, ratep, j);
  const std::size_t cut = std::max(lags + 1, n + 1);
  sp_tail += theta_m(coefp, ratep, cut) / (Mp(1.0) - Mp(ratep));
  const Mp nd(static_cast<double>(n));
  const Mp t1 = Mp::sqrt(nd) * (Mp(87.0) * pl * s2 +
                                Mp(3.0) * Mp::sqrt(pm - Mp(1.0)) * sp_tail +
                                Mp(29.0) * pl * Mp(x0_l2));
  const Mp t2 = Mp::pow(nd, Mp(1.0) / pm) *
                (Mp(87.0) * pl * Mp::sqrt(pm - Mp(1.0)) * sp_weighted +
                 Mp(29.0) * pl * Mp(x0_lp));
  return (t1 + t2).d();
}

double g1_closed_form(double y) {
  const Mp e = Mp::exp(-(Mp(y) * Mp(y)));
  return (e / (Mp(1.0) - e)).d();
}

double gq_brute(double q, double y, std::size_t terms) {
  const Mp y2 = Mp(y) * Mp(y);
  const Mp qm(q);
  Mp s;
  for (std::size_t j = 1; j <= terms; ++j)
    s += Mp::exp(-(Mp::pow(Mp(static_cast<double>(j)), qm) * y2));
  return s.d();
}

double gaussian_abs_moment(double p) {
  // E|Z|^p = 2^{p/2} Gamma((p+1)/2) / sqrt(pi)
  return (Mp::pow(Mp(2.0), Mp(0.5 * p)) * Mp::gamma(Mp(0.5 * (p + 1.0))) /
          Mp::sqrt(Mp::pi()))
      .d();
}

}  // namespace oracle
