#pragma once

// Dense symmetric linear algebra at desk scale: cyclic Jacobi eigenvalues,
// spectral norms, a radix-2 FFT, and a Lanczos largest-eigenvalue routine
// for symmetric Toeplitz matrices with FFT-based matvecs.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "depbound/numeric.hpp"

namespace depbound {

// Row-major square matrix.
struct Mat {
  int n = 0;
  std::vector<double> a;

  Mat() = default;
  explicit Mat(int dim) : n(dim), a(static_cast<std::size_t>(dim) * dim, 0.0) {}

  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }

  static Mat identity(int dim) {
    Mat m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  Mat& operator+=(const Mat& o) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += o.a[i];
    return *this;
  }
  Mat& operator-=(const Mat& o) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= o.a[i];
    return *this;
  }
  Mat& operator*=(double s) {
    for (double& x : a) x *= s;
    return *this;
  }

  [[nodiscard]] double max_abs() const {
    double m = 0.0;
    for (double x : a) m = std::max(m, std::abs(x));
    return m;
  }

  [[nodiscard]] double frobenius() const {
    KahanSum s;
    for (double x : a) s.add(x * x);
    return std::sqrt(s.value());
  }
};

inline Mat matmul(const Mat& x, const Mat& y) {
  Mat r(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int k = 0; k < x.n; ++k) {
      const double xik = x(i, k);
      if (xik == 0.0) continue;
      for (int j = 0; j < x.n; ++j) r(i, j) += xik * y(k, j);
    }
  return r;
}

inline Mat transpose(const Mat& x) {
  Mat r(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int j = 0; j < x.n; ++j) r(j, i) = x(i, j);
  return r;
}

// Eigenvalues of a symmetric matrix by cyclic Jacobi sweeps.
// Converges to off-diagonal mass below tol * ||A||_F, capped at max_sweeps.
inline std::vector<double> sym_eigenvalues(Mat m, double tol = 1e-12,
                                           int max_sweeps = 10000) {
  const int n = m.n;
  if (n == 1) return {m(0, 0)};
  const double scale = std::max(m.frobenius(), 1e-300);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += m(i, j) * m(i, j);
    if (std::sqrt(2.0 * off) <= tol * scale) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = m(p, q);
        if (apq == 0.0) continue;
        const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0)
                             ? 1.0 / (theta + std::sqrt(1.0 + theta * theta))
                             : 1.0 / (theta - std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double mkp = m(k, p), mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (int k = 0; k < n; ++k) {
          const double mpk = m(p, k), mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = m(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

inline double lambda_max(const Mat& m) { return sym_eigenvalues(m).back(); }
inline double lambda_min(const Mat& m) { return sym_eigenvalues(m).front(); }

// Spectral norm ||A|| = sqrt(lambda_max(A^T A)); valid for any square A.
inline double spectral_norm(const Mat& a) {
  Mat ata = matmul(transpose(a), a);
  // Symmetrize away rounding before the eigensolve.
  for (int i = 0; i < ata.n; ++i)
    for (int j = i + 1; j < ata.n; ++j) {
      const double v = 0.5 * (ata(i, j) + ata(j, i));
      ata(i, j) = ata(j, i) = v;
    }
  return std::sqrt(std::max(0.0, lambda_max(ata)));
}

// ---- FFT ----------------------------------------------------------------

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// In-place iterative radix-2 FFT; size must be a power of two.
inline void fft(std::vector<std::complex<double>>& a, bool inverse = false) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw std::invalid_argument("fft: size must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = 2.0 * std::numbers::pi / static_cast<double>(len) *
                       (inverse ? 1.0 : -1.0);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const auto u = a[i + k];
        const auto v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse)
    for (auto& x : a) x /= static_cast<double>(n);
}

// ---- symmetric Toeplitz largest eigenvalue ------------------------------

// Matvec y = T x for the symmetric Toeplitz matrix with first column `col`,
// computed by circulant embedding. The embedding spectrum is precomputed once.
class ToeplitzMatvec {
 public:
  explicit ToeplitzMatvec(const std::vector<double>& col)
      : n_(col.size()), m_(next_pow2(2 * col.size())) {
    std::vector<std::complex<double>> c(m_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) c[i] = col[i];
    for (std::size_t i = 1; i < n_; ++i) c[m_ - i] = col[i];
    fft(c);
    spectrum_ = std::move(c);
  }

  [[nodiscard]] std::size_t size() const { return n_; }

  void apply(const std::vector<double>& x, std::vector<double>& y) const {
    std::vector<std::complex<double>> v(m_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) v[i] = x[i];
    fft(v);
    for (std::size_t i = 0; i < m_; ++i) v[i] *= spectrum_[i];
    fft(v, /*inverse=*/true);
    y.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) y[i] = v[i].real();
  }

 private:
  std::size_t n_;
  std::size_t m_;
  std::vector<std::complex<double>> spectrum_;
};

// Largest eigenvalue by Lanczos with full reorthogonalization; the small
// tridiagonal problem is handed to the Jacobi solver.
inline double toeplitz_lambda_max(const std::vector<double>& col,
                                  int max_steps = 120, double tol = 1e-11) {
  const std::size_t n = col.size();
  if (n == 0) throw std::invalid_argument("toeplitz_lambda_max: empty column");
  if (n == 1) return col[0];
  ToeplitzMatvec op(col);
  const int steps = std::min<int>(max_steps, static_cast<int>(n));

  std::vector<std::vector<double>> basis;
  std::vector<double> alpha, beta;
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = std::sin(0.5 + static_cast<double>(i));  // fixed deterministic start
  double nv = 0.0;
  for (double x : v) nv += x * x;
  nv = std::sqrt(nv);
  for (double& x : v) x /= nv;

  std::vector<double> w(n);
  double prev = 0.0;
  for (int k = 0; k < steps; ++k) {
    basis.push_back(v);
    op.apply(v, w);
    double a = 0.0;
    for (std::size_t i = 0; i < n; ++i) a += v[i] * w[i];
    alpha.push_back(a);
    for (std::size_t i = 0; i < n; ++i) w[i] -= a * v[i];
    if (k > 0)
      for (std::size_t i = 0; i < n; ++i) w[i] -= beta.back() * basis[k - 1][i];
    // full reorthogonalization
    for (const auto& u : basis) {
      double d = 0.0;
      for (std::size_t i = 0; i < n; ++i) d += u[i] * w[i];
      for (std::size_t i = 0; i < n; ++i) w[i] -= d * u[i];
    }
    double nb = 0.0;
    for (double x : w) nb += x * x;
    nb = std::sqrt(nb);
    if (k + 1 < steps && nb > 1e-14) {
      beta.push_back(nb);
      for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / nb;
    }
    // check convergence of the top Ritz value every few steps
    if ((k >= 8 && k % 4 == 0) || k == steps - 1 || nb <= 1e-14) {
      const int m = static_cast<int>(alpha.size());
      Mat t(m);
      for (int i = 0; i < m; ++i) {
        t(i, i) = alpha[i];
        if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
      }
      const double cur = lambda_max(t);
      if (std::abs(cur - prev) <= tol * std::max(1.0, std::abs(cur)) || nb <= 1e-14)
        return cur;
      prev = cur;
    }
  }
  return prev;
}

}  // namespace depbound
