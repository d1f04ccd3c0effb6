#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "depbound/linalg.hpp"
#include "depbound/rng.hpp"

using namespace depbound;

namespace {

Mat sample_transition() {
  Mat a(2);
  a(0, 0) = 0.5;
  a(0, 1) = 0.1;
  a(1, 0) = 0.2;
  a(1, 1) = 0.25;
  return a;
}

double det3(const Mat& m) {
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

}  // namespace

TEST_CASE("sym_eigenvalues: 2x2 closed form") {
  Mat m(2);
  m(0, 0) = 2.0;
  m(0, 1) = m(1, 0) = 1.0;
  m(1, 1) = 3.0;
  const auto ev = sym_eigenvalues(m);
  REQUIRE(ev.size() == 2);
  const double root = std::sqrt(5.0) / 2.0;
  REQUIRE(ev[0] == Catch::Approx(2.5 - root).epsilon(1e-12));
  REQUIRE(ev[1] == Catch::Approx(2.5 + root).epsilon(1e-12));
}

TEST_CASE("sym_eigenvalues: diagonal is sorted ascending") {
  Mat m(3);
  m(0, 0) = 3.0;
  m(1, 1) = 1.0;
  m(2, 2) = 2.0;
  const auto ev = sym_eigenvalues(m);
  REQUIRE(ev == std::vector<double>{1.0, 2.0, 3.0});
  REQUIRE(lambda_min(m) == 1.0);
  REQUIRE(lambda_max(m) == 3.0);
}

TEST_CASE("sym_eigenvalues: random symmetric 3x3 satisfies the invariants") {
  const rng::Key key{31, 0};
  std::uint64_t ctr = 0;
  for (int trial = 0; trial < 20; ++trial) {
    Mat m(3);
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) m(i, j) = m(j, i) = 2.0 * key.uniform(ctr++) - 1.0;
    const auto ev = sym_eigenvalues(m);
    const double trace = m(0, 0) + m(1, 1) + m(2, 2);
    REQUIRE(ev[0] + ev[1] + ev[2] == Catch::Approx(trace).margin(1e-10));
    REQUIRE(ev[0] * ev[1] * ev[2] == Catch::Approx(det3(m)).margin(1e-10));
    // Frobenius norm equals the l2 norm of the spectrum
    const double fr = m.frobenius();
    REQUIRE(ev[0] * ev[0] + ev[1] * ev[1] + ev[2] * ev[2] ==
            Catch::Approx(fr * fr).margin(1e-10));
  }
}

TEST_CASE("spectral_norm of the 2x2 example transition") {
  const Mat a = sample_transition();
  // closed-form top eigenvalue of A^T A
  const Mat g = matmul(transpose(a), a);
  const double tr = g(0, 0) + g(1, 1);
  const double det = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
  const double top = 0.5 * (tr + std::sqrt(tr * tr - 4.0 * det));
  REQUIRE(spectral_norm(a) == Catch::Approx(std::sqrt(top)).epsilon(1e-10));
  REQUIRE(spectral_norm(a) < 1.0);
}

TEST_CASE("matmul and transpose basics") {
  const Mat a = sample_transition();
  const Mat id = Mat::identity(2);
  const Mat prod = matmul(a, id);
  REQUIRE(prod.a == a.a);
  const Mat att = transpose(transpose(a));
  REQUIRE(att.a == a.a);
}

TEST_CASE("fft: impulse, roundtrip, Parseval") {
  std::vector<std::complex<double>> a(8, {0.0, 0.0});
  a[0] = 1.0;
  fft(a);
  for (const auto& v : a) {
    REQUIRE(v.real() == Catch::Approx(1.0).margin(1e-13));
    REQUIRE(v.imag() == Catch::Approx(0.0).margin(1e-13));
  }

  const rng::Key key{8, 0};
  std::vector<std::complex<double>> x(64);
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = {key.normal(2 * i), key.normal(2 * i + 1)};
  auto y = x;
  fft(y);
  double power_t = 0.0, power_f = 0.0;
  for (const auto& v : x) power_t += std::norm(v);
  for (const auto& v : y) power_f += std::norm(v);
  REQUIRE(power_f == Catch::Approx(power_t * 64.0).epsilon(1e-12));
  fft(y, true);
  for (std::size_t i = 0; i < x.size(); ++i) {
    REQUIRE(y[i].real() == Catch::Approx(x[i].real()).margin(1e-12));
    REQUIRE(y[i].imag() == Catch::Approx(x[i].imag()).margin(1e-12));
  }
}

TEST_CASE("next_pow2") {
  REQUIRE(next_pow2(1) == 1);
  REQUIRE(next_pow2(2) == 2);
  REQUIRE(next_pow2(3) == 4);
  REQUIRE(next_pow2(1023) == 1024);
  REQUIRE(next_pow2(1024) == 1024);
}

TEST_CASE("toeplitz_lambda_max agrees with the dense eigensolver") {
  const rng::Key key{99, 0};
  // autocovariance-like column from a random series keeps the problem benign
  const std::size_t n = 32;
  std::vector<double> w(3 * n);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = key.normal(i);
  std::vector<double> col(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = k; l < w.size(); ++l) col[k] += w[l] * w[l - k];
    col[k] /= static_cast<double>(w.size());
  }
  Mat dense(static_cast<int>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      dense(static_cast<int>(i), static_cast<int>(j)) =
          col[i > j ? i - j : j - i];
  const double ref = lambda_max(dense);
  REQUIRE(toeplitz_lambda_max(col) == Catch::Approx(ref).epsilon(1e-8));
}

TEST_CASE("toeplitz_lambda_max trivial cases") {
  REQUIRE(toeplitz_lambda_max({3.5}) == 3.5);
  REQUIRE(toeplitz_lambda_max(std::vector<double>(16, 0.0)) ==
          Catch::Approx(0.0).margin(1e-12));
  REQUIRE_THROWS_AS(toeplitz_lambda_max({}), std::invalid_argument);
}
