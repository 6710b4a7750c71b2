#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "qsl/noise.hpp"

using namespace qsl;

TEST_CASE("mix64 scrambles") {
  CHECK(mix64(1) != 1);
  CHECK(mix64(1) != mix64(2));
  CHECK(mix64(0x9e3779b97f4a7c15ull) != 0);
}

TEST_CASE("streams are deterministic and keyed") {
  RngStream a(42, 7, 1), b(42, 7, 1);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  RngStream c(42, 7, 2), d(42, 8, 1), e(43, 7, 1);
  RngStream base(42, 7, 1);
  // different key components give different sequences
  CHECK(base.next_u64() != c.next_u64());
  RngStream base2(42, 7, 1);
  CHECK(base2.next_u64() != d.next_u64());
  RngStream base3(42, 7, 1);
  CHECK(base3.next_u64() != e.next_u64());
}

TEST_CASE("uniform01 lies in (0, 1] with the right mean") {
  RngStream s(1, 2, 3);
  double sum = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform01();
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / n - 0.5) < 0.01);
}

TEST_CASE("gaussian moments and independence") {
  RngStream s(7, 0, 0);
  const int n = 200000;
  double m1 = 0.0, m2 = 0.0, m3 = 0.0, m4 = 0.0, lag1 = 0.0;
  double prev = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = s.gaussian();
    m1 += z;
    m2 += z * z;
    m3 += z * z * z;
    m4 += z * z * z * z;
    if (i > 0) lag1 += z * prev;
    prev = z;
  }
  m1 /= n;
  m2 /= n;
  m3 /= n;
  m4 /= n;
  lag1 /= (n - 1);
  CHECK(std::abs(m1) < 0.01);
  CHECK(std::abs(m2 - 1.0) < 0.02);
  CHECK(std::abs(m3) < 0.05);
  CHECK(std::abs(m4 - 3.0) < 0.1);
  CHECK(std::abs(lag1) < 0.01);  // successive draws uncorrelated (spare-cache safe)
}

TEST_CASE("parallel axis streams are uncorrelated") {
  RngStream sx(99, 5, 0), sy(99, 5, 1);
  const int n = 100000;
  double cross = 0.0;
  for (int i = 0; i < n; ++i) cross += sx.gaussian() * sy.gaussian();
  CHECK(std::abs(cross / n) < 0.015);
}

TEST_CASE("wiener increments have variance dt") {
  RngStream s(3, 1, 2);
  const double dt = 1e-3;
  const int n = 100000;
  double m2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double dw = wiener_increment(s, dt);
    m2 += dw * dw;
  }
  CHECK(m2 / n == doctest::Approx(dt).epsilon(0.02));
}

TEST_CASE("ou mean reversion is exact for the deterministic part") {
  OUState o{0.7, 2.0, 0.1, 0.2};  // value, theta, w0, mu
  const double dt = 0.13;
  double t = 0.0;
  for (int k = 0; k < 25; ++k) {
    o = ou_exact_step(o, dt, 0.0);  // zero draws -> pure relaxation
    t += dt;
    CHECK(o.value == doctest::Approx(ou_mean(t, 0.7, 0.2, 2.0)).epsilon(1e-12));
  }
  CHECK(ou_mean(1e9, 0.7, 0.2, 2.0) == doctest::Approx(0.2));
}

TEST_CASE("ou stationary variance and autocorrelation decay") {
  // theta = 1, w0 = 0.1: stationary variance w0^2 / (2 theta) = 0.005
  const double theta = 1.0, w0 = 0.1;
  OUState o{0.0, theta, w0, 0.0};
  RngStream s(2024, 0, 0);
  const double dt = 0.01;
  // burn in ten correlation times
  for (int k = 0; k < 1000; ++k) o = ou_exact_step(o, dt, s.gaussian());
  // sample every half correlation time
  const int n = 10000, stride = 50;
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < stride; ++k) o = ou_exact_step(o, dt, s.gaussian());
    x[static_cast<size_t>(i)] = o.value;
  }
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= n;
  CHECK(std::abs(mean) < 0.01);
  CHECK(std::abs(var - 0.005) / 0.005 < 0.10);

  // log-linear fit of the autocorrelation over lags tau = 0.5 .. 2.0
  const auto autocov = [&](int lag) {
    double c = 0.0;
    for (int i = 0; i + lag < n; ++i) c += (x[static_cast<size_t>(i)] - mean) *
                                           (x[static_cast<size_t>(i + lag)] - mean);
    return c / static_cast<double>(n - lag);
  };
  double sxx = 0.0, sxy = 0.0, sx = 0.0, sy = 0.0;
  int m = 0;
  for (int lag = 1; lag <= 4; ++lag) {
    const double tau = lag * stride * dt;
    const double c = autocov(lag) / var;
    REQUIRE(c > 0.0);
    sx += tau;
    sy += std::log(c);
    sxx += tau * tau;
    sxy += tau * std::log(c);
    ++m;
  }
  const double rate = -(m * sxy - sx * sy) / (m * sxx - sx * sx);
  CHECK(std::abs(rate - theta) / theta < 0.10);
}

TEST_CASE("ou transition matches the analytic autocovariance from a fixed start") {
  // from o0 = 0: var(t) = w0^2/(2 theta) (1 - exp(-2 theta t))
  const double theta = 1.0, w0 = 0.1;
  const double t1 = 0.5, t2 = 1.5;
  const int n = 40000;
  double var1 = 0.0, var2 = 0.0, cov = 0.0;
  for (int r = 0; r < n; ++r) {
    OUState o{0.0, theta, w0, 0.0};
    RngStream s(555, static_cast<std::uint64_t>(r), 0);
    const double dt = 0.01;
    double v1 = 0.0;
    for (int k = 0; k < 150; ++k) {
      o = ou_exact_step(o, dt, s.gaussian());
      if (k == 49) v1 = o.value;
    }
    var1 += v1 * v1;
    var2 += o.value * o.value;
    cov += v1 * o.value;
  }
  var1 /= n;
  var2 /= n;
  cov /= n;
  CHECK(var1 == doctest::Approx(ou_autocovariance(t1, t1, theta, w0)).epsilon(0.05));
  CHECK(var2 == doctest::Approx(ou_autocovariance(t2, t2, theta, w0)).epsilon(0.05));
  CHECK(cov == doctest::Approx(ou_autocovariance(t1, t2, theta, w0)).epsilon(0.08));
}

TEST_CASE("ou autocovariance closed form") {
  const double theta = 1.0, w0 = 0.1;
  // equal times, long horizon: stationary variance
  CHECK(ou_autocovariance(50.0, 50.0, theta, w0) == doctest::Approx(0.005));
  // separated times decay with exp(-theta |t - t'|)
  const double c = ou_autocovariance(50.0, 51.0, theta, w0);
  CHECK(c == doctest::Approx(0.005 * std::exp(-1.0)).epsilon(1e-6));
  // at t = 0 the process is pinned at o0 = 0, so no variance yet
  CHECK(ou_autocovariance(0.0, 0.0, theta, w0) == doctest::Approx(0.0));
}
