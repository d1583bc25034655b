#include "doctest.h"

#include "epstein/analytic_moments.hpp"
#include "epstein/ball.hpp"
#include "epstein/errors.hpp"
#include "epstein/lattice_model.hpp"
#include "epstein/rng.hpp"
#include "epstein/stat_engine.hpp"
#include "epstein/zeta_eval.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

using namespace epstein;

namespace {

using Big = boost::multiprecision::cpp_bin_float_50;

// V_n by the two-step recurrence V_n = 2 pi V_{n-2} / n, V_0 = 1, V_1 = 2.
double ball_volume_log_oracle(int n) {
  Big v = (n % 2 == 0) ? Big(1) : Big(2);
  const Big pi = boost::math::constants::pi<Big>();
  for (int k = (n % 2 == 0) ? 2 : 3; k <= n; k += 2) v = v * 2 * pi / k;
  return static_cast<double>(log(v));
}

// All squared norms of x B with |x_i| <= box, one per +-pair.
std::vector<std::int64_t> box_norms(const LatticeBasis& b, int box, std::int64_t radius_sq) {
  const int n = b.n();
  std::vector<int> x(static_cast<std::size_t>(n), -box);
  std::vector<std::int64_t> out;
  for (;;) {
    int hi = n - 1;
    while (hi >= 0 && x[static_cast<std::size_t>(hi)] == 0) --hi;
    if (hi >= 0 && x[static_cast<std::size_t>(hi)] > 0) {
      std::int64_t sq = 0;
      for (int j = 0; j < n; ++j) {
        std::int64_t v = 0;
        for (int i = 0; i < n; ++i) v += x[static_cast<std::size_t>(i)] * b.at(i, j);
        sq += v * v;
      }
      if (sq <= radius_sq) out.push_back(sq);
    }
    int i = 0;
    while (i < n && x[static_cast<std::size_t>(i)] == box) x[static_cast<std::size_t>(i++)] = -box;
    if (i == n) break;
    ++x[static_cast<std::size_t>(i)];
  }
  std::sort(out.begin(), out.end());
  return out;
}

LatticeBasis identity(int n) {
  std::vector<std::int64_t> r(static_cast<std::size_t>(n * n), 0);
  for (int i = 0; i < n; ++i) r[static_cast<std::size_t>(i * n + i)] = 1;
  return LatticeBasis(n, r);
}

// Random unimodular matrix as a product of elementary row operations.
std::vector<std::int64_t> random_unimodular(int n, Rng& rng, int steps) {
  std::vector<std::int64_t> u(static_cast<std::size_t>(n * n), 0);
  for (int i = 0; i < n; ++i) u[static_cast<std::size_t>(i * n + i)] = 1;
  for (int s = 0; s < steps; ++s) {
    const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));
    if (j >= i) ++j;
    const std::int64_t k = static_cast<std::int64_t>(rng.below(5)) - 2;
    for (int c = 0; c < n; ++c) u[static_cast<std::size_t>(i * n + c)] += k * u[static_cast<std::size_t>(j * n + c)];
  }
  return u;
}

std::vector<std::int64_t> matmul(int n, const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
  std::vector<std::int64_t> c(static_cast<std::size_t>(n * n), 0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        c[static_cast<std::size_t>(i * n + j)] +=
            a[static_cast<std::size_t>(i * n + k)] * b[static_cast<std::size_t>(k * n + j)];
  return c;
}

}  // namespace

TEST_SUITE("lattice_zeta") {

TEST_CASE("ball volume against the recurrence") {
  for (int n : {1, 2, 3, 4, 7, 12, 40, 100, 200}) CHECK(unit_ball_volume_log(n) == doctest::Approx(ball_volume_log_oracle(n)).epsilon(1e-12));
  CHECK(std::exp(unit_ball_volume_log(2)) == doctest::Approx(std::numbers::pi));
  CHECK(unit_sphere_area_log(3) == doctest::Approx(std::log(4 * std::numbers::pi)));
  const double r = truncation_radius(12, 1.0);
  CHECK(std::exp(unit_ball_volume_log(12) + 12 * std::log(r)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(unit_ball_volume_log(0), DomainError);
}

TEST_CASE("basis normalization") {
  LatticeBasis b(2, {5, 0, 2, 1});
  CHECK(b.determinant() == 5);
  CHECK(b.covolume_normalizer() == doctest::Approx(1 / std::sqrt(5.0)));
  CHECK_THROWS_AS(LatticeBasis(2, {1, 2, 2, 4}), DomainError);
  CHECK_THROWS_AS(LatticeBasis(2, {1, 2, 3}), DomainError);
}

TEST_CASE("hecke samples") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto h = gm_sample(5, 30, s);
    CHECK(is_prime_u64(h.p));
    CHECK((h.p >> 29) == 1);
    CHECK(h.basis.determinant() == BigInt(h.p));
    REQUIRE(h.a.size() == 4);
    for (auto a : h.a) CHECK(a < h.p);
  }
  const auto a = gm_sample(4, 40, 3), b = gm_sample(4, 40, 3);
  CHECK(a.basis.rows() == b.basis.rows());
  CHECK(is_prime_u64(2));
  CHECK(is_prime_u64(1000000007));
  CHECK_FALSE(is_prime_u64(1));
  CHECK_FALSE(is_prime_u64(3215031751ULL));  // strong pseudoprime to 2, 3, 5, 7
  CHECK_THROWS_AS(gm_sample(1, 30, 0), DomainError);
}

TEST_CASE("lll") {
  LatticeBasis skew(2, {1, 0, 1000, 1});
  const auto r = lll_reduce_with_transform(skew);
  CHECK(is_lll_reduced(r.basis));
  CHECK_FALSE(is_lll_reduced(skew));
  std::vector<std::int64_t> sq;
  for (int i = 0; i < 2; ++i) sq.push_back(r.basis.at(i, 0) * r.basis.at(i, 0) + r.basis.at(i, 1) * r.basis.at(i, 1));
  CHECK(sq[0] == 1);
  CHECK(sq[1] == 1);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto h = gm_sample(8, 40, s);
    const auto red = lll_reduce_with_transform(h.basis);
    CHECK(is_lll_reduced(red.basis));
    CHECK(matmul(8, red.transform, h.basis.rows()) == red.basis.rows());
    const LatticeBasis t(8, red.transform);
    CHECK(abs(t.determinant()) == 1);
    CHECK(abs(red.basis.determinant()) == abs(h.basis.determinant()));
  }
}

TEST_CASE("enumeration matches a box search") {
  CHECK(enumerate_short(identity(2), 4) == std::vector<std::int64_t>{1, 1, 2, 2, 4, 4});
  CHECK(enumerate_short(identity(3), 1) == std::vector<std::int64_t>{1, 1, 1});
  LatticeBasis b(2, {5, 0, 2, 1});
  CHECK(enumerate_short(b, 30) == box_norms(b, 12, 30));
  Rng rng(4);
  for (int t = 0; t < 5; ++t) {
    const auto u = random_unimodular(3, rng, 6);
    LatticeBasis z3(3, matmul(3, u, {2, 0, 0, 1, 3, 0, 1, 1, 5}));
    const auto red = lll_reduce(z3);
    CHECK(enumerate_short(red, 60) == box_norms(red, 8, 60));
    CHECK(enumerate_short(z3, 60) == enumerate_short(red, 60));
  }
  CHECK_THROWS_AS(enumerate_short(identity(6), 50, 100), EnumerationBudgetExceeded);
}

TEST_CASE("spectrum is invariant under change of basis") {
  const auto h = gm_sample(6, 30, 9);
  const auto base = volume_spectrum(h.basis, 40.0);
  Rng rng(17);
  for (int t = 0; t < 3; ++t) {
    const auto u = random_unimodular(6, rng, 8);
    const LatticeBasis other(6, matmul(6, u, h.basis.rows()));
    const auto sp = volume_spectrum(other, 40.0);
    CHECK(sp.sq_norms == base.sq_norms);
  }
  for (double v : base.volumes) CHECK(v <= 40.0);
  CHECK(std::is_sorted(base.volumes.begin(), base.volumes.end()));
}

TEST_CASE("Z^2 spectrum and epsilon") {
  const double cutoff = 2e6;
  const auto sp = volume_spectrum(identity(2), cutoff);
  CHECK(sp.volumes.front() == doctest::Approx(std::numbers::pi));
  CHECK(counting_function(sp, 3.2) == 2);
  CHECK(counting_function(sp, 7.0) == 4);
  CHECK_THROWS_AS(counting_function(sp, 3e6), DomainError);
  // Brute force over a square: 2 sum_j V_j^-2 = sum_{m != 0} (pi |m|^2)^-2.
  double brute = 0.0;
  const int m = 2000;
  for (int a = -m; a <= m; ++a)
    for (int b = -m; b <= m; ++b) {
      if (a == 0 && b == 0) continue;
      const double q = double(a) * a + double(b) * b;
      brute += 1.0 / (q * q);
    }
  brute /= std::numbers::pi * std::numbers::pi;
  const auto e = epsilon_value(sp, 1.0);
  CHECK(e.value == doctest::Approx(brute).epsilon(3e-6));
  CHECK(e.value == doctest::Approx(0.6106437).epsilon(3e-6));
  // log E_2(Z^2, 2) = log sum' |m|^-4 = log(4 zeta(2) beta(2)).
  const double catalan = 0.915965594177219015;
  CHECK(epstein_unnormalized_log(sp, 1.0) == doctest::Approx(std::log(4 * std::numbers::pi * std::numbers::pi / 6 * catalan)).epsilon(1e-6));
  // Truncated sum drops the first shell (V = pi) when delta = 4.
  const auto tr = epsilon_truncated(sp, 1.0, 4.0);
  CHECK(tr.value == doctest::Approx(e.value - 2 * 2 / (std::numbers::pi * std::numbers::pi)).epsilon(1e-9));
  CHECK_THROWS_AS(epsilon_truncated(sp, 1.0, 3e6), DomainError);
}

TEST_CASE("epsilon curves are convex") {
  const auto h = gm_sample(8, 40, 2);
  const auto sp = volume_spectrum(h.basis, 500.0);
  std::vector<double> grid;
  for (int i = 0; i <= 15; ++i) grid.push_back(0.6 + 0.1 * i);
  for (auto delta : {std::optional<double>{}, std::optional<double>{1.0}}) {
    std::vector<double> y;
    for (const auto& z : epsilon_curve(sp, grid, delta)) y.push_back(z.value);
    CHECK(convexity_audit(grid, y).pass);
  }
}

TEST_CASE("large dimension from synthetic norms") {
  // V_40^(-2) is far outside double range; everything stays in logs.
  const int n = 40;
  const double log_s = -0.5 * std::log(3.0);
  std::vector<std::int64_t> norms = {3, 3, 4, 5, 5, 6};
  const auto sp = spectrum_from_norms(n, log_s, norms, 1e300);
  for (std::size_t i = 0; i < norms.size(); ++i)
    CHECK(sp.log_volumes[i] == doctest::Approx(unit_ball_volume_log(n) + n / 2.0 * std::log(double(norms[i])) + n * log_s));
  const double lg = epstein_unnormalized_log(sp, 1.0);
  CHECK(std::isfinite(lg));
  // The two shortest pairs dominate: 2 * 2 * (3 s^2)^(-n), the next shell is (4/3)^-40 smaller.
  const double head = std::log(2.0 * 2.0) - n * std::log(3.0 * std::exp(2 * log_s));
  CHECK(lg == doctest::Approx(head).epsilon(1e-3));
}

TEST_CASE("averaged counts match Siegel") {
  // E #{V_j <= t} = t / 2 for a Haar-random lattice; Hecke points are close at large p.
  const int trials = 300;
  const double t = 20.0;
  StreamingStats cnt;
  for (int s = 0; s < trials; ++s) {
    const auto h = gm_sample(10, 40, static_cast<std::uint64_t>(s));
    cnt.add(static_cast<double>(counting_function(volume_spectrum(h.basis, t), t)));
  }
  CHECK(std::abs(cnt.mean() - t / 2) < 4 * cnt.std_error());
}

}
