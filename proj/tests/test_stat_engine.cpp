#include "doctest.h"

#include "epstein/analytic_moments.hpp"
#include "epstein/errors.hpp"
#include "epstein/poisson_model.hpp"
#include "epstein/rng.hpp"
#include "epstein/stat_engine.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace epstein;

namespace {

// Two-pass central sums.
struct Direct {
  double mean = 0, m2 = 0, m3 = 0, m4 = 0;
  explicit Direct(const std::vector<double>& v) {
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    for (double x : v) {
      const double d = x - mean;
      m2 += d * d;
      m3 += d * d * d;
      m4 += d * d * d * d;
    }
  }
};

double exp_cdf(double x) { return x <= 0 ? 0.0 : 1.0 - std::exp(-x / 2); }

}  // namespace

TEST_SUITE("stat_engine") {

TEST_CASE("streaming moments and merge") {
  Rng rng(3);
  std::vector<double> v;
  for (int i = 0; i < 3000; ++i) v.push_back(rng.exponential(2.0) + 10.0);
  StreamingStats all, a, b, c;
  for (std::size_t i = 0; i < v.size(); ++i) {
    all.add(v[i]);
    (i < 1000 ? a : i < 1700 ? b : c).add(v[i]);
  }
  const Direct d(v);
  // Documented tolerance: count * eps * max|x - mean|^p, with generous headroom.
  const double eps = 1e-16 * 3000 * 100;
  CHECK(all.mean() == doctest::Approx(d.mean).epsilon(1e-13));
  CHECK(all.central_m2() == doctest::Approx(d.m2).epsilon(eps));
  CHECK(all.central_m3() == doctest::Approx(d.m3).epsilon(eps));
  CHECK(all.central_m4() == doctest::Approx(d.m4).epsilon(eps));
  StreamingStats ab = a, bc = b, l = a, r = c;
  ab.merge(b);
  ab.merge(c);
  bc.merge(c);
  l.merge(bc);
  r.merge(b);
  r.merge(a);
  for (const auto* s : {&ab, &l, &r}) {
    CHECK(s->count() == 3000);
    CHECK(s->mean() == doctest::Approx(all.mean()).epsilon(1e-13));
    CHECK(s->central_m2() == doctest::Approx(all.central_m2()).epsilon(eps));
    CHECK(s->central_m3() == doctest::Approx(all.central_m3()).epsilon(eps));
    CHECK(s->central_m4() == doctest::Approx(all.central_m4()).epsilon(eps));
    CHECK(s->min() == all.min());
    CHECK(s->max() == all.max());
  }
  StreamingStats empty;
  ab.merge(empty);
  CHECK(ab.count() == 3000);
}

TEST_CASE("ks distance") {
  const double one[] = {1.0};
  CHECK(ks_distance(one, exp_cdf) == doctest::Approx(std::exp(-0.5)));
  CHECK_THROWS_AS(ks_distance(std::vector<double>{}, exp_cdf), DomainError);

  // Kolmogorov law: P(sqrt(N) D > 1.36) ~ 5%.
  int hits = 0;
  const int reps = 40, n = 100000;
  for (int r = 0; r < reps; ++r) {
    Rng rng(static_cast<std::uint64_t>(r));
    std::vector<double> s(n);
    for (double& x : s) x = rng.exponential(2.0);
    std::sort(s.begin(), s.end());
    const double d = ks_distance(s, exp_cdf);
    CHECK(d >= 0.0);
    CHECK(d <= 1.0);
    if (d < 1.95 / std::sqrt(double(n))) ++hits;
    if (r == 0) {
      // Strictly monotone reparametrization x -> log x on both sides.
      std::vector<double> t(s.size());
      std::transform(s.begin(), s.end(), t.begin(), [](double x) { return std::log(x); });
      CHECK(ks_distance(t, [](double y) { return exp_cdf(std::exp(y)); }) == doctest::Approx(d).epsilon(1e-9));
      // A duplicated point moves the statistic by at most 1/N.
      std::vector<double> dup = s;
      dup.insert(dup.begin() + n / 2, s[static_cast<std::size_t>(n / 2)]);
      CHECK(ks_distance(dup, exp_cdf) >= d - 1.0 / n);
    }
  }
  CHECK(hits >= reps - 3);
}

TEST_CASE("two-sample ks") {
  const std::vector<double> a = {1, 2, 3, 4}, b = {1, 2, 3, 4};
  CHECK(ks_distance_two_sample(a, b) == 0.0);
  const std::vector<double> c = {5, 6};
  CHECK(ks_distance_two_sample(a, c) == 1.0);
  const std::vector<double> e = {2.5};
  CHECK(ks_distance_two_sample(a, e) == doctest::Approx(0.5));
}

TEST_CASE("bootstrap standard error") {
  Rng rng(12);
  std::vector<double> v(20000);
  for (double& x : v) x = rng.normal();
  const double se = bootstrap_stderr(v);
  CHECK(se == doctest::Approx(1.0 / std::sqrt(20000.0)).epsilon(0.25));
  CHECK(bootstrap_stderr(v) == se);
  CHECK_THROWS_AS(bootstrap_stderr(std::vector<double>(50, 1.0)), DomainError);
}

TEST_CASE("moment test on Poisson samples") {
  const double horizon = 300.0;
  std::vector<double> t(40000);
  const double grid[] = {1.0};
  for (std::size_t s = 0; s < t.size(); ++s) stream_truncated(horizon, s + 77, grid, 1.0, std::span(&t[s], 1));
  const auto r1 = moment_test(t, 1, 1.0 - tail_mean(1.0, horizon));
  CHECK(r1.pass);
  CHECK(r1.tolerance == doctest::Approx(4 * r1.std_error));
  CHECK(r1.sample_size == t.size());
  CHECK(moment_test(t, 2, poisson_moment_window(2, 1.0, 1.0, horizon)).pass);
  // The limit second moment 5/3 differs from the window value by about 2 tail_mean.
  CHECK(moment_test(t, 2, limit_moment(2, 1.0, 1.0)).pass);
  std::vector<double> shifted = t;
  for (double& x : shifted) x += 0.5;
  CHECK_FALSE(moment_test(shifted, 1, 1.0).pass);
  CHECK_THROWS_AS(moment_test(t, 5, 1.0), DomainError);
  CHECK_THROWS_AS(moment_test(std::vector<double>(10, 1.0), 1, 1.0), DomainError);
}

TEST_CASE("convexity audit") {
  const double g[] = {0, 1, 2};
  const double concave[] = {0, 1, 0};
  const auto r = convexity_audit(g, concave);
  CHECK_FALSE(r.pass);
  CHECK(r.worst_index == 1);
  CHECK(r.max_violation > 0.5);
  const double convex[] = {1, 0, 1};
  CHECK(convexity_audit(g, convex).pass);
  const double line[] = {1e8, 1e8 + 1, 1e8 + 2};
  CHECK(convexity_audit(g, line).pass);
  CHECK_THROWS_AS(convexity_audit(std::vector<double>{0, 1}, std::vector<double>{0, 1}), DomainError);
  CHECK_THROWS_AS(convexity_audit(std::vector<double>{0, 2, 1}, std::vector<double>{0, 1, 0}), DomainError);
}

TEST_CASE("finite-dimensional comparison of two Poisson ensembles") {
  const std::vector<double> grid = {0.75, 1.0};
  const double horizon = 400.0;
  auto ensemble = [&](std::uint64_t base, std::size_t trials, const char* label) {
    Ensemble e;
    e.grid = grid;
    e.label = label;
    e.seeds = std::string("seeds ") + std::to_string(base) + "+i";
    e.samples.assign(grid.size(), std::vector<double>(trials));
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < trials; ++i) {
      stream_truncated(horizon, base + i, grid, 1.0, out);
      for (std::size_t g = 0; g < grid.size(); ++g) e.samples[g][i] = out[g];
    }
    return e;
  };
  const auto a = ensemble(0, 20000, "a"), b = ensemble(1000000, 20000, "b");
  FiniteDimOptions opt;
  opt.horizon = horizon;
  const auto reports = finite_dim_compare(a, b, opt);
  CHECK(reports.size() == 2 * 4 + 3);
  int fails = 0;
  for (const auto& r : reports) fails += r.pass ? 0 : 1;
  CHECK(fails == 0);
  Ensemble bad = b;
  bad.grid = {0.75, 1.1};
  CHECK_THROWS_AS(finite_dim_compare(a, bad, opt), DomainError);
}

}
