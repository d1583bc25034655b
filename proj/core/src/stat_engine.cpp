#include "epstein/stat_engine.hpp"

#include "epstein/analytic_moments.hpp"
#include "epstein/errors.hpp"
#include "epstein/rng.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace epstein {

void StreamingStats::add(double x) {
  StreamingStats one;
  one.n_ = 1;
  one.mean_ = x;
  one.min_ = one.max_ = x;
  merge(one);
}

// Pairwise update for central sums up to order four.
void StreamingStats::merge(const StreamingStats& o) {
  if (o.n_ == 0) return;
  if (n_ == 0) {
    *this = o;
    return;
  }
  const double na = static_cast<double>(n_), nb = static_cast<double>(o.n_);
  const double n = na + nb;
  const double d = o.mean_ - mean_;
  const double d_n = d / n;
  const double d_n2 = d_n * d_n;
  const double m2 = m2_ + o.m2_ + d * d_n * na * nb;
  const double m3 = m3_ + o.m3_ + d * d_n2 * na * nb * (na - nb) + 3.0 * d_n * (na * o.m2_ - nb * m2_);
  const double m4 = m4_ + o.m4_ + d * d_n2 * d_n * na * nb * (na * na - na * nb + nb * nb) +
                    6.0 * d_n2 * (na * na * o.m2_ + nb * nb * m2_) + 4.0 * d_n * (na * o.m3_ - nb * m3_);
  mean_ += d_n * nb;
  m2_ = m2;
  m3_ = m3;
  m4_ = m4;
  n_ += o.n_;
  min_ = std::min(min_, o.min_);
  max_ = std::max(max_, o.max_);
}

double StreamingStats::variance() const { return n_ < 2 ? 0.0 : m2_ / static_cast<double>(n_ - 1); }

double StreamingStats::std_error() const {
  return n_ < 2 ? 0.0 : std::sqrt(variance() / static_cast<double>(n_));
}

double ks_distance(std::span<const double> s, const std::function<double(double)>& cdf) {
  if (s.empty()) throw DomainError("ks_distance: empty sample");
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = cdf(s[i]);
    // Ties: the empirical CDF jumps once at the last copy.
    std::size_t j = i;
    while (j + 1 < s.size() && s[j + 1] == s[i]) ++j;
    d = std::max({d, static_cast<double>(j + 1) / n - f, f - static_cast<double>(i) / n});
    i = j;
  }
  return std::clamp(d, 0.0, 1.0);
}

double ks_distance_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw DomainError("ks_distance_two_sample: empty sample");
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double bootstrap_stderr(std::span<const double> values, const StderrPolicy& p) {
  if (p.batches < 2 || p.resamples < 2) throw DomainError("bootstrap_stderr: need >= 2 batches and resamples");
  const auto nb = static_cast<std::size_t>(p.batches);
  if (values.size() < 2 * nb) throw DomainError("bootstrap_stderr: insufficient sample");
  std::vector<StreamingStats> batch(nb);
  const std::size_t per = values.size() / nb, extra = values.size() % nb;
  std::size_t pos = 0;
  for (std::size_t b = 0; b < nb; ++b) {
    const std::size_t len = per + (b < extra ? 1 : 0);
    for (std::size_t i = 0; i < len; ++i) batch[b].add(values[pos++]);
  }
  Rng rng(p.seed);
  StreamingStats boot;
  for (int r = 0; r < p.resamples; ++r) {
    StreamingStats s;
    for (std::size_t b = 0; b < nb; ++b) s.merge(batch[rng.below(nb)]);
    boot.add(s.mean());
  }
  return std::sqrt(boot.variance());
}

namespace {

TestReport finish(std::string name, double observed, double reference, double se, std::uint64_t n,
                  const StderrPolicy& p) {
  TestReport r;
  r.name = std::move(name);
  r.observed = observed;
  r.reference = reference;
  r.std_error = se;
  r.tolerance = p.z * se;
  r.pass = std::abs(observed - reference) <= r.tolerance;
  r.sample_size = n;
  return r;
}

double sample_mean(std::span<const double> v) {
  StreamingStats s;
  for (double x : v) s.add(x);
  return s.mean();
}

}  // namespace

TestReport moment_test(std::span<const double> samples, int k, double reference, const StderrPolicy& p,
                       std::string name) {
  if (k < 1 || k > 4) throw DomainError("moment_test: k must be in 1..4");
  std::vector<double> pw(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double x = samples[i];
    pw[i] = k == 1 ? x : k == 2 ? x * x : k == 3 ? x * x * x : (x * x) * (x * x);
  }
  const double se = bootstrap_stderr(pw, p);
  if (name.empty()) name = "moment_k" + std::to_string(k);
  return finish(std::move(name), sample_mean(pw), reference, se, samples.size(), p);
}

TestReport mean_test(std::span<const double> values, double reference, const StderrPolicy& p, std::string name) {
  const double se = bootstrap_stderr(values, p);
  if (name.empty()) name = "mean";
  return finish(std::move(name), sample_mean(values), reference, se, values.size(), p);
}

TestReport two_sample_mean_test(std::span<const double> a, std::span<const double> b, const StderrPolicy& p,
                                std::string name) {
  StderrPolicy pb = p;
  pb.seed = p.seed ^ 0x9e3779b97f4a7c15ULL;
  const double sa = bootstrap_stderr(a, p), sb = bootstrap_stderr(b, pb);
  if (name.empty()) name = "mean_difference";
  return finish(std::move(name), sample_mean(a) - sample_mean(b), 0.0, std::hypot(sa, sb), a.size() + b.size(), p);
}

ConvexityResult convexity_audit(std::span<const double> x, std::span<const double> y, double rel_tol) {
  if (x.size() != y.size()) throw DomainError("convexity_audit: grid and values differ in length");
  if (x.size() < 3) throw DomainError("convexity_audit: need at least 3 points");
  for (std::size_t i = 1; i < x.size(); ++i)
    if (!(x[i] > x[i - 1])) throw DomainError("convexity_audit: grid must be strictly increasing");
  ConvexityResult r;
  r.pass = true;
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    const double h1 = x[i] - x[i - 1], h2 = x[i + 1] - x[i];
    const double s1 = (y[i] - y[i - 1]) / h1, s2 = (y[i + 1] - y[i]) / h2;
    // Rounding in y shows up in the slopes at scale |y| eps / h.
    const double scale = std::max({std::abs(y[i - 1]), std::abs(y[i]), std::abs(y[i + 1])}) / std::min(h1, h2);
    const double viol = -(s2 - s1) / std::max(scale, 1e-300);
    if (viol > r.max_violation) {
      r.max_violation = viol;
      r.worst_index = i;
    }
    if (viol > rel_tol) r.pass = false;
  }
  return r;
}

std::vector<TestReport> finite_dim_compare(const Ensemble& L, const Ensemble& P, const FiniteDimOptions& opt) {
  if (L.grid != P.grid) throw DomainError("finite_dim_compare: grids differ");
  const std::size_t g = L.grid.size();
  if (g == 0 || L.samples.size() != g || P.samples.size() != g)
    throw DomainError("finite_dim_compare: samples must have one row per grid point");
  for (std::size_t i = 1; i < g; ++i)
    if (!(L.grid[i] > L.grid[i - 1])) throw DomainError("finite_dim_compare: grid must be strictly increasing");

  auto ref = [&](std::span<const double> gammas) {
    return opt.horizon ? poisson_mixed_moment_window(gammas, opt.delta, *opt.horizon)
                       : poisson_mixed_moment(gammas, opt.delta);
  };
  auto label = [](const char* what, double a) {
    std::ostringstream s;
    s << what << "(c=" << a << ")";
    return s.str();
  };
  auto tag = [](TestReport r, const Ensemble& e) {
    r.name = e.label + ":" + r.name;
    r.seeds = e.seeds;
    return r;
  };

  std::vector<TestReport> out;
  for (std::size_t i = 0; i < g; ++i) {
    std::vector<double> a = L.samples[i], b = P.samples[i];
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    TestReport ks;
    ks.name = label("ks", L.grid[i]);
    ks.observed = ks_distance_two_sample(a, b);
    ks.reference = 0.0;
    ks.tolerance = opt.ks_budget;
    ks.pass = ks.observed <= opt.ks_budget;
    ks.sample_size = a.size() + b.size();
    ks.seeds = L.seeds + "; " + P.seeds;
    out.push_back(ks);

    const double gam[1] = {L.grid[i]};
    const double r1 = ref(gam);
    out.push_back(tag(mean_test(L.samples[i], r1, opt.policy, label("m1", L.grid[i])), L));
    out.push_back(tag(mean_test(P.samples[i], r1, opt.policy, label("m1", L.grid[i])), P));
    auto d = two_sample_mean_test(L.samples[i], P.samples[i], opt.policy, label("m1_diff", L.grid[i]));
    d.seeds = L.seeds + "; " + P.seeds;
    out.push_back(d);
  }
  for (std::size_t i = 0; i + 1 < g; ++i) {
    const double gam[2] = {L.grid[i], L.grid[i + 1]};
    const double r11 = ref(gam);
    std::ostringstream nm;
    nm << "m11(c=" << gam[0] << "," << gam[1] << ")";
    auto prod = [&](const Ensemble& e) {
      if (e.samples[i].size() != e.samples[i + 1].size())
        throw DomainError("finite_dim_compare: ragged samples in " + e.label);
      std::vector<double> v(e.samples[i].size());
      for (std::size_t t = 0; t < v.size(); ++t) v[t] = e.samples[i][t] * e.samples[i + 1][t];
      return v;
    };
    const auto pl = prod(L), pp = prod(P);
    out.push_back(tag(mean_test(pl, r11, opt.policy, nm.str()), L));
    out.push_back(tag(mean_test(pp, r11, opt.policy, nm.str()), P));
    auto d = two_sample_mean_test(pl, pp, opt.policy, nm.str() + "_diff");
    d.seeds = L.seeds + "; " + P.seeds;
    out.push_back(d);
  }
  return out;
}

}  // namespace epstein
