#pragma once

// Streaming moments, Kolmogorov-Smirnov distances, batch-bootstrap standard
// errors and the test panels that compare samples with closed forms.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace epstein {

// Count, mean, central moment sums M2..M4, min and max. add() uses the
// one-pass updates and merge() the pairwise combination formulas, so merged
// results match a single pass up to rounding of order count * eps * max|x|^p.
class StreamingStats {
 public:
  void add(double x);
  void merge(const StreamingStats& other);

  std::uint64_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const;  // unbiased
  double std_error() const;  // sqrt(variance / count)
  double central_m2() const { return m2_; }
  double central_m3() const { return m3_; }
  double central_m4() const { return m4_; }
  double min() const { return min_; }
  double max() const { return max_; }

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0, m2_ = 0.0, m3_ = 0.0, m4_ = 0.0;
  double min_ = 0.0, max_ = 0.0;
};

// sup_x |F_N(x) - F(x)| for a sorted sample.
double ks_distance(std::span<const double> sorted_sample, const std::function<double(double)>& cdf);
// sup_x |F_N(x) - G_M(x)| for two sorted samples.
double ks_distance_two_sample(std::span<const double> a_sorted, std::span<const double> b_sorted);

struct StderrPolicy {
  double z = 4.0;
  int batches = 100;
  int resamples = 200;
  std::uint64_t seed = 0x5eed;
};

// Standard error of the sample mean from a bootstrap over contiguous batches.
double bootstrap_stderr(std::span<const double> values, const StderrPolicy& policy = {});

struct TestReport {
  std::string name;
  double observed = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  double std_error = 0.0;
  bool pass = false;
  std::uint64_t sample_size = 0;
  std::string seeds;  // how the seeds were derived, e.g. "master=7 trials=0..4999"
  std::string note;
};

// Empirical k-th raw moment against `reference`, tolerance z * stderr.
// 1 <= k <= 4; fewer than 2 * batches samples is a domain error.
TestReport moment_test(std::span<const double> samples, int k, double reference, const StderrPolicy& policy = {},
                       std::string name = {});
// Same, for a sample mean of arbitrary per-trial values (k = 1 with a label).
TestReport mean_test(std::span<const double> values, double reference, const StderrPolicy& policy = {},
                     std::string name = {});
// Difference of two independent sample means against zero.
TestReport two_sample_mean_test(std::span<const double> a, std::span<const double> b, const StderrPolicy& policy = {},
                                std::string name = {});

struct ConvexityResult {
  bool pass = false;
  double max_violation = 0.0;  // most negative scaled second divided difference, as a positive number
  std::size_t worst_index = 0;
};

// Second divided differences >= -tol * (local magnitude) on a strictly
// increasing grid of >= 3 points.
ConvexityResult convexity_audit(std::span<const double> grid, std::span<const double> values, double rel_tol = 1e-10);

// samples[g][i]: value of trial i at grid point g.
struct Ensemble {
  std::vector<double> grid;
  std::vector<std::vector<double>> samples;
  std::string label;
  std::string seeds;
};

struct FiniteDimOptions {
  double delta = 1.0;
  std::optional<double> horizon;  // analytic reference restricted to (delta, horizon]
  double ks_budget = 0.05;
  StderrPolicy policy;
};

// Per-coordinate two-sample KS, first moments per coordinate and the (1,1)
// cross moment of each adjacent pair, for each ensemble against the analytic
// joint moments and between the ensembles.
std::vector<TestReport> finite_dim_compare(const Ensemble& lattice, const Ensemble& poisson,
                                           const FiniteDimOptions& opt = {});

}  // namespace epstein
