#pragma once

// Closed forms for the moments of the truncated random Dirichlet series
// T(c, delta) = 2 sum_j 1(T_j > delta) T_j^(-2c) over an intensity-1/2 Poisson
// process, and for the large-n limits of the moments of the normalized,
// truncated Epstein zeta function. Both families are evaluated in binary
// floating point and, for rational c and delta, exactly.

#include "epstein/rational.hpp"

#include <span>
#include <utility>
#include <vector>

namespace epstein {

struct MomentParams {
  double c = 1.0;
  double delta = 1.0;
  int k = 1;
  void validate() const;
};

struct FiniteNParams {
  int n = 12;
  double c = 1.0;
  double delta = 1.0;
  // Upper bound on the number of shells max(d1, d2) summed; the cut actually
  // used is chosen adaptively from `tol` and must not exceed this.
  long series_cut = 50'000'000;
  double tol = 1e-12;
  void validate() const;
};

// An exact value of the form coefficient * delta^delta_exponent. Every moment
// formula here carries the common factor delta^(-2 sum gamma), which is
// irrational for most rational (c, delta); factoring it out keeps the rest in Q.
struct DeltaScaled {
  Rational coefficient;
  Rational delta;
  Rational delta_exponent;

  double to_double() const;
  friend bool operator==(const DeltaScaled&, const DeltaScaled&) = default;
};

// delta^(1-2c) / (2c-1).
double mean_truncated(double c, double delta);
// 2 delta^(1-4c) / (4c-1).
double variance_limit(double c, double delta);
// Y^(1-2c) / (2c-1): expected contribution of points (or lattice vectors)
// beyond volume Y, exact for the Poisson process and for Siegel-averaged lattices.
double tail_mean(double c, double horizon);

struct VarianceSeries {
  double value = 0.0;
  long shells = 0;          // max(d1, d2) summed up to this
  long zeta_terms = 0;
  double zeta_n = 0.0;
  double error_bound = 0.0; // certified bound on |value - exact|
};

// Exact finite-n variance
//   2 delta^(1-4c) / (zeta(n)(4c-1)) * sum_{d1,d2>=1} min^(n(2c-1)) max^(-2cn).
// The shell max(d1,d2) = D is at most 3 D^(1-n), so the discarded tail past
// shell M is below 3 M^(2-n)/(n-2); zeta(n) is summed to M' with remainder
// M'^(1-n)/(n-1). Requires n >= 3.
VarianceSeries variance_exact_series(const FiniteNParams& p);
double variance_exact(const FiniteNParams& p);

// k-th moment of T(c, delta) as a sum over set partitions of {1..k}.
double poisson_moment(int k, double c, double delta);
DeltaScaled poisson_moment_exact(int k, const Rational& c, const Rational& delta);

// E prod_j T(gamma_j, delta).
double poisson_mixed_moment(std::span<const double> gammas, double delta);
DeltaScaled poisson_mixed_moment_exact(std::span<const Rational> gammas, const Rational& delta);

// Same expectation for points restricted to the window (delta, horizon]: each
// block integral becomes (delta^(1-2B) - horizon^(1-2B)) / (2B-1). This is the
// exact reference for simulations that stop at a finite horizon.
double poisson_mixed_moment_window(std::span<const double> gammas, double delta, double horizon);
double poisson_moment_window(int k, double c, double delta, double horizon);

// Large-n limit of the k-th moment as a sum over compositions of k.
double limit_moment(int k, double c, double delta);
DeltaScaled limit_moment_exact(int k, const Rational& c, const Rational& delta);

// Large-n limit of the joint moment: product of means plus the sum over the
// signed class X_kappa. Requires kappa >= 2 and nondecreasing gammas.
double limit_mixed_moment(std::span<const double> gammas, double delta);
DeltaScaled limit_mixed_moment_exact(std::span<const Rational> gammas, const Rational& delta);

struct MgfRatio {
  double ratio = 0.0;  // E T^(k+1) / ((k+1) E T^k)
  double bound = 0.0;  // (2/(k+1)) (delta^(1-2c)/(2(2c-1)) + k delta^(-2c))
};
MgfRatio mgf_ratio_bound(int k, double c, double delta);

}  // namespace epstein
