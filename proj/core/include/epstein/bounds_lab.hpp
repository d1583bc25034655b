#pragma once

// Spherical symmetrization of the truncated power kernel and the two-vector
// integrals built from it, the minor bound for admissible matrices, and a
// Monte Carlo harness for the rearrangement inequality.

#include "epstein/combinatorics.hpp"
#include "epstein/rational.hpp"

#include <cstdint>
#include <vector>

namespace epstein {

struct SymIntegralSpec {
  int n = 3;
  double c = 1.0;
  double delta = 1.0;
  std::vector<int> exponents;  // (l1, l2, l3, l4) or (l1, l2, l3)
  void validate() const;
};

struct QuadConfig {
  double rel_tol = 1e-7;
  unsigned max_depth = 12;
  // Volume coordinates are integrated in t = log(u / delta) over [-span, span_hi]
  // where the upper end is chosen from the decay rate of each factor.
  double log_span = 40.0;
};

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

// (|x|^n + R_n(delta)^n)^(-2c).
double f_star(double norm_x, int n, double c, double delta);

// V_n^(-2lc) int int f*(x1)^l1 f*(x2)^l2 f*(x1+x2)^l3 f*(x1-x2)^l4 dx1 dx2
// and the three-factor analogue. In volume coordinates u = V_n |x|^n this is
//   int int g(u1)^l1 g(u2)^l2 E_t[g(u+)^l3 g(u-)^l4] du1 du2,
// g(u) = (u + delta)^(-2c), u+- = (a^2 + b^2 +- 2abt)^(n/2), a = u1^(1/n),
// b = u2^(1/n), t = cos of the angle between x1 and x2 with density
// proportional to (1 - t^2)^((n-3)/2). Requires n >= 2.
QuadResult sym_integral_4(const SymIntegralSpec& spec, const QuadConfig& cfg = {});
QuadResult sym_integral_3(const SymIntegralSpec& spec, const QuadConfig& cfg = {});

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
};

// Plain Monte Carlo for the same integrals over (R^n)^2, with x1, x2 drawn
// from the radial law with volume density proportional to g and uniform
// directions. Independent of the angular reduction above.
McEstimate mc_sym_integral(const SymIntegralSpec& spec, std::uint64_t samples, std::uint64_t seed);

struct IestBound {
  Rational minor_max;  // M(D) = q^(-m) max |m x m minor|
  double log_bound = 0.0;
  double bound = 0.0;
};

// M(D)^(-n) delta^(m-2kc) / (2c-1)^m.
IestBound iest_bound(const AdmissibleMatrix& d, int n, double c, double delta);
// For D with one nonzero per column the integral factorizes:
// delta^(m-2kc) prod_i 1/(2 k_i c - 1), at every n.
double signed_class_integral(const AdmissibleMatrix& d, double c, double delta);

struct SymmetrizationCheck {
  double lhs_estimate = 0.0;
  double lhs_stderr = 0.0;
  double rhs_value = 0.0;
  bool pass = false;
};

// Monte Carlo estimate of the shifted product integral with the unsymmetrized
// kernel f(x) = |x|^(-2cn) 1(|x| > R_n(delta)), compared with the symmetrized
// quadrature value. shifts holds l-2 vectors of length n, signs l-2 entries.
// Pass iff lhs <= rhs + 3 stderr.
SymmetrizationCheck mc_symmetrization_check(const SymIntegralSpec& spec, const std::vector<std::vector<double>>& shifts,
                                            const std::vector<int>& signs, std::uint64_t trials, std::uint64_t seed);

struct EnvelopeFit {
  double constant = 0.0;       // K fitted on the first half of the grid
  double worst_ratio = 0.0;    // max over all n of value / (K envelope)
  double decay_per_step = 0.0; // geometric mean of value(n_{i+1}) / value(n_i)
  bool monotone = false;
  bool under_envelope = false;
};

// Envelope sqrt(n) (4/5)^(n/2).
double sym_envelope(int n);
EnvelopeFit fit_envelope(const std::vector<int>& ns, const std::vector<double>& values);

}  // namespace epstein
