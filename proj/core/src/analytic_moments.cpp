#include "epstein/analytic_moments.hpp"

#include "epstein/combinatorics.hpp"
#include "epstein/errors.hpp"

#include <cmath>
#include <string>

namespace epstein {

namespace {

void require_exponent(double c, const char* what) {
  if (!(c > 0.5) || !std::isfinite(c)) throw DomainError(std::string(what) + ": exponent must exceed 1/2");
}
void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError(std::string(what) + " must be positive and finite");
}
void require_exponent(const Rational& c, const char* what) {
  if (!(c * 2 > 1)) throw DomainError(std::string(what) + ": exponent must exceed 1/2");
}
void require_positive(const Rational& x, const char* what) {
  if (!(x > 0)) throw DomainError(std::string(what) + " must be positive");
}

// delta^e, routed through log space for large |e|.
double delta_pow(double delta, double e) {
  if (std::abs(e) > 64.0) return std::exp(e * std::log(delta));
  return std::pow(delta, e);
}

template <class T>
void require_gammas(std::span<const T> gammas, bool sorted, int min_len, int max_len, const char* what) {
  const int kappa = static_cast<int>(gammas.size());
  if (kappa < min_len || kappa > max_len)
    throw DomainError(std::string(what) + ": length " + std::to_string(kappa) + " outside [" + std::to_string(min_len) +
                      ", " + std::to_string(max_len) + "]");
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    require_exponent(gammas[i], what);
    if (sorted && i > 0 && gammas[i] < gammas[i - 1]) throw DomainError(std::string(what) + ": exponents must be nondecreasing");
  }
}

// sum_{P in P(kappa)} 2^(kappa-#P) pow_m(#P) prod_B 1/(2 B_gamma - 1).
template <class T, class PowM>
T partition_sum(std::span<const T> gammas, PowM pow_m) {
  const int kappa = static_cast<int>(gammas.size());
  T total = 0;
  std::vector<T> block_sum(static_cast<std::size_t>(kappa));
  for_each_set_partition(kappa, [&](std::span<const std::uint8_t> labels, int blocks) {
    for (int b = 0; b < blocks; ++b) block_sum[static_cast<std::size_t>(b)] = 0;
    for (int j = 0; j < kappa; ++j) block_sum[labels[static_cast<std::size_t>(j)]] += gammas[static_cast<std::size_t>(j)];
    T term = pow_m(blocks);
    for (int b = 0; b < blocks; ++b) term /= (2 * block_sum[static_cast<std::size_t>(b)] - 1);
    for (int s = 0; s < kappa - blocks; ++s) term *= 2;
    total += term;
  });
  return total;
}

// sum over compositions (k_1..k_m) of k of 2^(k-m) * placements * pow_m(m) * prod 1/(2 k_i c - 1).
template <class T, class PowM>
T composition_sum(int k, const T& c, PowM pow_m) {
  T total = 0;
  for (const auto& comp : enumerate_compositions(k)) {
    T term = pow_m(comp.m());
    term *= T(static_cast<long long>(ordered_block_placements(comp)));
    for (int s = 0; s < k - comp.m(); ++s) term *= 2;
    for (int part : comp.parts) term /= (2 * c * part - 1);
    total += term;
  }
  return total;
}

// sum over D in X_kappa of pow_m(m) prod_i 1/(2 Gamma_i(D) - 1).
template <class T, class PowM>
T signed_class_sum(std::span<const T> gammas, PowM pow_m) {
  const int kappa = static_cast<int>(gammas.size());
  T total = 0;
  for (const auto& comp : enumerate_compositions(kappa)) {
    if (comp.m() > kappa - 1) continue;
    for (const auto& d : enumerate_X(comp)) {
      T term = pow_m(d.rows());
      for (int i = 0; i < d.rows(); ++i) {
        T gamma_row = 0;
        for (int col : d.row_support(i)) gamma_row += gammas[static_cast<std::size_t>(col - 1)];
        term /= (2 * gamma_row - 1);
      }
      total += term;
    }
  }
  return total;
}

template <class T>
T sum_of(std::span<const T> v) {
  T s = 0;
  for (const auto& x : v) s += x;
  return s;
}

}  // namespace

void MomentParams::validate() const {
  require_exponent(c, "MomentParams.c");
  require_positive(delta, "MomentParams.delta");
  if (k < 1) throw DomainError("MomentParams.k must be >= 1");
}

void FiniteNParams::validate() const {
  if (n < 2) throw DomainError("FiniteNParams.n must be >= 2");
  require_exponent(c, "FiniteNParams.c");
  require_positive(delta, "FiniteNParams.delta");
  require_positive(tol, "FiniteNParams.tol");
  if (series_cut < 1) throw DomainError("FiniteNParams.series_cut must be positive");
}

double DeltaScaled::to_double() const {
  return static_cast<double>(coefficient) *
         std::exp(static_cast<double>(delta_exponent) * std::log(static_cast<double>(delta)));
}

double mean_truncated(double c, double delta) {
  require_exponent(c, "mean_truncated");
  require_positive(delta, "mean_truncated: delta");
  return delta_pow(delta, 1.0 - 2.0 * c) / (2.0 * c - 1.0);
}

double variance_limit(double c, double delta) {
  require_exponent(c, "variance_limit");
  require_positive(delta, "variance_limit: delta");
  return 2.0 * delta_pow(delta, 1.0 - 4.0 * c) / (4.0 * c - 1.0);
}

double tail_mean(double c, double horizon) {
  require_exponent(c, "tail_mean");
  require_positive(horizon, "tail_mean: horizon");
  return delta_pow(horizon, 1.0 - 2.0 * c) / (2.0 * c - 1.0);
}

VarianceSeries variance_exact_series(const FiniteNParams& p) {
  p.validate();
  if (p.n < 3) throw DomainError("variance_exact: the double series diverges for n < 3");
  const double n = p.n;
  const double a = n * (2.0 * p.c - 1.0);
  const double upper_prefactor = 2.0 * delta_pow(p.delta, 1.0 - 4.0 * p.c) / (4.0 * p.c - 1.0);

  // Shell cut M: upper_prefactor * 3 M^(2-n)/(n-2) <= tol/2.
  const double shells_needed = std::pow(6.0 * upper_prefactor / ((n - 2.0) * p.tol), 1.0 / (n - 2.0));
  if (!(shells_needed < static_cast<double>(p.series_cut)))
    throw DomainError("variance_exact: tolerance needs " + std::to_string(shells_needed) + " shells, above series_cut");
  const long shells = std::max(1L, static_cast<long>(std::ceil(shells_needed)));

  double sum = 0.0;
  double log_inner = -INFINITY;  // log sum_{d<D} d^a
  for (long d_max = 1; d_max <= shells; ++d_max) {
    const double log_d = std::log(static_cast<double>(d_max));
    double shell = std::exp(-n * log_d);
    if (d_max > 1) shell += 2.0 * std::exp(log_inner - 2.0 * p.c * n * log_d);
    sum += shell;
    const double add = a * log_d;
    log_inner = log_inner == -INFINITY ? add : std::max(log_inner, add) + std::log1p(std::exp(-std::abs(log_inner - add)));
  }
  const double tail = 3.0 * std::pow(static_cast<double>(shells), 2.0 - n) / (n - 2.0);

  // zeta(n): partial sum plus the midpoint of the integral remainder bracket.
  const double s_bound = 1.0 + 3.0 * (std::pow(2.0, 1.0 - n) + std::pow(2.0, 2.0 - n) / (n - 2.0));
  const double v_bound = upper_prefactor * s_bound;
  const double zeta_needed = std::pow(2.0 * v_bound / ((n - 1.0) * p.tol), 1.0 / (n - 1.0));
  if (!(zeta_needed < static_cast<double>(p.series_cut)))
    throw DomainError("variance_exact: zeta(n) summation exceeds series_cut");
  const long zeta_terms = std::max(1L, static_cast<long>(std::ceil(zeta_needed)));
  double zeta = 0.0;
  for (long j = zeta_terms; j >= 1; --j) zeta += std::exp(-n * std::log(static_cast<double>(j)));
  const double rem_hi = std::pow(static_cast<double>(zeta_terms), 1.0 - n) / (n - 1.0);
  const double rem_lo = std::pow(static_cast<double>(zeta_terms + 1), 1.0 - n) / (n - 1.0);
  zeta += 0.5 * (rem_hi + rem_lo);
  const double zeta_err = 0.5 * (rem_hi - rem_lo);

  VarianceSeries out;
  out.shells = shells;
  out.zeta_terms = zeta_terms;
  out.zeta_n = zeta;
  out.value = upper_prefactor / zeta * sum;
  out.error_bound = upper_prefactor / zeta * tail + out.value * zeta_err / zeta;
  return out;
}

double variance_exact(const FiniteNParams& p) { return variance_exact_series(p).value; }

double poisson_moment(int k, double c, double delta) {
  MomentParams{c, delta, k}.validate();
  if (k > kMaxPartitionSize) throw DomainError("poisson_moment: k above the partition enumeration cap");
  std::vector<double> gammas(static_cast<std::size_t>(k), c);
  const double total = 2.0 * k * c;
  return partition_sum<double>(gammas, [&](int m) { return delta_pow(delta, m - total); });
}

DeltaScaled poisson_moment_exact(int k, const Rational& c, const Rational& delta) {
  if (k < 1 || k > kMaxPartitionSize) throw DomainError("poisson_moment_exact: k out of range");
  require_exponent(c, "poisson_moment_exact");
  require_positive(delta, "poisson_moment_exact: delta");
  std::vector<Rational> gammas(static_cast<std::size_t>(k), c);
  Rational coef = partition_sum<Rational>(gammas, [&](int m) { return rational_pow(delta, m); });
  return {coef, delta, -2 * k * c};
}

double poisson_mixed_moment(std::span<const double> gammas, double delta) {
  require_gammas(gammas, true, 1, kMaxPartitionSize, "poisson_mixed_moment");
  require_positive(delta, "poisson_mixed_moment: delta");
  const double total = 2.0 * sum_of(gammas);
  return partition_sum<double>(gammas, [&](int m) { return delta_pow(delta, m - total); });
}

DeltaScaled poisson_mixed_moment_exact(std::span<const Rational> gammas, const Rational& delta) {
  require_gammas(gammas, true, 1, kMaxPartitionSize, "poisson_mixed_moment_exact");
  require_positive(delta, "poisson_mixed_moment_exact: delta");
  Rational coef = partition_sum<Rational>(gammas, [&](int m) { return rational_pow(delta, m); });
  return {coef, delta, -2 * sum_of(gammas)};
}

double poisson_mixed_moment_window(std::span<const double> gammas, double delta, double horizon) {
  require_gammas(gammas, false, 1, kMaxPartitionSize, "poisson_mixed_moment_window");
  require_positive(delta, "poisson_mixed_moment_window: delta");
  if (!(horizon > delta)) throw DomainError("poisson_mixed_moment_window: horizon must exceed delta");
  const int kappa = static_cast<int>(gammas.size());
  double total = 0.0;
  std::vector<double> block_sum(static_cast<std::size_t>(kappa));
  for_each_set_partition(kappa, [&](std::span<const std::uint8_t> labels, int blocks) {
    std::fill(block_sum.begin(), block_sum.end(), 0.0);
    for (int j = 0; j < kappa; ++j) block_sum[labels[static_cast<std::size_t>(j)]] += gammas[static_cast<std::size_t>(j)];
    double term = std::ldexp(1.0, kappa - blocks);
    for (int b = 0; b < blocks; ++b) {
      const double e = 1.0 - 2.0 * block_sum[static_cast<std::size_t>(b)];
      term *= (delta_pow(delta, e) - delta_pow(horizon, e)) / (-e);
    }
    total += term;
  });
  return total;
}

double poisson_moment_window(int k, double c, double delta, double horizon) {
  MomentParams{c, delta, k}.validate();
  std::vector<double> gammas(static_cast<std::size_t>(k), c);
  return poisson_mixed_moment_window(gammas, delta, horizon);
}

double limit_moment(int k, double c, double delta) {
  MomentParams{c, delta, k}.validate();
  if (k > kMaxCompositionSize) throw DomainError("limit_moment: k above the composition enumeration cap");
  const double total = 2.0 * k * c;
  return composition_sum<double>(k, c, [&](int m) { return delta_pow(delta, m - total); });
}

DeltaScaled limit_moment_exact(int k, const Rational& c, const Rational& delta) {
  if (k < 1 || k > kMaxCompositionSize) throw DomainError("limit_moment_exact: k out of range");
  require_exponent(c, "limit_moment_exact");
  require_positive(delta, "limit_moment_exact: delta");
  Rational coef = composition_sum<Rational>(k, c, [&](int m) { return rational_pow(delta, m); });
  return {coef, delta, -2 * k * c};
}

double limit_mixed_moment(std::span<const double> gammas, double delta) {
  require_gammas(gammas, true, 2, kMaxMatrixSize, "limit_mixed_moment");
  require_positive(delta, "limit_mixed_moment: delta");
  double means = 1.0;
  for (double g : gammas) means *= mean_truncated(g, delta);
  const double total = 2.0 * sum_of(gammas);
  return means + signed_class_sum<double>(gammas, [&](int m) { return delta_pow(delta, m - total); });
}

DeltaScaled limit_mixed_moment_exact(std::span<const Rational> gammas, const Rational& delta) {
  require_gammas(gammas, true, 2, kMaxMatrixSize, "limit_mixed_moment_exact");
  require_positive(delta, "limit_mixed_moment_exact: delta");
  // prod_j delta^(1-2 gamma_j)/(2 gamma_j - 1) = delta^kappa * prod 1/(2 gamma_j - 1) * delta^(-2 sum gamma).
  Rational means = rational_pow(delta, static_cast<int>(gammas.size()));
  for (const auto& g : gammas) means /= (2 * g - 1);
  Rational coef = means + signed_class_sum<Rational>(gammas, [&](int m) { return rational_pow(delta, m); });
  return {coef, delta, -2 * sum_of(gammas)};
}

MgfRatio mgf_ratio_bound(int k, double c, double delta) {
  MomentParams{c, delta, k}.validate();
  if (k + 1 > kMaxPartitionSize) throw DomainError("mgf_ratio_bound: k+1 above the partition enumeration cap");
  MgfRatio r;
  r.ratio = poisson_moment(k + 1, c, delta) / ((k + 1) * poisson_moment(k, c, delta));
  r.bound = 2.0 / (k + 1) * (delta_pow(delta, 1.0 - 2.0 * c) / (2.0 * (2.0 * c - 1.0)) + k * delta_pow(delta, -2.0 * c));
  return r;
}

}  // namespace epstein
