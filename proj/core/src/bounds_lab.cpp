#include "epstein/bounds_lab.hpp"

#include "epstein/ball.hpp"
#include "epstein/errors.hpp"
#include "epstein/rng.hpp"
#include "integer_det.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace epstein {

namespace {

using Gk = boost::math::quadrature::gauss_kronrod<double, 31>;

double logaddexp(double a, double b) {
  if (a == -INFINITY) return b;
  if (b == -INFINITY) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

struct Integrand {
  int n;
  double c;
  double log_delta;
  int l1, l2, l3, l4;
  double log_wn;  // log int_0^pi sin^(n-2)

  // log g(u) = -2c log(u + delta), from log u.
  double log_g(double log_u) const { return -2.0 * c * logaddexp(log_u, log_delta); }

  // E over the angle of g(u+)^l3 g(u-)^l4 for volumes exp(lu1), exp(lu2).
  double angular(double lu1, double lu2, double tol, double& err) const {
    const double la = lu1 / n, lb = lu2 / n;
    const double m = std::max(la, lb);
    const double alpha = std::exp(la - m), beta = std::exp(lb - m);
    const double sq = alpha * alpha + beta * beta, cross = 2.0 * alpha * beta;
    auto f = [&](double phi) {
      const double cphi = std::cos(phi), sphi = std::sin(phi);
      if (sphi <= 0.0 && n > 2) return 0.0;
      double lw = -log_wn;
      if (n > 2) lw += (n - 2) * std::log(sphi);
      const double sp = std::max(sq + cross * cphi, 0.0);
      double v = lw + l3 * log_g(0.5 * n * (2.0 * m + std::log(sp)));
      if (l4 > 0) {
        const double sm = std::max(sq - cross * cphi, 0.0);
        v += l4 * log_g(0.5 * n * (2.0 * m + std::log(sm)));
      }
      return std::exp(v);
    };
    double e = 0.0;
    const double r = Gk::integrate(f, 0.0, std::numbers::pi, 15, tol, &e);
    err = std::max(err, e / std::max(std::abs(r), 1e-300));
    return r;
  }
};

QuadResult sym_integral(const SymIntegralSpec& spec, const QuadConfig& cfg, bool four) {
  spec.validate();
  if (static_cast<int>(spec.exponents.size()) != (four ? 4 : 3))
    throw DomainError(std::string("sym_integral: expected ") + (four ? "4" : "3") + " exponents");
  if (!(cfg.rel_tol > 0.0)) throw DomainError("QuadConfig.rel_tol must be positive");
  const int n = spec.n;
  Integrand in{n,
               spec.c,
               std::log(spec.delta),
               spec.exponents[0],
               spec.exponents[1],
               spec.exponents[2],
               four ? spec.exponents[3] : 0,
               0.5 * std::log(std::numbers::pi) + std::lgamma(0.5 * (n - 1)) - std::lgamma(0.5 * n)};
  if (n == 2) in.log_wn = std::log(std::numbers::pi);

  // t = log(u/delta): the integrand decays like e^t below and at least like
  // e^(-(2c l_i - 1) t) above.
  const double lo = -cfg.log_span;
  const double hi1 = cfg.log_span / (2.0 * spec.c * in.l1 - 1.0) + 1.0;
  const double hi2 = cfg.log_span / (2.0 * spec.c * in.l2 - 1.0) + 1.0;
  double worst = 0.0;
  auto middle = [&](double t1) {
    const double lu1 = in.log_delta + t1;
    const double w1 = in.l1 * in.log_g(lu1) + lu1;
    auto inner = [&](double t2) {
      const double lu2 = in.log_delta + t2;
      const double w2 = in.l2 * in.log_g(lu2) + lu2;
      return std::exp(w1 + w2) * in.angular(lu1, lu2, cfg.rel_tol * 0.1, worst);
    };
    double e = 0.0;
    const double r = Gk::integrate(inner, lo, hi2, cfg.max_depth, cfg.rel_tol * 0.3, &e);
    worst = std::max(worst, e / std::max(std::abs(r), 1e-300));
    return r;
  };
  double err = 0.0;
  QuadResult out;
  out.value = Gk::integrate(middle, lo, hi1, cfg.max_depth, cfg.rel_tol, &err);
  out.error_estimate = err;
  const double achieved = std::max(err / std::max(std::abs(out.value), 1e-300), 0.0);
  if (!std::isfinite(out.value) || !(out.value > 0.0) || achieved > 100.0 * cfg.rel_tol)
    throw ResourceError("sym_integral: quadrature did not converge (achieved relative error " +
                        std::to_string(achieved) + ")");
  return out;
}

// Uniform direction in R^n scaled to the radius of volume u.
void radial_point(Rng& rng, int n, double log_u, double log_vn, std::vector<double>& x) {
  double norm2 = 0.0;
  for (int i = 0; i < n; ++i) {
    x[static_cast<std::size_t>(i)] = rng.normal();
    norm2 += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
  }
  const double r = std::exp((log_u - log_vn) / n);
  const double scale = r / std::sqrt(norm2);
  for (double& v : x) v *= scale;
}

double log_volume_of(const std::vector<double>& x, double log_vn) {
  double s = 0.0;
  for (double v : x) s += v * v;
  if (s == 0.0) return -INFINITY;
  return log_vn + 0.5 * static_cast<double>(x.size()) * std::log(s);
}

}  // namespace

void SymIntegralSpec::validate() const {
  if (n < 2) throw DomainError("SymIntegralSpec.n must be >= 2");
  if (!(c > 0.5)) throw DomainError("SymIntegralSpec.c must exceed 1/2");
  if (!(delta > 0.0)) throw DomainError("SymIntegralSpec.delta must be positive");
  if (exponents.size() != 3 && exponents.size() != 4) throw DomainError("SymIntegralSpec: 3 or 4 exponents");
  for (int e : exponents)
    if (e < 1) throw DomainError("SymIntegralSpec: exponents must be positive");
}

double f_star(double norm_x, int n, double c, double delta) {
  if (!(norm_x >= 0.0)) throw DomainError("f_star: norm must be nonnegative");
  if (!(c > 0.5) || !(delta > 0.0) || n < 1) throw DomainError("f_star: parameters out of domain");
  // R_n(delta)^n = delta / V_n.
  const double log_rn = std::log(delta) - unit_ball_volume_log(n);
  const double log_xn = norm_x == 0.0 ? -INFINITY : n * std::log(norm_x);
  return std::exp(-2.0 * c * logaddexp(log_xn, log_rn));
}

QuadResult sym_integral_4(const SymIntegralSpec& spec, const QuadConfig& cfg) { return sym_integral(spec, cfg, true); }
QuadResult sym_integral_3(const SymIntegralSpec& spec, const QuadConfig& cfg) { return sym_integral(spec, cfg, false); }

McEstimate mc_sym_integral(const SymIntegralSpec& spec, std::uint64_t samples, std::uint64_t seed) {
  spec.validate();
  if (samples < 2) throw DomainError("mc_sym_integral: need at least 2 samples");
  const int n = spec.n;
  const double c = spec.c, delta = spec.delta;
  const int l1 = spec.exponents[0], l2 = spec.exponents[1], l3 = spec.exponents[2];
  const int l4 = spec.exponents.size() == 4 ? spec.exponents[3] : 0;
  const double log_vn = unit_ball_volume_log(n);
  const double log_delta = std::log(delta);
  // Proposal density (2c-1) delta^(2c-1) (u + delta)^(-2c) on u > 0.
  const double log_norm = std::log(2.0 * c - 1.0) + (2.0 * c - 1.0) * log_delta;
  auto log_g = [&](double lu) { return -2.0 * c * logaddexp(lu, log_delta); };
  Rng rng(seed);
  std::vector<double> x1(static_cast<std::size_t>(n)), x2(static_cast<std::size_t>(n)), s(static_cast<std::size_t>(n));
  double mean = 0.0, m2 = 0.0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    const double u1 = delta * (std::pow(rng.uniform_open0(), -1.0 / (2.0 * c - 1.0)) - 1.0);
    const double u2 = delta * (std::pow(rng.uniform_open0(), -1.0 / (2.0 * c - 1.0)) - 1.0);
    const double lu1 = u1 > 0 ? std::log(u1) : -INFINITY, lu2 = u2 > 0 ? std::log(u2) : -INFINITY;
    radial_point(rng, n, lu1, log_vn, x1);
    radial_point(rng, n, lu2, log_vn, x2);
    double lw = (l1 - 1) * log_g(lu1) + (l2 - 1) * log_g(lu2) - 2.0 * log_norm;
    for (int j = 0; j < n; ++j) s[static_cast<std::size_t>(j)] = x1[static_cast<std::size_t>(j)] + x2[static_cast<std::size_t>(j)];
    lw += l3 * log_g(log_volume_of(s, log_vn));
    if (l4 > 0) {
      for (int j = 0; j < n; ++j) s[static_cast<std::size_t>(j)] = x1[static_cast<std::size_t>(j)] - x2[static_cast<std::size_t>(j)];
      lw += l4 * log_g(log_volume_of(s, log_vn));
    }
    const double w = std::exp(lw);
    const double d = w - mean;
    mean += d / static_cast<double>(i + 1);
    m2 += d * (w - mean);
  }
  McEstimate est;
  est.mean = mean;
  est.samples = samples;
  est.std_error = std::sqrt(m2 / static_cast<double>(samples - 1) / static_cast<double>(samples));
  return est;
}

IestBound iest_bound(const AdmissibleMatrix& d, int n, double c, double delta) {
  if (n < 1 || !(c > 0.5) || !(delta > 0.0)) throw DomainError("iest_bound: parameters out of domain");
  const int m = d.rows(), k = d.cols();
  if (m > k) throw DomainError("iest_bound: more rows than columns");
  BigInt best = 0;
  std::vector<int> cols(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) cols[static_cast<std::size_t>(i)] = i;
  while (true) {
    std::vector<std::int64_t> minor(static_cast<std::size_t>(m * m));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) minor[static_cast<std::size_t>(i * m + j)] = d.at(i, cols[static_cast<std::size_t>(j)]);
    BigInt det = abs(detail::bareiss_determinant(m, minor));
    if (det > best) best = det;
    int pos = m - 1;
    while (pos >= 0 && cols[static_cast<std::size_t>(pos)] == k - m + pos) --pos;
    if (pos < 0) break;
    ++cols[static_cast<std::size_t>(pos)];
    for (int j = pos + 1; j < m; ++j) cols[static_cast<std::size_t>(j)] = cols[static_cast<std::size_t>(j - 1)] + 1;
  }
  if (best == 0) throw DomainError("iest_bound: every m x m minor is singular");
  IestBound out;
  out.minor_max = Rational(best) / rational_pow(Rational(d.q()), m);
  out.log_bound = -n * std::log(static_cast<double>(out.minor_max)) + (m - 2.0 * k * c) * std::log(delta) -
                  m * std::log(2.0 * c - 1.0);
  out.bound = std::exp(out.log_bound);
  return out;
}

double signed_class_integral(const AdmissibleMatrix& d, double c, double delta) {
  if (!d.in_signed_class() && !(d.in_bell_class() && d.rows() == d.cols()))
    throw DomainError("signed_class_integral: matrix must have one nonzero per column");
  double log_v = (d.rows() - 2.0 * d.cols() * c) * std::log(delta);
  for (int w : d.row_weights()) log_v -= std::log(2.0 * w * c - 1.0);
  return std::exp(log_v);
}

SymmetrizationCheck mc_symmetrization_check(const SymIntegralSpec& spec, const std::vector<std::vector<double>>& shifts,
                                            const std::vector<int>& signs, std::uint64_t trials, std::uint64_t seed) {
  spec.validate();
  const int n = spec.n;
  if (n > 3) throw DomainError("mc_symmetrization_check: n must be 2 or 3");
  int l = 0;
  for (int e : spec.exponents) l += e;
  const std::size_t nshift = static_cast<std::size_t>(l - 2);
  if (shifts.size() != nshift || signs.size() != nshift)
    throw DomainError("mc_symmetrization_check: need l-2 shifts and signs");
  for (const auto& y : shifts)
    if (static_cast<int>(y.size()) != n) throw DomainError("mc_symmetrization_check: shift dimension mismatch");
  for (int s : signs)
    if (s != 1 && s != -1) throw DomainError("mc_symmetrization_check: signs must be +-1");
  if (trials < 2) throw DomainError("mc_symmetrization_check: need at least 2 trials");

  const double c = spec.c, delta = spec.delta;
  const int l1 = spec.exponents[0], l2 = spec.exponents[1], l3 = spec.exponents[2];
  const int l4 = spec.exponents.size() == 4 ? spec.exponents[3] : 0;
  const double log_vn = unit_ball_volume_log(n);
  const double log_delta = std::log(delta);
  // V_n^(-2c) f(x) = u^(-2c) 1(u > delta), u = V_n |x|^n.
  auto log_h = [&](double lu) { return lu > log_delta ? -2.0 * c * lu : -INFINITY; };
  // Pareto proposal (2c-1) delta^(2c-1) u^(-2c) on u > delta absorbs f(x1), f(x2).
  const double log_norm = std::log(2.0 * c - 1.0) + (2.0 * c - 1.0) * log_delta;

  // Which base vector each shifted factor is attached to: 1 = x1, 2 = x2, 3 = x1+x2, 4 = x1-x2.
  std::vector<int> target;
  for (int i = 0; i < l1 - 1; ++i) target.push_back(1);
  for (int i = 0; i < l2 - 1; ++i) target.push_back(2);
  for (int i = 0; i < l3; ++i) target.push_back(3);
  for (int i = 0; i < l4; ++i) target.push_back(4);

  Rng rng(seed);
  std::vector<double> x1(static_cast<std::size_t>(n)), x2(static_cast<std::size_t>(n)), z(static_cast<std::size_t>(n));
  double mean = 0.0, m2 = 0.0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const double lu1 = log_delta - std::log(rng.uniform_open0()) / (2.0 * c - 1.0);
    const double lu2 = log_delta - std::log(rng.uniform_open0()) / (2.0 * c - 1.0);
    radial_point(rng, n, lu1, log_vn, x1);
    radial_point(rng, n, lu2, log_vn, x2);
    double lw = -2.0 * log_norm;
    for (std::size_t i = 0; i < nshift && lw > -INFINITY; ++i) {
      for (int j = 0; j < n; ++j) {
        const auto jj = static_cast<std::size_t>(j);
        double base = 0.0;
        switch (target[i]) {
          case 1: base = x1[jj]; break;
          case 2: base = x2[jj]; break;
          case 3: base = x1[jj] + x2[jj]; break;
          default: base = x1[jj] - x2[jj]; break;
        }
        z[jj] = signs[i] * base + shifts[i][jj];
      }
      lw += log_h(log_volume_of(z, log_vn));
    }
    const double w = lw == -INFINITY ? 0.0 : std::exp(lw);
    const double d = w - mean;
    mean += d / static_cast<double>(t + 1);
    m2 += d * (w - mean);
  }
  SymmetrizationCheck out;
  out.lhs_estimate = mean;
  out.lhs_stderr = std::sqrt(m2 / static_cast<double>(trials - 1) / static_cast<double>(trials));
  out.rhs_value = (l4 > 0 ? sym_integral_4(spec) : sym_integral_3(spec)).value;
  out.pass = out.lhs_estimate <= out.rhs_value + 3.0 * out.lhs_stderr;
  return out;
}

double sym_envelope(int n) { return std::sqrt(static_cast<double>(n)) * std::pow(0.8, 0.5 * n); }

EnvelopeFit fit_envelope(const std::vector<int>& ns, const std::vector<double>& values) {
  if (ns.size() != values.size() || ns.size() < 2) throw DomainError("fit_envelope: need matching grids of length >= 2");
  EnvelopeFit fit;
  const std::size_t half = (ns.size() + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) fit.constant = std::max(fit.constant, values[i] / sym_envelope(ns[i]));
  fit.monotone = true;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    fit.worst_ratio = std::max(fit.worst_ratio, values[i] / (fit.constant * sym_envelope(ns[i])));
    if (i > 0 && !(values[i] < values[i - 1])) fit.monotone = false;
  }
  fit.under_envelope = fit.worst_ratio <= 1.0 + 1e-12;
  fit.decay_per_step = std::pow(values.back() / values.front(), 1.0 / static_cast<double>(ns.size() - 1));
  return fit;
}

}  // namespace epstein
