#include "epstein/zeta_eval.hpp"

#include "epstein/analytic_moments.hpp"
#include "epstein/errors.hpp"

#include <algorithm>
#include <cmath>

namespace epstein {

namespace {

void require_c(double c) {
  if (!(c > 0.5) || !std::isfinite(c)) throw DomainError("zeta_eval: c must exceed 1/2");
}

// 2 sum_{V_j > delta} V_j^(-2c), Kahan-compensated, smallest terms first.
double spectrum_sum(const VolumeSpectrum& spec, double c, double delta) {
  const auto first = std::upper_bound(spec.volumes.begin(), spec.volumes.end(), delta) - spec.volumes.begin();
  double sum = 0.0, comp = 0.0;
  for (auto j = static_cast<std::ptrdiff_t>(spec.log_volumes.size()); j-- > first;) {
    const double y = std::exp(-2.0 * c * spec.log_volumes[static_cast<std::size_t>(j)]) - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return 2.0 * sum;
}

}  // namespace

ZetaValue epsilon_value(const VolumeSpectrum& spec, double c) {
  require_c(c);
  ZetaValue z;
  z.value = spectrum_sum(spec, c, 0.0);
  z.tail_estimate = tail_mean(c, spec.cutoff_volume);
  z.c = c;
  z.n = spec.n;
  z.cutoff_volume = spec.cutoff_volume;
  return z;
}

ZetaValue epsilon_truncated(const VolumeSpectrum& spec, double c, double delta) {
  require_c(c);
  if (!(delta > 0.0)) throw DomainError("epsilon_truncated: delta must be positive");
  if (delta > spec.cutoff_volume) throw DomainError("epsilon_truncated: delta exceeds the spectrum cutoff");
  ZetaValue z = epsilon_value(spec, c);
  z.value = spectrum_sum(spec, c, delta);
  z.delta = delta;
  return z;
}

double epstein_unnormalized_log(const VolumeSpectrum& spec, double c) {
  require_c(c);
  // log(2 sum exp(-2c log V_j)) by log-sum-exp, so huge or tiny V_j are safe.
  if (spec.log_volumes.empty()) return -INFINITY;
  double top = -INFINITY;
  for (double lv : spec.log_volumes) top = std::max(top, -2.0 * c * lv);
  double s = 0.0;
  for (double lv : spec.log_volumes) s += std::exp(-2.0 * c * lv - top);
  return 2.0 * c * unit_ball_volume_log(spec.n) + std::log(2.0) + top + std::log(s);
}

std::vector<ZetaValue> epsilon_curve(const VolumeSpectrum& spec, std::span<const double> c_grid,
                                     std::optional<double> delta) {
  if (c_grid.empty()) throw DomainError("epsilon_curve: empty grid");
  std::vector<ZetaValue> out;
  out.reserve(c_grid.size());
  for (std::size_t i = 0; i < c_grid.size(); ++i) {
    if (i > 0 && !(c_grid[i] > c_grid[i - 1])) throw DomainError("epsilon_curve: grid must be strictly increasing");
    out.push_back(delta ? epsilon_truncated(spec, c_grid[i], *delta) : epsilon_value(spec, c_grid[i]));
  }
  return out;
}

}  // namespace epstein
