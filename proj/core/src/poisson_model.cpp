#include "epstein/poisson_model.hpp"

#include "epstein/analytic_moments.hpp"
#include "epstein/errors.hpp"
#include "epstein/rng.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace epstein {

namespace {

void require_c(double c) {
  if (!(c > 0.5) || !std::isfinite(c)) throw DomainError("c must exceed 1/2 (the series diverges otherwise)");
}

void require_grid(std::span<const double> grid) {
  if (grid.empty()) throw DomainError("c grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    require_c(grid[i]);
    if (i > 0 && !(grid[i] > grid[i - 1])) throw DomainError("c grid must be strictly increasing");
  }
}

// x^(-2c), with a multiplication-only path for c = 1.
inline double power_term(double x, double c) {
  if (c == 1.0) return 1.0 / (x * x);
  return std::exp(-2.0 * c * std::log(x));
}

}  // namespace

PointConfiguration sample_process(double horizon, std::uint64_t seed, double scale) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("sample_process: horizon must be positive");
  if (!(scale > 0.0)) throw DomainError("sample_process: scale must be positive");
  PointConfiguration cfg;
  cfg.horizon = horizon;
  cfg.seed = seed;
  Rng rng(seed);
  const double mean_gap = scale / kPoissonIntensity;
  cfg.points.reserve(static_cast<std::size_t>(horizon / mean_gap * 1.1) + 16);
  double t = rng.exponential(mean_gap);
  while (t <= horizon) {
    cfg.points.push_back(t);
    t += rng.exponential(mean_gap);
  }
  return cfg;
}

FunctionalValue t_truncated(const PointConfiguration& cfg, double c, double delta) {
  require_c(c);
  if (!(delta >= 0.0)) throw DomainError("t_truncated: delta must be nonnegative");
  if (delta > cfg.horizon) throw DomainError("t_truncated: delta exceeds the sampled horizon");
  auto first = std::upper_bound(cfg.points.begin(), cfg.points.end(), delta);
  // Small terms first.
  double sum = 0.0;
  for (auto it = cfg.points.end(); it != first;) sum += power_term(*--it, c);
  return {2.0 * sum, tail_mean(c, cfg.horizon), cfg.horizon};
}

FunctionalValue t_value(const PointConfiguration& cfg, double c) {
  if (cfg.points.empty() && !(cfg.horizon > 0.0)) throw DomainError("t_value: empty configuration without horizon");
  return t_truncated(cfg, c, 0.0);
}

std::vector<FunctionalValue> t_curve_truncated(const PointConfiguration& cfg, std::span<const double> c_grid,
                                               double delta) {
  require_grid(c_grid);
  std::vector<FunctionalValue> out;
  out.reserve(c_grid.size());
  for (double c : c_grid) out.push_back(t_truncated(cfg, c, delta));
  return out;
}

std::vector<FunctionalValue> t_curve(const PointConfiguration& cfg, std::span<const double> c_grid) {
  return t_curve_truncated(cfg, c_grid, 0.0);
}

double horizon_for_tail(double c_min, double delta, double eta) {
  require_c(c_min);
  if (!(eta > 0.0)) throw DomainError("horizon_for_tail: eta must be positive");
  const double y = std::pow(eta * (2.0 * c_min - 1.0), 1.0 / (1.0 - 2.0 * c_min));
  return std::max(delta, y);
}

void stream_truncated(double horizon, std::uint64_t seed, std::span<const double> c_grid, double delta,
                      std::span<double> out) {
  require_grid(c_grid);
  if (out.size() != c_grid.size()) throw DomainError("stream_truncated: output size mismatch");
  if (!(horizon > 0.0)) throw DomainError("stream_truncated: horizon must be positive");
  if (delta > horizon) throw DomainError("stream_truncated: delta exceeds horizon");
  Rng rng(seed);
  const double mean_gap = 1.0 / kPoissonIntensity;
  std::fill(out.begin(), out.end(), 0.0);
  // Points arrive in increasing order, so terms are added largest first; the
  // compensated sum keeps the result within an ulp of the stored-point path.
  std::vector<double> comp(c_grid.size(), 0.0);
  double t = rng.exponential(mean_gap);
  while (t <= horizon) {
    if (t > delta) {
      for (std::size_t g = 0; g < c_grid.size(); ++g) {
        const double y = power_term(t, c_grid[g]) - comp[g];
        const double s = out[g] + y;
        comp[g] = (s - out[g]) - y;
        out[g] = s;
      }
    }
    t += rng.exponential(mean_gap);
  }
  for (double& v : out) v *= 2.0;
}

}  // namespace epstein
