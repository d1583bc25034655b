#pragma once

// The intensity-1/2 Poisson process on (0, inf) and the functionals
// T(c) = 2 sum_j T_j^(-2c) and T(c, delta) = 2 sum_{T_j > delta} T_j^(-2c).
// Everything is sampled up to a finite horizon Y and reported with the
// expected mass beyond it, Y^(1-2c)/(2c-1).

#include <cstdint>
#include <span>
#include <vector>

namespace epstein {

struct PointConfiguration {
  std::vector<double> points;  // strictly increasing, all <= horizon
  double horizon = 0.0;
  std::uint64_t seed = 0;
};

struct FunctionalValue {
  double value = 0.0;
  double tail_estimate = 0.0;
  double horizon = 0.0;
};

inline constexpr double kPoissonIntensity = 0.5;

// Gaps are -2 log U (mean 2). `scale` multiplies the mean gap and exists for
// testing only; the model uses scale = 1.
PointConfiguration sample_process(double horizon, std::uint64_t seed, double scale = 1.0);

FunctionalValue t_value(const PointConfiguration& cfg, double c);
FunctionalValue t_truncated(const PointConfiguration& cfg, double c, double delta);
std::vector<FunctionalValue> t_curve(const PointConfiguration& cfg, std::span<const double> c_grid);
std::vector<FunctionalValue> t_curve_truncated(const PointConfiguration& cfg, std::span<const double> c_grid,
                                               double delta);

// Smallest horizon with tail_mean(c_min, Y) <= eta, and at least delta.
double horizon_for_tail(double c_min, double delta, double eta = 1e-4);

// Same values as sample_process followed by t_curve_truncated with the same
// seed, without storing the points. Writes one value per grid entry.
void stream_truncated(double horizon, std::uint64_t seed, std::span<const double> c_grid, double delta,
                      std::span<double> out);

}  // namespace epstein
