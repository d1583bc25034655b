#pragma once

// The normalized Epstein zeta function eps_n(L, cn) = 2 sum_j V_j^(-2c), its
// truncation at volume delta, and log E_n(L, cn) = 2c log V_n + log eps_n,
// evaluated on a certified volume spectrum.

#include "epstein/ball.hpp"
#include "epstein/lattice_model.hpp"

#include <optional>
#include <span>
#include <vector>

namespace epstein {

struct ZetaValue {
  double value = 0.0;
  double tail_estimate = 0.0;  // tail_mean(c, cutoff_volume); an estimate, not a bound
  double c = 0.0;
  std::optional<double> delta;
  int n = 0;
  double cutoff_volume = 0.0;
};

ZetaValue epsilon_value(const VolumeSpectrum& spec, double c);
ZetaValue epsilon_truncated(const VolumeSpectrum& spec, double c, double delta);
double epstein_unnormalized_log(const VolumeSpectrum& spec, double c);
std::vector<ZetaValue> epsilon_curve(const VolumeSpectrum& spec, std::span<const double> c_grid,
                                     std::optional<double> delta = std::nullopt);

}  // namespace epstein
