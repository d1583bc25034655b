#include "epstein/ball.hpp"

#include "epstein/errors.hpp"

#include <cmath>
#include <numbers>

namespace epstein {

double unit_ball_volume_log(int n) {
  if (n < 1) throw DomainError("unit_ball_volume_log: n must be >= 1");
  return 0.5 * n * std::log(std::numbers::pi) - std::lgamma(0.5 * n + 1.0);
}

double unit_sphere_area_log(int n) { return std::log(static_cast<double>(n)) + unit_ball_volume_log(n); }

double truncation_radius(int n, double delta) {
  if (!(delta > 0.0)) throw DomainError("truncation_radius: delta must be positive");
  return std::exp((std::log(delta) - unit_ball_volume_log(n)) / n);
}

}  // namespace epstein
