#pragma once

// Volume of the unit n-ball, V_n = pi^(n/2) / Gamma(n/2 + 1), and the radius
// R_n(delta) of the ball of volume delta. Logs throughout: V_n underflows a
// double long before the dimensions of interest stop.

namespace epstein {

double unit_ball_volume_log(int n);
// log omega_n = log(n V_n), the surface area of the unit sphere in R^n.
double unit_sphere_area_log(int n);
// (delta / V_n)^(1/n).
double truncation_radius(int n, double delta);

}  // namespace epstein
