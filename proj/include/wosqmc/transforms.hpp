#pragma once

// Maps from uniform variates to uniform points on unit spheres and balls,
// and the ball Green's functions used by the source-term estimators.

#include <span>

#include "wosqmc/point.hpp"

namespace wosqmc {

/// Uniforms consumed per sphere draw (d - 1) and per ball draw (d).
struct SphereMapSpec {
    int dimension = 2;
    int sphere_uniforms() const noexcept { return dimension - 1; }
    int ball_uniforms() const noexcept { return dimension; }
};

/// (cos 2 pi x, sin 2 pi x).
Point circle_map(double x) noexcept;

/// Uniform in the unit disk: sqrt(x1) * circle_map(x2).
Point disk_map(double x1, double x2) noexcept;

/// Hat box map to the unit sphere in R^3: latitude 2 x1 - 1, longitude 2 pi x2.
Point hatbox_map(double x1, double x2) noexcept;

/// Uniform in the unit ball of R^3: cbrt(x1) * hatbox_map(x2, x3).
Point ball3_map(double x1, double x2, double x3) noexcept;

/// Dimension-dispatched sphere draw; reads d - 1 entries of u.
Point sphere_map(int dimension, std::span<const double> u) noexcept;

/// Dimension-dispatched ball draw; reads d entries of u.
Point ball_map(int dimension, std::span<const double> u) noexcept;

/// Green's function of the ball B(z, r) at distance s = |w - z| from the
/// centre: log(r/s)/(2 pi) for d = 2, (1/s - 1/r)/(4 pi) for d = 3.
/// Throws Error("singular-green") for s == 0.
double green(int dimension, double r, double s);

/// Volume of the d-ball of radius r.
double ball_volume(int dimension, double r) noexcept;

}  // namespace wosqmc
