#include "wosqmc/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wosqmc/error.hpp"
#include "wosqmc/geometry.hpp"

namespace wosqmc {

Point circle_map(double x) noexcept {
    const double a = kTwoPi * (x - std::floor(x));  // exactly 1-periodic
    return Point(std::cos(a), std::sin(a));
}

Point disk_map(double x1, double x2) noexcept { return std::sqrt(x1) * circle_map(x2); }

Point hatbox_map(double x1, double x2) noexcept {
    const double lat = 2.0 * x1 - 1.0;
    const double rho = std::sqrt(std::max(0.0, 1.0 - lat * lat));
    const double lon = kTwoPi * (x2 - std::floor(x2));
    return Point(rho * std::cos(lon), rho * std::sin(lon), lat);
}

Point ball3_map(double x1, double x2, double x3) noexcept { return std::cbrt(x1) * hatbox_map(x2, x3); }

Point sphere_map(int dimension, std::span<const double> u) noexcept {
    return dimension == 2 ? circle_map(u[0]) : hatbox_map(u[0], u[1]);
}

Point ball_map(int dimension, std::span<const double> u) noexcept {
    return dimension == 2 ? disk_map(u[0], u[1]) : ball3_map(u[0], u[1], u[2]);
}

double green(int dimension, double r, double s) {
    if (s == 0.0) throw Error("singular-green", "Green's function evaluated at the ball centre");
    if (dimension == 2) return std::log(r / s) / kTwoPi;
    return (1.0 / s - 1.0 / r) / (4.0 * kPi);
}

double ball_volume(int dimension, double r) noexcept {
    return dimension == 2 ? kPi * r * r : (4.0 / 3.0) * kPi * r * r * r;
}

}  // namespace wosqmc
