#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <ostream>

namespace wosqmc {

/// Small value type for a point or vector in R^2 or R^3. Unused trailing
/// coordinates are kept at zero so norms and dot products need no branching.
class Point {
public:
    Point() = default;
    explicit Point(int dim) : dim_(dim) {}
    Point(double x, double y) : c_{x, y, 0.0}, dim_(2) {}
    Point(double x, double y, double z) : c_{x, y, z}, dim_(3) {}

    int dim() const noexcept { return dim_; }
    double operator[](std::size_t i) const noexcept { return c_[i]; }
    double& operator[](std::size_t i) noexcept { return c_[i]; }
    double x() const noexcept { return c_[0]; }
    double y() const noexcept { return c_[1]; }
    double z() const noexcept { return c_[2]; }

    Point& operator+=(const Point& o) noexcept {
        c_[0] += o.c_[0]; c_[1] += o.c_[1]; c_[2] += o.c_[2];
        return *this;
    }
    Point& operator-=(const Point& o) noexcept {
        c_[0] -= o.c_[0]; c_[1] -= o.c_[1]; c_[2] -= o.c_[2];
        return *this;
    }
    Point& operator*=(double s) noexcept {
        c_[0] *= s; c_[1] *= s; c_[2] *= s;
        return *this;
    }

    friend Point operator+(Point a, const Point& b) noexcept { return a += b; }
    friend Point operator-(Point a, const Point& b) noexcept { return a -= b; }
    friend Point operator*(Point a, double s) noexcept { return a *= s; }
    friend Point operator*(double s, Point a) noexcept { return a *= s; }
    friend bool operator==(const Point& a, const Point& b) noexcept {
        return a.dim_ == b.dim_ && a.c_ == b.c_;
    }

    /// Lexicographic order on coordinates; used for deterministic tie-breaks.
    friend bool lex_less(const Point& a, const Point& b) noexcept { return a.c_ < b.c_; }

    friend std::ostream& operator<<(std::ostream& os, const Point& p) {
        os << '(' << p.c_[0] << ", " << p.c_[1];
        if (p.dim_ == 3) os << ", " << p.c_[2];
        return os << ')';
    }

private:
    std::array<double, 3> c_{0.0, 0.0, 0.0};
    int dim_ = 2;
};

inline double dot(const Point& a, const Point& b) noexcept {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double cross2(const Point& a, const Point& b) noexcept { return a[0] * b[1] - a[1] * b[0]; }
inline double norm(const Point& a) noexcept { return std::sqrt(dot(a, a)); }
inline double distance(const Point& a, const Point& b) noexcept { return norm(a - b); }

}  // namespace wosqmc
