#pragma once

// Dyadic box counting for the k-step termination sets of a planar harmonic
// walk. Theta_k is the set of x in [0,1)^k whose walk avoids every shell for
// steps 1..k-1 and lands in the target shell at step k.

#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "wosqmc/geometry.hpp"

namespace wosqmc {

/// 1 iff the walk from z0 driven by angles x_1..x_k keeps distance >= eps to
/// both the target components and the rest of the boundary at steps 1..k-1,
/// and ends within eps of the target at step k. The start point itself is not
/// tested. An empty `target` means the whole
/// boundary. The domain must be 2D.
int indicator_theta(const Domain& domain, const Point& z0, std::span<const char> target, std::size_t k, double eps,
                    std::span<const double> x);

struct ProbeSpec {
    std::shared_ptr<const Domain> domain;
    Point z0{0.0, 0.0};
    std::vector<char> target;  // empty: whole boundary
    std::size_t k = 2;         // 1..3
    double epsilon = 0.05;
    unsigned m = 8;            // 2^m boxes per axis
    unsigned threads = 0;      // 0: hardware concurrency
};

struct ProbeResult {
    std::size_t k = 0;
    unsigned m = 0;
    std::uint64_t flagged = 0;
    std::uint64_t total = 0;
    double volume_estimate = 0.0;  // fraction of box centres inside Theta_k
};

/// Counts boxes of side 2^-m on which the indicator is not constant. Each box
/// is sampled on its half-step grid (3^k points: corners, edge and face
/// midpoints, centre); coordinates wrap mod 1 since the angle map is periodic.
/// Errors: "invalid-argument" for k outside 1..3, k m > 36 or a 3D domain.
ProbeResult boundary_box_count(const ProbeSpec& spec);

/// Per-box flags in row-major order (last coordinate fastest), for k m <= 24.
std::vector<char> box_flags(const ProbeSpec& spec);

/// Least-squares slope of log2(count) against m, divided by k, so that
/// count ~ N^e with N = 2^(k m). Needs 3 levels with nonzero count, else
/// Error("degenerate-fit").
double growth_exponent(const std::vector<std::pair<unsigned, std::uint64_t>>& counts, std::size_t k);

}  // namespace wosqmc
