#pragma once

// Walk on spheres driven by one point row x in [0,1)^(s K).
//
// Step k reads the block x[s(k-1) .. s k - 1]: the first d - 1 entries pick
// the exit direction on the sphere, and for pointwise sources the next d
// entries pick the Green's function sample w_k inside the ball.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wosqmc/error.hpp"
#include "wosqmc/geometry.hpp"
#include "wosqmc/samplers.hpp"
#include "wosqmc/transforms.hpp"

namespace wosqmc {

enum class EstimatorKind {
    harmonic,         // h at the exit point
    source,           // h plus sampled Green's function source correction
    constant_source,  // h - nu / (2d) * sum r_k^2
    fixed_step,       // exactly k steps, no shell test, then project
};

std::string to_string(EstimatorKind kind);
EstimatorKind estimator_from_string(const std::string& name);

struct WalkConfig {
    double epsilon = 1e-4;
    std::size_t max_steps = 200;
};

struct WalkResult {
    std::size_t tau = 0;  // number of moves taken
    BoundaryHit exit;
    std::vector<double> radii;  // r_1 .. r_tau
    double source_sum = 0.0;
    double value = 0.0;
    bool truncated = false;  // stopped by K rather than by the shell
};

struct Estimate {
    double mean = 0.0;
    std::uint64_t n = 0;
    std::string method;
    double truncation_rate = 0.0;
    double walk_variance = 0.0;  // sample variance of the n trajectory values
    double mean_steps = 0.0;
};

/// Uniforms consumed per step for a domain of dimension d.
std::size_t uniforms_per_step(int dimension, EstimatorKind kind) noexcept;

/// Length of the point row the estimator needs: s K, or s k for fixed_step.
std::size_t row_length(int dimension, EstimatorKind kind, const WalkConfig& config, std::size_t fixed_steps = 0);

namespace detail {

template <class Row>
WalkResult run_walk(const Domain& domain, const Point& z0, const WalkConfig& cfg, const Row& row,
                    EstimatorKind kind, bool record) {
    const int dim = domain.dimension();
    if (z0.dim() != dim) throw Error("invalid-argument", "start point dimension does not match the domain");
    if (!(cfg.epsilon > 0.0) || cfg.max_steps == 0) throw Error("invalid-argument", "need epsilon > 0 and K >= 1");
    const std::size_t s0 = static_cast<std::size_t>(dim) - 1;
    const std::size_t s = uniforms_per_step(dim, kind);
    if (static_cast<std::size_t>(row.size()) < s * cfg.max_steps) {
        throw Error("sampler-dimension-mismatch", "row has " + std::to_string(row.size()) + " coordinates, walk needs " +
                                                      std::to_string(s * cfg.max_steps));
    }
    const double r_start = domain.distance(z0);
    if (r_start < cfg.epsilon) throw Error("start-in-shell", "start point lies within epsilon of the boundary");

    WalkResult res;
    std::array<double, 5> u{};
    Point z = z0;
    double r = r_start;
    double squares = 0.0;
    bool stopped = false;
    std::size_t k = 0;
    for (; k < cfg.max_steps; ++k) {
        if (k > 0) r = domain.distance(z);
        if (r < cfg.epsilon) {
            stopped = true;
            break;
        }
        if (record) res.radii.push_back(r);
        const std::size_t base = s * k;
        for (std::size_t t = 0; t < s; ++t) u[t] = row[base + t];
        const Point dir = sphere_map(dim, std::span<const double>(u.data(), s0));
        if (kind == EstimatorKind::source) {
            const Point offset = ball_map(dim, std::span<const double>(u.data() + s0, s - s0));
            const Point w = z + r * offset;
            const double g = domain.source_value(w);
            if (g != 0.0) res.source_sum -= ball_volume(dim, r) * green(dim, r, r * norm(offset)) * g;
        } else if (kind == EstimatorKind::constant_source) {
            squares += r * r;
        }
        z += r * dir;
    }
    res.tau = k;
    if (!stopped) res.truncated = domain.distance(z) >= cfg.epsilon;
    res.exit = domain.project(z);
    if (kind == EstimatorKind::constant_source) {
        res.source_sum = -domain.source_constant() / (2.0 * dim) * squares;
    }
    res.value = res.exit.value + res.source_sum;
    return res;
}

template <class Row>
WalkResult run_fixed_steps(const Domain& domain, const Point& z0, std::size_t steps, const Row& row, bool record) {
    const int dim = domain.dimension();
    if (z0.dim() != dim) throw Error("invalid-argument", "start point dimension does not match the domain");
    const std::size_t s0 = static_cast<std::size_t>(dim) - 1;
    if (static_cast<std::size_t>(row.size()) < s0 * steps) {
        throw Error("sampler-dimension-mismatch", "row has " + std::to_string(row.size()) + " coordinates, walk needs " +
                                                      std::to_string(s0 * steps));
    }
    if (!(domain.distance(z0) > 0.0)) throw Error("start-in-shell", "start point lies on the boundary");
    WalkResult res;
    std::array<double, 2> u{};
    Point z = z0;
    for (std::size_t k = 0; k < steps; ++k) {
        const double r = domain.distance(z);
        if (record) res.radii.push_back(r);
        for (std::size_t t = 0; t < s0; ++t) u[t] = row[s0 * k + t];
        z += r * sphere_map(dim, std::span<const double>(u.data(), s0));
    }
    res.tau = steps;
    res.exit = domain.project(z);
    res.value = res.exit.value;
    return res;
}

}  // namespace detail

/// Harmonic walk: stops at the first z_k within epsilon of the boundary, or
/// after K moves, and returns h at the projection of the final point.
template <class Row>
WalkResult walk(const Domain& domain, const Point& z0, const WalkConfig& config, const Row& row) {
    return detail::run_walk(domain, z0, config, row, EstimatorKind::harmonic, true);
}

/// Walk with a pointwise source: each step also draws w_k uniformly in the
/// ball and accumulates -vol(B) G(r_k, |w_k - z_{k-1}|) g(w_k).
template <class Row>
WalkResult walk_with_source(const Domain& domain, const Point& z0, const WalkConfig& config, const Row& row) {
    return detail::run_walk(domain, z0, config, row, EstimatorKind::source, true);
}

/// Walk with a constant source nu: value = h(exit) - nu/(2d) * sum r_k^2.
template <class Row>
WalkResult walk_constant_source(const Domain& domain, const Point& z0, const WalkConfig& config, const Row& row) {
    return detail::run_walk(domain, z0, config, row, EstimatorKind::constant_source, true);
}

/// Exactly `steps` moves without the shell test, then project.
template <class Row>
WalkResult fixed_step_walk(const Domain& domain, const Point& z0, std::size_t steps, const Row& row) {
    return detail::run_fixed_steps(domain, z0, steps, row, true);
}

/// Mean of n trajectory values over rows 0..n-1 of the sampler's point set.
/// The sampler dimension must equal row_length(...), otherwise
/// Error("sampler-dimension-mismatch").
Estimate estimate(const Domain& domain, const Point& z0, const WalkConfig& config, const SamplerSpec& sampler,
                  std::uint64_t n, EstimatorKind kind, std::size_t fixed_steps = 0);

}  // namespace wosqmc
