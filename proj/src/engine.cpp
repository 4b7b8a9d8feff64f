#include "wosqmc/engine.hpp"

namespace wosqmc {

std::string to_string(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::harmonic:
            return "harmonic";
        case EstimatorKind::source:
            return "source";
        case EstimatorKind::constant_source:
            return "constant-source";
        case EstimatorKind::fixed_step:
            return "fixed-step";
    }
    return "?";
}

EstimatorKind estimator_from_string(const std::string& name) {
    if (name == "harmonic") return EstimatorKind::harmonic;
    if (name == "source") return EstimatorKind::source;
    if (name == "constant-source") return EstimatorKind::constant_source;
    if (name == "fixed-step") return EstimatorKind::fixed_step;
    throw Error("invalid-argument", "unknown estimator '" + name + "'");
}

std::size_t uniforms_per_step(int dimension, EstimatorKind kind) noexcept {
    const auto d = static_cast<std::size_t>(dimension);
    return kind == EstimatorKind::source ? (d - 1) + d : d - 1;
}

std::size_t row_length(int dimension, EstimatorKind kind, const WalkConfig& config, std::size_t fixed_steps) {
    if (kind == EstimatorKind::fixed_step) return uniforms_per_step(dimension, kind) * fixed_steps;
    return uniforms_per_step(dimension, kind) * config.max_steps;
}

Estimate estimate(const Domain& domain, const Point& z0, const WalkConfig& config, const SamplerSpec& sampler,
                  std::uint64_t n, EstimatorKind kind, std::size_t fixed_steps) {
    const std::size_t need = row_length(domain.dimension(), kind, config, fixed_steps);
    if (sampler.dim != need) {
        throw Error("sampler-dimension-mismatch", "sampler dimension " + std::to_string(sampler.dim) +
                                                      ", estimator needs " + std::to_string(need));
    }
    const auto points = make_point_set(sampler, n);

    // Welford accumulation in row order keeps results bit-reproducible.
    double mean = 0.0;
    double m2 = 0.0;
    double steps = 0.0;
    std::uint64_t truncated = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        const PointRow row(*points, i);
        const WalkResult w = kind == EstimatorKind::fixed_step
                                 ? detail::run_fixed_steps(domain, z0, fixed_steps, row, false)
                                 : detail::run_walk(domain, z0, config, row, kind, false);
        const double delta = w.value - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (w.value - mean);
        steps += static_cast<double>(w.tau);
        if (w.truncated) ++truncated;
    }
    Estimate e;
    e.mean = mean;
    e.n = n;
    e.method = to_string(sampler.backend);
    e.truncation_rate = static_cast<double>(truncated) / static_cast<double>(n);
    e.walk_variance = n > 1 ? m2 / static_cast<double>(n - 1) : 0.0;
    e.mean_steps = steps / static_cast<double>(n);
    return e;
}

}  // namespace wosqmc
