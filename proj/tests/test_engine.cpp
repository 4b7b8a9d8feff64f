#include <cmath>
#include <random>

#include "doctest.h"
#include "wosqmc/engine.hpp"
#include "wosqmc/error.hpp"
#include "wosqmc/experiments.hpp"

using namespace wosqmc;

namespace {

Domain disk(BoundaryData h, SourceData g = SourceData::none()) {
    DomainSpec s;
    s.regions = {RegionSpec{Side::keep_inside, {ComponentSpec{Circle{Point(0, 0), 1.0}, h}}}};
    s.source = g;
    return Domain(s);
}

const Domain& disk_log() {
    static const Domain d = disk(BoundaryData::named("disk_log"));
    return d;
}

// Records which coordinates a walk reads.
struct TracingRow {
    std::vector<double> x;
    mutable std::vector<std::size_t> reads;
    double operator[](std::size_t j) const {
        reads.push_back(j);
        return x[j];
    }
    std::size_t size() const { return x.size(); }
};

std::vector<double> row_of(std::size_t len, std::initializer_list<double> head, std::uint64_t seed = 1) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> r(len);
    for (double& v : r) v = u(rng);
    std::size_t i = 0;
    for (double h : head) r[i++] = h;
    return r;
}

SamplerSpec mc(std::size_t dim, std::uint64_t seed) {
    SamplerSpec s;
    s.backend = Backend::mc;
    s.dim = dim;
    s.seed = seed;
    return s;
}

}  // namespace

TEST_CASE("hand-traced harmonic walks on the unit disk") {
    const WalkConfig cfg;  // eps 1e-4, K 200
    WalkResult w = walk(disk_log(), Point(0, 0.5), cfg, row_of(200, {0.25}));
    CHECK(w.tau == 1);
    CHECK(w.value == doctest::Approx(0.5 * std::log(5.0)));
    CHECK(w.value == doctest::Approx(0.804719).epsilon(1e-6));
    CHECK_FALSE(w.truncated);
    REQUIRE(w.radii.size() == 1);
    CHECK(w.radii[0] == 0.5);

    w = walk(disk_log(), Point(0, 0.5), cfg, row_of(200, {0.75, 0.0}));
    CHECK(w.tau == 2);
    CHECK(w.radii[1] == doctest::Approx(1.0));
    CHECK(w.exit.point.x() == doctest::Approx(1.0));
    CHECK(std::abs(w.value) < 1e-9);
}

TEST_CASE("constant boundary data gives the constant") {
    const Domain d = disk(BoundaryData::value(3.5));
    std::mt19937_64 rng(7);
    for (int i = 0; i < 100; ++i) {
        CHECK(walk(d, Point(0.1, -0.2), WalkConfig{}, row_of(200, {}, rng())).value == 3.5);
        CHECK(fixed_step_walk(d, Point(0.1, -0.2), 5, row_of(5, {}, rng())).value == 3.5);
    }
    const Estimate e = estimate(d, Point(0.3, 0.3), WalkConfig{}, mc(200, 1), 1000, EstimatorKind::harmonic);
    CHECK(e.mean == 3.5);
    CHECK(e.truncation_rate == 0.0);
}

TEST_CASE("walks read exactly s * tau coordinates in order") {
    const ExampleSpec sector = builtin_example("sector");
    std::mt19937_64 rng(8);
    for (EstimatorKind kind : {EstimatorKind::harmonic, EstimatorKind::source, EstimatorKind::constant_source}) {
        const std::size_t s = uniforms_per_step(2, kind);
        for (int t = 0; t < 50; ++t) {
            TracingRow row{row_of(s * 200, {}, rng()), {}};
            const WalkResult w = detail::run_walk(*sector.domain, sector.z0, WalkConfig{}, row, kind, true);
            REQUIRE(row.reads.size() == s * w.tau);
            for (std::size_t j = 0; j < row.reads.size(); ++j) CHECK(row.reads[j] == j);
        }
    }
}

TEST_CASE("walk invariants") {
    const ExampleSpec gasket = builtin_example("gasket");
    std::mt19937_64 rng(9);
    for (int t = 0; t < 200; ++t) {
        const WalkResult w = walk(*gasket.domain, gasket.z0, gasket.walk, row_of(200, {}, rng()));
        CHECK(w.tau <= gasket.walk.max_steps);
        for (double r : w.radii) CHECK(r >= gasket.walk.epsilon);
        CHECK(std::isfinite(w.value));
        CHECK(gasket.domain->distance(w.exit.point) <= 1e-9 * gasket.domain->enclosing_radius());
    }
}

TEST_CASE("truncation at K still projects") {
    const WalkResult w = walk(disk_log(), Point(0, 0), WalkConfig{1e-4, 1}, row_of(1, {0.5}));
    CHECK(w.tau == 1);
    CHECK(w.exit.point.x() == -1.0);
    CHECK(std::abs(w.exit.point.y()) < 1e-15);  // sin(pi) round-off
    CHECK_FALSE(w.truncated);  // landed on the boundary
    const WalkResult v = walk(disk_log(), Point(0, 0.5), WalkConfig{1e-4, 1}, row_of(1, {0.75}));
    CHECK(v.truncated);
    CHECK(v.exit.point == Point(1, 0));
}

TEST_CASE("periodicity of the harmonic walk") {
    std::mt19937_64 rng(10);
    const ExampleSpec gasket = builtin_example("gasket");
    for (int t = 0; t < 100; ++t) {
        std::vector<double> r = row_of(200, {}, rng());
        for (double& v : r) v = std::floor(v * 0x1.0p52) * 0x1.0p-52;
        std::vector<double> shifted = r;
        for (double& v : shifted) v += 1.0;
        CHECK(walk(*gasket.domain, gasket.z0, gasket.walk, r).value ==
              walk(*gasket.domain, gasket.z0, gasket.walk, shifted).value);
    }
}

TEST_CASE("argument errors") {
    CHECK_THROWS_WITH_AS(walk(disk_log(), Point(0, 0.99995), WalkConfig{}, row_of(200, {})),
                         doctest::Contains("start-in-shell"), Error);
    CHECK_THROWS_WITH_AS(walk(disk_log(), Point(0, 0.5), WalkConfig{}, row_of(10, {})),
                         doctest::Contains("sampler-dimension-mismatch"), Error);
    CHECK_THROWS_WITH_AS(estimate(disk_log(), Point(0, 0.5), WalkConfig{}, mc(100, 1), 8, EstimatorKind::harmonic),
                         doctest::Contains("sampler-dimension-mismatch"), Error);
    CHECK_THROWS_WITH_AS(walk(disk_log(), Point(2, 0.5), WalkConfig{}, row_of(200, {})),
                         doctest::Contains("point-outside-domain"), Error);
    CHECK(row_length(2, EstimatorKind::source, WalkConfig{}) == 600);
    CHECK(row_length(3, EstimatorKind::harmonic, WalkConfig{}) == 400);
    CHECK(row_length(2, EstimatorKind::fixed_step, WalkConfig{}, 20) == 20);
    CHECK(estimator_from_string(to_string(EstimatorKind::constant_source)) == EstimatorKind::constant_source);
}

TEST_CASE("pointwise source walk") {
    SUBCASE("zero source equals the plain walk") {
        std::mt19937_64 rng(11);
        const Domain d = disk(BoundaryData::named("disk_log"));
        for (int t = 0; t < 50; ++t) {
            const std::vector<double> r = row_of(600, {}, rng());
            std::vector<double> plain(200);
            const WalkResult ws = walk_with_source(d, Point(0.2, 0.1), WalkConfig{}, r);
            for (std::size_t k = 0; k < 200; ++k) plain[k] = r[3 * k];
            const WalkResult wp = walk(d, Point(0.2, 0.1), WalkConfig{}, plain);
            CHECK(ws.value == wp.value);
            CHECK(ws.source_sum == 0.0);
        }
    }
    SUBCASE("one-step hand trace") {
        const Domain d = disk(BoundaryData::value(0.0), SourceData::constant(-2.0));
        // step 1: direction 0.25, w radius sqrt(0.25) = 0.5 of r = 0.5
        const WalkResult w = walk_with_source(d, Point(0, 0.5), WalkConfig{}, row_of(600, {0.25, 0.25, 0.6}));
        CHECK(w.tau == 1);
        CHECK(w.value == doctest::Approx(0.25 * std::log(2.0)));
        CHECK(w.value == doctest::Approx(0.173287).epsilon(1e-6));
    }
}

TEST_CASE("constant source walk") {
    SUBCASE("nu = 0 equals the plain walk") {
        const Domain d = disk(BoundaryData::named("disk_log"), SourceData::constant(0.0));
        std::mt19937_64 rng(12);
        for (int t = 0; t < 50; ++t) {
            const std::vector<double> r = row_of(200, {}, rng());
            CHECK(walk_constant_source(d, Point(0.2, 0.1), WalkConfig{}, r).value ==
                  walk(d, Point(0.2, 0.1), WalkConfig{}, r).value);
        }
    }
    SUBCASE("dumbbell single step") {
        const ExampleSpec db = builtin_example("dumbbell");
        const WalkResult w = walk_constant_source(*db.domain, db.z0, db.walk, row_of(200, {0.25}));
        CHECK(w.tau == 1);
        CHECK(w.radii[0] == doctest::Approx(0.4));
        CHECK(w.value == doctest::Approx(0.08));
    }
}

TEST_CASE("unit disk with Laplace(u) = -2: both source estimators give 1/2") {
    const Domain d = disk(BoundaryData::value(0.0), SourceData::constant(-2.0));
    const std::uint64_t n = 100000;
    const Estimate a = estimate(d, Point(0, 0), WalkConfig{}, mc(600, 21), n, EstimatorKind::source);
    const Estimate b = estimate(d, Point(0, 0), WalkConfig{}, mc(200, 22), n, EstimatorKind::constant_source);
    const double se_a = std::sqrt(a.walk_variance / n);
    const double se_b = std::sqrt(b.walk_variance / n);
    CHECK(std::abs(a.mean - 0.5) <= 4 * se_a);
    CHECK(std::abs(b.mean - 0.5) <= 4 * se_b);
    CHECK(std::abs(a.mean - b.mean) <= 4 * std::hypot(se_a, se_b));
}

TEST_CASE("dumbbell: pointwise and constant source estimators agree") {
    const ExampleSpec db = builtin_example("dumbbell");
    const std::uint64_t n = 100000;
    const Estimate a = estimate(*db.domain, db.z0, db.walk, mc(600, 31), n, EstimatorKind::source);
    const Estimate b = estimate(*db.domain, db.z0, db.walk, mc(200, 32), n, EstimatorKind::constant_source);
    CHECK(std::abs(a.mean - b.mean) <= 4 * std::sqrt(a.walk_variance / n + b.walk_variance / n));
}

TEST_CASE("fixed-step walks") {
    const WalkResult w = fixed_step_walk(disk_log(), Point(0, 0.5), 1, row_of(1, {0.25}));
    CHECK(w.tau == 1);
    CHECK(w.value == doctest::Approx(0.5 * std::log(5.0)));

    const std::uint64_t n = 100000;
    const Estimate e = estimate(disk_log(), Point(0, 0.5), WalkConfig{}, mc(20, 41), n, EstimatorKind::fixed_step, 20);
    const double exact = 0.5 * std::log(4.25);
    CHECK(std::abs(e.mean - exact) <= 4 * std::sqrt(e.walk_variance / n) + 1e-3);
}

TEST_CASE("no truncation on the disk at K = 200") {
    const ExampleSpec d = builtin_example("disk");
    const Estimate e = estimate(*d.domain, d.z0, d.walk, mc(200, 51), 1000000, EstimatorKind::harmonic);
    CHECK(e.truncation_rate == 0.0);
    CHECK(e.mean_steps < 40.0);
}

TEST_CASE("exact-solution bias on the disk and ball") {
    const std::uint64_t n = 1 << 13;
    const ExampleSpec d = builtin_example("disk");
    Estimate e = estimate(*d.domain, d.z0, d.walk, mc(200, 61), n, EstimatorKind::harmonic);
    CHECK(std::abs(e.mean - 0.5 * std::log(4.25)) <= 4 * std::sqrt(e.walk_variance / n) + 10 * d.walk.epsilon);

    const ExampleSpec b = builtin_example("ball");
    SamplerSpec s = make_method("sobol", b.row_length()).sampler;
    s.seed = 62;
    e = estimate(*b.domain, b.z0, b.walk, s, n, EstimatorKind::harmonic);
    CHECK(std::abs(e.mean - 1.0 / std::sqrt(3.34)) <= 4 * std::sqrt(e.walk_variance / n) + 10 * b.walk.epsilon);
}

TEST_CASE("RQMC estimates are unbiased against the MC grand mean") {
    const ExampleSpec d = builtin_example("disk");
    const std::size_t R = 100;
    auto replicate_means = [&](const std::string& method) {
        std::vector<double> m(R);
        SamplerSpec s = make_method(method, d.row_length()).sampler;
        s.seed = 70;
        for (std::size_t r = 0; r < R; ++r) {
            s.replicate = static_cast<std::uint32_t>(r);
            m[r] = estimate(*d.domain, d.z0, d.walk, s, 1024, d.kind).mean;
        }
        return m;
    };
    auto stats = [&](const std::vector<double>& v) {
        double mean = 0.0;
        for (double x : v) mean += x / v.size();
        double ss = 0.0;
        for (double x : v) ss += (x - mean) * (x - mean);
        return std::pair{mean, std::sqrt(ss / (v.size() - 1) / v.size())};
    };
    const auto [mc_mean, mc_se] = stats(replicate_means("mc"));
    for (const char* m : {"sobol", "halton", "lattice"}) {
        CAPTURE(m);
        const auto [mean, se] = stats(replicate_means(m));
        CHECK(std::abs(mean - mc_mean) <= 4 * std::hypot(se, mc_se));
    }
}

TEST_CASE("estimates are reproducible") {
    const ExampleSpec g = builtin_example("gasket");
    SamplerSpec s = make_method("sobol", g.row_length()).sampler;
    s.seed = 99;
    s.replicate = 4;
    const Estimate a = estimate(*g.domain, g.z0, g.walk, s, 512, g.kind);
    const Estimate b = estimate(*g.domain, g.z0, g.walk, s, 512, g.kind);
    CHECK(a.mean == b.mean);
    CHECK(a.walk_variance == b.walk_variance);
}
