#include <cmath>
#include <random>

#include "doctest.h"
#include "wosqmc/error.hpp"
#include "wosqmc/experiments.hpp"

using namespace wosqmc;

TEST_CASE("built-in examples") {
    const ExampleSpec disk = builtin_example("disk");
    CHECK(disk.z0 == Point(0, 0.5));
    CHECK(disk.walk.epsilon == 1e-4);
    CHECK(disk.walk.max_steps == 200);
    CHECK(disk.kind == EstimatorKind::harmonic);

    const ExampleSpec gasket = builtin_example("gasket");
    CHECK(gasket.z0 == Point(0.240999, 0.3));
    CHECK(gasket.walk.epsilon == 1e-3);
    CHECK(gasket.exact == nullptr);

    const ExampleSpec db = builtin_example("dumbbell");
    CHECK(db.z0 == Point(0.5, 0));
    CHECK(db.kind == EstimatorKind::constant_source);
    CHECK(db.domain->source_constant() == -2.0);
    CHECK(db.domain->project(Point(0.5, 0.3)).value == 0.0);

    const ExampleSpec sector = builtin_example("sector");
    CHECK(std::hypot(sector.z0.x(), sector.z0.y()) == doctest::Approx(0.1244));
    CHECK(std::atan2(sector.z0.y(), sector.z0.x()) == doctest::Approx(-0.7906));
    CHECK(sector.kind == EstimatorKind::source);

    const ExampleSpec ball = builtin_example("ball");
    CHECK(ball.z0 == Point(0.2, 0.3, -0.1));
    CHECK(ball.row_length() == 400);

    for (const std::string& name : builtin_example_names()) {
        const ExampleSpec ex = builtin_example(name);
        CHECK(ex.domain->distance(ex.z0) > ex.walk.epsilon);
    }
    CHECK_THROWS_WITH_AS(builtin_example("torus"), doctest::Contains("unknown-example"), Error);
    CHECK_THROWS_WITH_AS(builtin_example("disk", "/nonexistent"), doctest::Contains("missing-data-file"), Error);
}

TEST_CASE("exact solutions") {
    CHECK(exact_solution("disk", Point(0, 0.5)) == doctest::Approx(0.5 * std::log(4.25)).epsilon(1e-14));
    CHECK(exact_solution("disk", Point(0, 0.5)) == doctest::Approx(0.723460).epsilon(1e-6));
    CHECK(exact_solution("ball", Point(0.2, 0.3, -0.1)) == doctest::Approx(std::pow(3.34, -0.5)).epsilon(1e-14));
    CHECK(exact_solution("ball", Point(0.2, 0.3, -0.1)) == doctest::Approx(0.547176).epsilon(1e-6));
    const double r = 0.1244;
    const double t = -0.7906;
    const double sector = std::cbrt(r) * std::sin(t / 3) + std::exp(-r * r / 2);
    CHECK(exact_solution("sector", Point(r * std::cos(t), r * std::sin(t))) == doctest::Approx(sector).epsilon(1e-12));
    CHECK(sector == doctest::Approx(0.862254).epsilon(1e-6));
    CHECK_THROWS_WITH_AS(exact_solution("gasket", Point(0, 0)), doctest::Contains("no-exact-solution"), Error);
    CHECK_THROWS_WITH_AS(exact_solution("dumbbell", Point(0, 0)), doctest::Contains("no-exact-solution"), Error);
}

TEST_CASE("methods") {
    CHECK(make_method("mc", 10).sampler.backend == Backend::mc);
    CHECK(make_method("sobol", 10).sampler.matrices->dimensions() >= 10);
    CHECK(make_method("lattice", 10).sampler.lattice->z.size() >= 10);
    CHECK(make_method("halton", 10).sampler.backend == Backend::halton);
    CHECK_THROWS_WITH_AS(make_method("niederreiter", 10), doctest::Contains("missing-data-file"), Error);
    CHECK_THROWS_WITH_AS(make_method("sparse-grid", 10), doctest::Contains("unknown-method"), Error);
}

TEST_CASE("n grid parsing") {
    CHECK(parse_n_grid("2^7..2^10") == std::vector<std::uint64_t>{128, 256, 512, 1024});
    CHECK(parse_n_grid("100") == std::vector<std::uint64_t>{100});
    CHECK(parse_n_grid("64,2^8,1000") == std::vector<std::uint64_t>{64, 256, 1000});
    CHECK_THROWS_AS(parse_n_grid("2^9..2^7"), Error);
    CHECK_THROWS_AS(parse_n_grid("100..200"), Error);
    CHECK_THROWS_AS(parse_n_grid("abc"), Error);
}

TEST_CASE("study with zero boundary data has zero variance") {
    const ExampleSpec disk = with_boundary_values(builtin_example("disk"), {{0, 0.0}});
    const StudyTable t = run_study(disk, {make_method("mc", disk.row_length())}, {64, 128}, {10, 1, 1});
    CHECK(t.rows.size() == 20);
    for (const StudyRow& r : t.rows) CHECK(r.estimate == 0.0);
    for (const CellStats& c : t.cells()) {
        CHECK(c.variance == 0.0);
        CHECK_FALSE(c.mse.has_value());
    }
    CHECK_THROWS_AS(with_boundary_values(builtin_example("disk"), {{3, 1.0}}), Error);
}

TEST_CASE("study errors surface before compute") {
    const ExampleSpec disk = builtin_example("disk");
    CHECK_THROWS_WITH_AS(run_study(disk, {make_method("lattice", disk.row_length())}, {100}, {2, 1, 1}),
                         doctest::Contains("invalid-sample-size"), Error);
    CHECK_THROWS_WITH_AS(run_study(disk, {make_method("mc", 10)}, {64}, {2, 1, 1}),
                         doctest::Contains("sampler-dimension-mismatch"), Error);
}

TEST_CASE("MC variance halves when n doubles") {
    // s1^2 / s2^2 ~ 2 F(399, 399); two-sided 99.9% quantiles (scipy.stats.f)
    const double lo = 1.4372469413255222;
    const double hi = 2.78309863460968;
    const ExampleSpec disk = builtin_example("disk");
    const StudyTable t = run_study(disk, {make_method("mc", disk.row_length())}, {1024, 2048}, {400, 1, 0});
    const auto cells = t.cells();
    REQUIRE(cells.size() == 2);
    const double ratio = cells[0].variance / cells[1].variance;
    CHECK(ratio >= lo);
    CHECK(ratio <= hi);
    REQUIRE(cells[0].mse.has_value());
    const double bias = cells[0].mean - 0.5 * std::log(4.25);
    CHECK(*cells[0].mse == doctest::Approx(cells[0].variance + bias * bias));
}

TEST_CASE("Sobol' beats MC on the disk at n = 2^13") {
    const ExampleSpec disk = builtin_example("disk");
    const StudyTable t = run_study(
        disk, {make_method("mc", disk.row_length()), make_method("sobol", disk.row_length())}, {8192}, {100, 3, 0});
    const auto cells = t.cells();
    REQUIRE(cells.size() == 2);
    CHECK(cells[0].method == "mc");
    CHECK(cells[1].variance < cells[0].variance);
}

TEST_CASE("studies are deterministic and independent of threading") {
    const ExampleSpec g = builtin_example("gasket");
    const std::vector<Method> methods = {make_method("sobol", g.row_length()), make_method("lattice", g.row_length())};
    const StudyTable a = run_study(g, methods, {64, 128}, {6, 17, 1});
    const StudyTable b = run_study(g, methods, {64, 128}, {6, 17, 4});
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].method == b.rows[i].method);
        CHECK(a.rows[i].n == b.rows[i].n);
        CHECK(a.rows[i].replicate == b.rows[i].replicate);
        CHECK(a.rows[i].estimate == b.rows[i].estimate);
    }
    // a cell's randomization does not depend on the other methods in the list
    const StudyTable c = run_study(g, {methods[1]}, {64, 128}, {6, 17, 1});
    for (std::size_t i = 0; i < c.rows.size(); ++i) CHECK(c.rows[i].estimate == a.rows[12 + i].estimate);
}

TEST_CASE("log-log fits recover exact power laws") {
    for (double beta : {-1.1, -1.0, -1.5}) {
        for (double C : {1e-3, 1.0, 250.0}) {
            std::vector<CellStats> cells;
            for (int m = 5; m <= 17; ++m) {
                const std::uint64_t n = std::uint64_t{1} << m;
                cells.push_back(CellStats{"x", n, 10, 0.0, C * std::pow(static_cast<double>(n), beta), std::nullopt});
            }
            const RegressionFit f = fit_loglog(cells, {"x"}, 128).at(0);
            CHECK(std::abs(f.beta - beta) <= 1e-12);
            CHECK(std::abs(f.alpha - std::log(C)) <= 1e-10);
            CHECK(f.n_min == 128);
            CHECK(f.n_max == (1u << 17));
            CHECK(f.points == 11);
        }
    }
}

TEST_CASE("fits skip degenerate rows and reject all-degenerate input") {
    std::vector<CellStats> cells;
    for (int m = 7; m <= 12; ++m) {
        const std::uint64_t n = std::uint64_t{1} << m;
        cells.push_back(CellStats{"a", n, 10, 0.0, m % 2 ? 0.0 : 1.0 / n, std::nullopt});
        cells.push_back(CellStats{"z", n, 10, 0.0, 0.0, std::nullopt});
    }
    const RegressionFit f = fit_loglog(cells, {"a"}, 128).at(0);
    CHECK(f.points == 3);
    CHECK(f.beta == doctest::Approx(-1.0));
    CHECK_THROWS_WITH_AS(fit_loglog(cells, {"z"}, 128), doctest::Contains("degenerate-fit"), Error);
    CHECK_THROWS_WITH_AS(fit_loglog(cells, {"a"}, 1024), doctest::Contains("degenerate-fit"), Error);

    // pooled fit over two methods on the same line
    std::vector<CellStats> two;
    for (int m = 7; m <= 10; ++m) {
        const double n = std::ldexp(1.0, m);
        two.push_back(CellStats{"p", static_cast<std::uint64_t>(n), 5, 0.0, 2.0 / (n * n), std::nullopt});
        two.push_back(CellStats{"q", static_cast<std::uint64_t>(n), 5, 0.0, 2.0 / (n * n), std::nullopt});
    }
    const RegressionFit pooled = fit_pooled(two, {"p", "q"}, 128);
    CHECK(pooled.beta == doctest::Approx(-2.0));
    CHECK(pooled.points == 8);
}

TEST_CASE("variance reduction factors") {
    const RegressionFit mc{"mc", 6.41, -1.01, 128, 131072, 11};
    const RegressionFit sobol{"sobol", 5.78, -1.10, 128, 131072, 11};
    CHECK(vrf(mc, mc, 131072.0) == doctest::Approx(1.0));
    CHECK(vrf(sobol, mc, 131072.0) == doctest::Approx(std::exp(0.63 + 0.09 * std::log(131072.0))));
    CHECK(std::abs(vrf(sobol, mc, 131072.0) - 5.4) < 0.05);
}

TEST_CASE("replicate variance covers the truth at the chi-square rate") {
    // R = 50 normal replicate means with variance 4; 95% interval for s^2 is
    // [4 q_lo / 49, 4 q_hi / 49] with chi-square(49) quantiles
    const double q_lo = 31.554916462667126;
    const double q_hi = 70.22241356643451;
    std::mt19937_64 rng(123);
    std::normal_distribution<double> nd(1.0, 2.0);
    const int trials = 2000;
    int covered = 0;
    for (int t = 0; t < trials; ++t) {
        StudyTable table;
        for (std::size_t r = 0; r < 50; ++r) table.rows.push_back(StudyRow{"x", "mc", 64, r, nd(rng), 0.0});
        const double s2 = table.cells().at(0).variance;
        if (s2 >= 4.0 * q_lo / 49.0 && s2 <= 4.0 * q_hi / 49.0) ++covered;
    }
    const double rate = static_cast<double>(covered) / trials;
    CHECK(rate >= 0.93);
    CHECK(rate <= 0.97);
}
