#include <cmath>

#include "doctest.h"
#include "wosqmc/error.hpp"
#include "wosqmc/experiments.hpp"
#include "wosqmc/minkprobe.hpp"

using namespace wosqmc;

namespace {

ProbeSpec disk_probe(std::size_t k, unsigned m, double eps = 0.05) {
    const ExampleSpec d = builtin_example("disk");
    ProbeSpec p;
    p.domain = d.domain;
    p.z0 = d.z0;
    p.k = k;
    p.m = m;
    p.epsilon = eps;
    return p;
}

}  // namespace

TEST_CASE("indicator hand traces") {
    const ExampleSpec d = builtin_example("disk");
    const double a = 0.25;
    const double b = 0.75;
    CHECK(indicator_theta(*d.domain, d.z0, {}, 1, 0.05, std::span<const double>(&a, 1)) == 1);
    CHECK(indicator_theta(*d.domain, d.z0, {}, 1, 0.05, std::span<const double>(&b, 1)) == 0);
    // eps beyond the diameter: everything terminates at step 1
    for (double x = 0.0; x < 1.0; x += 0.01) {
        CHECK(indicator_theta(*d.domain, d.z0, {}, 1, 2.5, std::span<const double>(&x, 1)) == 1);
    }
    // two steps: 0.75 goes to the centre, then anywhere lands on the circle
    const double xy[2] = {0.75, 0.3};
    CHECK(indicator_theta(*d.domain, d.z0, {}, 2, 0.05, xy) == 1);
    const double stop_early[2] = {0.25, 0.3};
    CHECK(indicator_theta(*d.domain, d.z0, {}, 2, 0.05, stop_early) == 0);
}

TEST_CASE("target subsets") {
    const ExampleSpec s = builtin_example("sector");
    // from near the ray theta = 0, a step towards it ends in that shell only
    const Point z0(0.5, -0.1);
    const std::vector<char> ray0 = {1, 0, 0};
    const std::vector<char> arc = {0, 1, 0};
    const double down = 0.25;  // moving up, towards the ray
    CHECK(indicator_theta(*s.domain, z0, ray0, 1, 0.01, std::span<const double>(&down, 1)) == 1);
    CHECK(indicator_theta(*s.domain, z0, arc, 1, 0.01, std::span<const double>(&down, 1)) == 0);
}

TEST_CASE("k = 1 on the disk: boundary count stays bounded") {
    for (unsigned m = 2; m <= 16; ++m) {
        const ProbeResult r = boundary_box_count(disk_probe(1, m));
        CHECK(r.flagged >= 1);
        CHECK(r.flagged <= 8);
        CHECK(r.total == (std::uint64_t{1} << m));
    }
}

TEST_CASE("k = 1 count agrees with a dense scan of the indicator") {
    // count sign changes of the indicator on a fine 1D grid
    const ExampleSpec d = builtin_example("disk");
    const int n = 1 << 20;
    int changes = 0;
    double x0 = 0.0;
    int prev = indicator_theta(*d.domain, d.z0, {}, 1, 0.05, std::span<const double>(&x0, 1));
    for (int i = 1; i <= n; ++i) {
        const double x = static_cast<double>(i % n) / n;
        const int v = indicator_theta(*d.domain, d.z0, {}, 1, 0.05, std::span<const double>(&x, 1));
        changes += v != prev;
        prev = v;
    }
    CHECK(changes == 2);  // Theta_1 is one interval around x = 1/4
    const ProbeResult r = boundary_box_count(disk_probe(1, 12));
    CHECK(r.flagged >= 2);
    CHECK(r.flagged <= 4);
}

TEST_CASE("empty termination set gives no boundary boxes") {
    // unit disk with a small hole; from (-0.5, 0) one step of radius 0.5
    // never comes within eps of the hole
    DomainSpec spec = builtin_example("disk").domain->spec();
    spec.regions.push_back(
        RegionSpec{Side::keep_outside, {ComponentSpec{Circle{Point(0.5, 0.0), 0.1}, BoundaryData::value(0)}}});
    ProbeSpec p = disk_probe(1, 10, 1e-3);
    p.domain = std::make_shared<const Domain>(spec);
    p.z0 = Point(-0.5, 0.0);
    p.target = {0, 1};
    const ProbeResult r = boundary_box_count(p);
    CHECK(r.flagged == 0);
    CHECK(r.volume_estimate == 0.0);
}

TEST_CASE("monotone refinement of flagged boxes") {
    for (std::size_t k : {1u, 2u}) {
        for (unsigned m = 2; m <= 6; ++m) {
            const auto coarse = box_flags(disk_probe(k, m));
            const auto fine = box_flags(disk_probe(k, m + 1));
            const std::uint64_t side = std::uint64_t{1} << m;
            for (std::uint64_t box = 0; box < coarse.size(); ++box) {
                if (!coarse[box]) continue;
                std::uint64_t b[2] = {0, 0};
                b[k - 1] = box % side;
                if (k == 2) b[0] = box / side;
                bool child = false;
                for (std::uint64_t c = 0; c < (std::uint64_t{1} << k); ++c) {
                    std::uint64_t idx = 0;
                    for (std::size_t i = 0; i < k; ++i) idx = idx * (2 * side) + 2 * b[i] + ((c >> i) & 1);
                    child = child || fine[idx];
                }
                CHECK(child);
            }
        }
    }
}

TEST_CASE("k = 2 on the disk grows like N^(1/2)") {
    std::vector<std::pair<unsigned, std::uint64_t>> counts;
    std::vector<double> volumes;
    for (unsigned m = 6; m <= 10; ++m) {
        const ProbeResult r = boundary_box_count(disk_probe(2, m));
        counts.emplace_back(m, r.flagged);
        volumes.push_back(r.volume_estimate);
    }
    const double e = growth_exponent(counts, 2);
    CHECK(e >= 0.40);
    CHECK(e <= 0.65);
    CHECK(e <= 0.5 + 0.15);
    for (std::size_t i = 1; i < volumes.size(); ++i) {
        CHECK(std::abs(volumes[i] - volumes[i - 1]) <= 2.0 * std::pow(2.0, -static_cast<double>(6 + i - 1) / 2.0));
    }
    // flagged fraction shrinks
    for (std::size_t i = 1; i < counts.size(); ++i) {
        CHECK(std::ldexp(static_cast<double>(counts[i].second), -2 * static_cast<int>(counts[i].first)) <
              std::ldexp(static_cast<double>(counts[i - 1].second), -2 * static_cast<int>(counts[i - 1].first)));
    }
}

TEST_CASE("growth exponent fit") {
    std::vector<std::pair<unsigned, std::uint64_t>> pow2;
    std::vector<std::pair<unsigned, std::uint64_t>> flat;
    for (unsigned m = 4; m <= 10; ++m) {
        pow2.emplace_back(m, std::uint64_t{1} << m);
        flat.emplace_back(m, 6);
    }
    CHECK(growth_exponent(pow2, 2) == doctest::Approx(0.5));
    CHECK(growth_exponent(flat, 1) == doctest::Approx(0.0));
    CHECK_THROWS_WITH_AS(growth_exponent({{4, 3}, {5, 0}, {6, 2}}, 1), doctest::Contains("degenerate-fit"), Error);
}

TEST_CASE("probe argument checks") {
    CHECK_THROWS_AS(boundary_box_count(disk_probe(4, 4)), Error);
    CHECK_THROWS_AS(boundary_box_count(disk_probe(3, 13)), Error);
    ProbeSpec p = disk_probe(2, 4);
    p.domain = builtin_example("ball").domain;
    CHECK_THROWS_AS(boundary_box_count(p), Error);
}
