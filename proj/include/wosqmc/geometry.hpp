#pragma once

// Dirichlet domains in R^2 and R^3 built from analytic boundary pieces.
//
// A 2D domain is a set of closed regions. Each region is bounded either by a
// single circle or by a closed loop of segments and circular arcs listed in
// traversal order. Regions combine in one of two ways:
//   difference: Omega = (keep-inside regions) minus (keep-outside regions)
//   union:      Omega = union of the regions, with the boundary clipped to
//               the parts not interior to another region.
// A 3D domain is a ball, optionally with ball-shaped holes.
//
// Every boundary piece is a "component" with a dense integer id (order of
// appearance in the spec) and its own Dirichlet data.

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "wosqmc/point.hpp"

namespace wosqmc {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

enum class Side { keep_inside, keep_outside };
enum class Composition { difference, union_of };

struct Circle {
    Point center;
    double radius = 1.0;
};

struct Segment {
    Point a;
    Point b;
};

/// Circular arc traversed from angle `start` to angle `end`; counter-clockwise
/// when end > start. The swept width |end - start| lies in (0, 2*pi).
struct Arc {
    Point center;
    double radius = 1.0;
    double start = 0.0;
    double end = 0.0;
};

struct Ball {
    Point center{0.0, 0.0, 0.0};
    double radius = 1.0;
};

using Primitive = std::variant<Circle, Segment, Arc, Ball>;

/// Dirichlet data on one component: a constant, or a built-in formula id.
struct BoundaryData {
    std::optional<double> constant;
    std::string formula;

    static BoundaryData value(double c) { return {c, {}}; }
    static BoundaryData named(std::string id) { return {std::nullopt, std::move(id)}; }
};

enum class SourceKind { zero, constant, formula };

/// Right-hand side g of Laplace(u) = g.
struct SourceData {
    SourceKind kind = SourceKind::zero;
    double value = 0.0;
    std::string formula;

    static SourceData none() { return {}; }
    static SourceData constant(double nu) { return {SourceKind::constant, nu, {}}; }
    static SourceData named(std::string id) { return {SourceKind::formula, 0.0, std::move(id)}; }
};

struct ComponentSpec {
    Primitive shape;
    BoundaryData boundary;
};

struct RegionSpec {
    Side side = Side::keep_inside;
    std::vector<ComponentSpec> components;
};

struct DomainSpec {
    std::string name;
    int dimension = 2;
    Composition composition = Composition::difference;
    std::vector<RegionSpec> regions;
    SourceData source;
};

struct BoundaryHit {
    Point point;
    int component = -1;
    double value = 0.0;
};

using PointFunction = double (*)(const Point&);

/// Looks up a built-in closed-form function by id; nullptr when unknown.
/// Ids: disk_log, ball_inverse, sector_exact, sector_ray0, sector_ray_3pi2,
/// sector_arc, sector_source.
PointFunction find_formula(const std::string& id);

/// Immutable domain. Construction validates the spec and throws
/// Error("config-error") on anything inconsistent; queries never throw
/// configuration errors.
class Domain {
public:
    explicit Domain(DomainSpec spec);

    const DomainSpec& spec() const noexcept { return spec_; }
    const std::string& name() const noexcept { return spec_.name; }
    int dimension() const noexcept { return spec_.dimension; }
    std::size_t component_count() const noexcept { return components_.size(); }

    /// Radius R with Omega inside B(0, R).
    double enclosing_radius() const noexcept { return r_max_; }
    /// Geometric equality tolerance, 1e-9 * R.
    double tolerance() const noexcept { return tol_; }

    /// Closed containment: interior points plus points within tolerance of
    /// the boundary.
    bool contains(const Point& z) const;

    /// dist(z, boundary). Throws Error("point-outside-domain") when z is not
    /// in Omega.
    double distance(const Point& z) const;

    /// Nearest boundary point. Ties go to the smallest component id, then to
    /// the lexicographically smallest point. A point at the centre of a
    /// circle projects to centre + (r, 0[, 0]).
    BoundaryHit project(const Point& z) const;

    double boundary_value(const BoundaryHit& hit) const;
    double source_value(const Point& w) const;

    SourceKind source_kind() const noexcept { return spec_.source.kind; }
    double source_constant() const noexcept { return spec_.source.value; }

    /// Distances from z to the components flagged in `subset` and to all
    /// other components (+inf when a side is empty). No containment check.
    std::pair<double, double> split_distance(const Point& z, std::span<const char> subset) const;

    /// Exposed boundary pieces, for sampling the boundary in tests.
    /// Returns n points per piece spread evenly by arc length.
    std::vector<std::pair<int, Point>> sample_boundary(std::size_t per_piece) const;

    struct Piece {
        enum class Kind { segment, arc, circle, sphere } kind = Kind::segment;
        int component = -1;
        int region = -1;
        Point a, b;        // segment end points, or oriented arc end points
        Point center;
        double radius = 0.0;
        double start = 0.0;  // arc: smallest angle
        double width = 0.0;  // arc: ccw sweep from start
        bool ccw = true;     // arc: traversal direction within its loop
    };

private:
    struct Resolved {
        PointFunction fn = nullptr;
        double constant = 0.0;
    };

    double raw_distance(const Point& z) const noexcept;
    bool region_contains(std::size_t region, const Point& z) const;
    double region_boundary_distance(std::size_t region, const Point& z) const;
    void clip_union();
    void check_disjoint_regions() const;

    DomainSpec spec_;
    std::vector<Piece> region_pieces_;  // full region boundaries, by region
    std::vector<std::vector<std::size_t>> regions_;
    std::vector<Piece> pieces_;         // exposed boundary of Omega
    std::vector<Resolved> components_;
    PointFunction source_fn_ = nullptr;
    double r_max_ = 0.0;
    double tol_ = 0.0;
};

}  // namespace wosqmc
