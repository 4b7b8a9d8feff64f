#include "wosqmc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "wosqmc/error.hpp"

namespace wosqmc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double wrap_angle(double a) {
    double w = std::fmod(a, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    return w >= kTwoPi ? 0.0 : w;
}

Point on_circle(const Point& c, double r, double angle) {
    return Point(c.x() + r * std::cos(angle), c.y() + r * std::sin(angle));
}

double polar_angle(const Point& z) {
    // sector angles run over [-3pi/2, 0]; the cut sits in the middle of the
    // missing quadrant so both straight edges map continuously
    double theta = std::atan2(z.y(), z.x());
    if (theta > kPi / 4.0) theta -= kTwoPi;
    return theta;
}

double disk_log(const Point& z) {
    return 0.5 * std::log((z.x() - 2.0) * (z.x() - 2.0) + z.y() * z.y());
}
double ball_inverse(const Point& z) {
    return 1.0 / std::sqrt((z.x() - 2.0) * (z.x() - 2.0) + z.y() * z.y() + z.z() * z.z());
}
double sector_exact(const Point& z) {
    const double r = norm(z);
    return std::cbrt(r) * std::sin(polar_angle(z) / 3.0) + std::exp(-0.5 * r * r);
}
double sector_ray0(const Point& z) {
    const double r = norm(z);
    return std::exp(-0.5 * r * r);
}
double sector_ray_3pi2(const Point& z) {
    const double r = norm(z);
    return -std::cbrt(r) + std::exp(-0.5 * r * r);
}
double sector_arc(const Point& z) { return std::sin(polar_angle(z) / 3.0) + std::exp(-0.5); }
double sector_source(const Point& z) {
    const double r2 = dot(z, z);
    return -(2.0 - r2) * std::exp(-0.5 * r2);
}

struct Nearest {
    double dist = kInf;
    Point point;
};

// Within `tol` of a circle's centre every boundary point ties; the rule picks
// centre + (r, 0), or the start point of an arc.
Nearest nearest_on(const Domain::Piece& p, const Point& z, double tol) {
    using Kind = Domain::Piece::Kind;
    switch (p.kind) {
        case Kind::segment: {
            const Point ab = p.b - p.a;
            const double t = std::clamp(dot(z - p.a, ab) / dot(ab, ab), 0.0, 1.0);
            const Point q = p.a + t * ab;
            return {distance(z, q), q};
        }
        case Kind::circle:
        case Kind::sphere: {
            const Point v = z - p.center;
            const double n = norm(v);
            Point q = p.center;
            if (n <= tol) {
                q[0] += p.radius;
            } else {
                q += v * (p.radius / n);
            }
            return {std::abs(n - p.radius), q};
        }
        case Kind::arc: {
            const Point v = z - p.center;
            const double n = norm(v);
            if (n <= tol) return {p.radius, on_circle(p.center, p.radius, p.start)};
            const double t = wrap_angle(std::atan2(v.y(), v.x()) - p.start);
            if (t <= p.width) return {std::abs(n - p.radius), p.center + v * (p.radius / n)};
            const Point e0 = on_circle(p.center, p.radius, p.start);
            const Point e1 = on_circle(p.center, p.radius, p.start + p.width);
            const double d0 = distance(z, e0);
            const double d1 = distance(z, e1);
            if (d0 < d1 || (d0 == d1 && lex_less(e0, e1))) return {d0, e0};
            return {d1, e1};
        }
    }
    return {};
}

double distance_to(const Domain::Piece& p, const Point& z) {
    using Kind = Domain::Piece::Kind;
    switch (p.kind) {
        case Kind::circle:
        case Kind::sphere:
            return std::abs(distance(z, p.center) - p.radius);
        case Kind::segment: {
            const Point ab = p.b - p.a;
            const double t = std::clamp(dot(z - p.a, ab) / dot(ab, ab), 0.0, 1.0);
            return distance(z, p.a + t * ab);
        }
        case Kind::arc:
            return nearest_on(p, z, 0.0).dist;
    }
    return kInf;
}

// Parameter of a point on a piece: t in [0,1] for segments, angular offset
// from `start` for arcs and circles.
double param_of(const Domain::Piece& p, const Point& q) {
    if (p.kind == Domain::Piece::Kind::segment) {
        const Point ab = p.b - p.a;
        return dot(q - p.a, ab) / dot(ab, ab);
    }
    const Point v = q - p.center;
    return wrap_angle(std::atan2(v.y(), v.x()) - p.start);
}

double param_extent(const Domain::Piece& p) {
    return p.kind == Domain::Piece::Kind::segment ? 1.0 : p.width;
}

Point point_at(const Domain::Piece& p, double t) {
    if (p.kind == Domain::Piece::Kind::segment) return p.a + t * (p.b - p.a);
    return on_circle(p.center, p.radius, p.start + t);
}

// Intersections of the supporting line/circle of P with the supporting
// line/circle of Q. Extra points outside either piece are harmless to the
// callers, which filter by parameter range.
std::vector<Point> support_intersections(const Domain::Piece& p, const Domain::Piece& q) {
    using Kind = Domain::Piece::Kind;
    std::vector<Point> out;
    const bool p_line = p.kind == Kind::segment;
    const bool q_line = q.kind == Kind::segment;
    auto line_circle = [&out](const Point& a, const Point& b, const Point& c, double r) {
        const Point u = b - a;
        const Point w = a - c;
        const double qa = dot(u, u);
        const double qb = 2.0 * dot(u, w);
        const double qc = dot(w, w) - r * r;
        const double disc = qb * qb - 4.0 * qa * qc;
        if (disc < 0.0) return;
        const double s = std::sqrt(disc);
        out.push_back(a + ((-qb - s) / (2.0 * qa)) * u);
        if (s > 0.0) out.push_back(a + ((-qb + s) / (2.0 * qa)) * u);
    };
    if (p_line && q_line) {
        const Point u = p.b - p.a;
        const Point v = q.b - q.a;
        const double den = cross2(u, v);
        if (std::abs(den) <= 1e-14 * norm(u) * norm(v)) return out;
        out.push_back(p.a + (cross2(q.a - p.a, v) / den) * u);
    } else if (p_line) {
        line_circle(p.a, p.b, q.center, q.radius);
    } else if (q_line) {
        line_circle(q.a, q.b, p.center, p.radius);
    } else {
        const Point dc = q.center - p.center;
        const double d = norm(dc);
        if (d == 0.0 || d > p.radius + q.radius || d < std::abs(p.radius - q.radius)) return out;
        const double a = (p.radius * p.radius - q.radius * q.radius + d * d) / (2.0 * d);
        const double h = std::sqrt(std::max(0.0, p.radius * p.radius - a * a));
        const Point base = p.center + dc * (a / d);
        const Point perp(-dc.y() / d, dc.x() / d);
        out.push_back(base + h * perp);
        if (h > 0.0) out.push_back(base - h * perp);
    }
    return out;
}

[[noreturn]] void config_error(const std::string& what) { throw Error("config-error", what); }

}  // namespace

PointFunction find_formula(const std::string& id) {
    static const std::map<std::string, PointFunction> table = {
        {"disk_log", &disk_log},         {"ball_inverse", &ball_inverse},
        {"sector_exact", &sector_exact}, {"sector_ray0", &sector_ray0},
        {"sector_ray_3pi2", &sector_ray_3pi2}, {"sector_arc", &sector_arc},
        {"sector_source", &sector_source},
    };
    const auto it = table.find(id);
    return it == table.end() ? nullptr : it->second;
}

Domain::Domain(DomainSpec spec) : spec_(std::move(spec)) {
    const int dim = spec_.dimension;
    if (dim != 2 && dim != 3) config_error("dimension must be 2 or 3");
    if (spec_.regions.empty()) config_error("domain has no regions");

    int next_id = 0;
    for (std::size_t ri = 0; ri < spec_.regions.size(); ++ri) {
        const RegionSpec& region = spec_.regions[ri];
        if (region.components.empty()) config_error("region " + std::to_string(ri) + " is empty");
        std::vector<std::size_t> members;
        const bool closed_single = region.components.size() == 1;
        for (const ComponentSpec& comp : region.components) {
            const int id = next_id++;
            Resolved res;
            if (comp.boundary.constant) {
                res.constant = *comp.boundary.constant;
            } else {
                res.fn = find_formula(comp.boundary.formula);
                if (!res.fn) {
                    config_error("component " + std::to_string(id) + ": unknown boundary formula '" +
                                 comp.boundary.formula + "'");
                }
            }
            components_.push_back(res);

            Piece piece;
            piece.component = id;
            piece.region = static_cast<int>(ri);
            if (const auto* c = std::get_if<Circle>(&comp.shape)) {
                if (dim != 2 || !closed_single) config_error("circle must be the only component of a 2D region");
                if (!(c->radius > 0.0)) config_error("circle radius must be positive");
                piece.kind = Piece::Kind::circle;
                piece.center = Point(c->center.x(), c->center.y());
                piece.radius = c->radius;
                piece.width = kTwoPi;
            } else if (const auto* b = std::get_if<Ball>(&comp.shape)) {
                if (dim != 3 || !closed_single) config_error("ball must be the only component of a 3D region");
                if (!(b->radius > 0.0)) config_error("ball radius must be positive");
                piece.kind = Piece::Kind::sphere;
                piece.center = Point(b->center.x(), b->center.y(), b->center.z());
                piece.radius = b->radius;
            } else if (const auto* s = std::get_if<Segment>(&comp.shape)) {
                if (dim != 2) config_error("segments are 2D only");
                piece.kind = Piece::Kind::segment;
                piece.a = Point(s->a.x(), s->a.y());
                piece.b = Point(s->b.x(), s->b.y());
                if (piece.a == piece.b) config_error("segment end points coincide");
            } else if (const auto* a = std::get_if<Arc>(&comp.shape)) {
                if (dim != 2) config_error("arcs are 2D only");
                const double width = std::abs(a->end - a->start);
                if (!(a->radius > 0.0)) config_error("arc radius must be positive");
                if (!(width > 0.0 && width < kTwoPi)) config_error("arc width must lie in (0, 2pi)");
                piece.kind = Piece::Kind::arc;
                piece.center = Point(a->center.x(), a->center.y());
                piece.radius = a->radius;
                piece.start = std::min(a->start, a->end);
                piece.width = width;
                piece.ccw = a->end > a->start;
                piece.a = on_circle(piece.center, a->radius, a->start);
                piece.b = on_circle(piece.center, a->radius, a->end);
            }
            members.push_back(region_pieces_.size());
            region_pieces_.push_back(piece);
        }
        regions_.push_back(std::move(members));
    }

    for (const Piece& p : region_pieces_) {
        double bound = 0.0;
        if (p.kind == Piece::Kind::segment) {
            bound = std::max(norm(p.a), norm(p.b));
        } else {
            bound = norm(p.center) + p.radius;
        }
        r_max_ = std::max(r_max_, bound);
    }
    tol_ = 1e-9 * r_max_;

    // loops of segments and arcs must close up in traversal order
    const double join_tol = 1e-7 * r_max_;
    for (std::size_t ri = 0; ri < regions_.size(); ++ri) {
        const auto& members = regions_[ri];
        if (members.size() == 1) continue;
        for (std::size_t k = 0; k < members.size(); ++k) {
            const Piece& cur = region_pieces_[members[k]];
            const Piece& nxt = region_pieces_[members[(k + 1) % members.size()]];
            if (wosqmc::distance(cur.b, nxt.a) > join_tol) {
                config_error("region " + std::to_string(ri) + " does not close: component " +
                             std::to_string(cur.component) + " ends away from component " +
                             std::to_string(nxt.component));
            }
        }
        if (members.size() == 2 && region_pieces_[members[0]].kind == Piece::Kind::segment &&
            region_pieces_[members[1]].kind == Piece::Kind::segment) {
            config_error("region " + std::to_string(ri) + " encloses no area");
        }
    }

    switch (spec_.source.kind) {
        case SourceKind::zero:
        case SourceKind::constant:
            break;
        case SourceKind::formula:
            source_fn_ = find_formula(spec_.source.formula);
            if (!source_fn_) config_error("unknown source formula '" + spec_.source.formula + "'");
            break;
    }

    if (spec_.composition == Composition::difference) {
        const bool has_outer = std::any_of(spec_.regions.begin(), spec_.regions.end(),
                                           [](const RegionSpec& r) { return r.side == Side::keep_inside; });
        if (!has_outer) config_error("difference composition needs a keep-inside region");
        check_disjoint_regions();
        pieces_ = region_pieces_;
    } else {
        if (dim != 2) config_error("union composition is 2D only");
        for (const RegionSpec& r : spec_.regions) {
            if (r.side != Side::keep_inside) config_error("union members must be keep-inside");
        }
        clip_union();
    }
}

void Domain::check_disjoint_regions() const {
    for (std::size_t i = 0; i < region_pieces_.size(); ++i) {
        for (std::size_t j = i + 1; j < region_pieces_.size(); ++j) {
            const Piece& p = region_pieces_[i];
            const Piece& q = region_pieces_[j];
            if (p.region == q.region) continue;
            if (p.kind == Piece::Kind::sphere || q.kind == Piece::Kind::sphere) {
                const double d = wosqmc::distance(p.center, q.center);
                if (d <= p.radius + q.radius && d >= std::abs(p.radius - q.radius)) {
                    config_error("spheres of components " + std::to_string(p.component) + " and " +
                                 std::to_string(q.component) + " intersect");
                }
                continue;
            }
            for (const Point& x : support_intersections(p, q)) {
                if (distance_to(p, x) <= tol_ && distance_to(q, x) <= tol_) {
                    config_error("boundaries of components " + std::to_string(p.component) + " and " +
                                 std::to_string(q.component) + " intersect");
                }
            }
        }
    }
}

void Domain::clip_union() {
    for (const Piece& p : region_pieces_) {
        const double extent = param_extent(p);
        std::vector<double> cuts{0.0, extent};
        for (const Piece& q : region_pieces_) {
            if (q.region == p.region) continue;
            for (const Point& x : support_intersections(p, q)) {
                const double t = param_of(p, x);
                if (t > 0.0 && t < extent) cuts.push_back(t);
            }
        }
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            const double t0 = cuts[k];
            const double t1 = cuts[k + 1];
            if (t1 - t0 <= 1e-12 * extent) continue;
            const Point mid = point_at(p, 0.5 * (t0 + t1));
            bool hidden = false;
            for (std::size_t r = 0; r < regions_.size() && !hidden; ++r) {
                if (static_cast<int>(r) == p.region) continue;
                hidden = region_contains(r, mid) && region_boundary_distance(r, mid) > tol_;
            }
            if (hidden) continue;
            Piece sub = p;
            if (p.kind == Piece::Kind::segment) {
                sub.a = point_at(p, t0);
                sub.b = point_at(p, t1);
            } else {
                sub.kind = Piece::Kind::arc;
                sub.start = p.start + t0;
                sub.width = t1 - t0;
                sub.a = point_at(p, t0);
                sub.b = point_at(p, t1);
            }
            pieces_.push_back(sub);
        }
    }
    if (pieces_.empty()) config_error("union has an empty boundary");
}

bool Domain::region_contains(std::size_t region, const Point& z) const {
    const auto& members = regions_[region];
    if (members.size() == 1) {
        const Piece& p = region_pieces_[members.front()];
        return wosqmc::distance(z, p.center) < p.radius;
    }
    // winding number of the chord polygon, corrected by +-1 for points
    // between an arc and its chord
    double turn = 0.0;
    for (std::size_t idx : members) {
        const Piece& p = region_pieces_[idx];
        const Point u = p.a - z;
        const Point v = p.b - z;
        turn += std::atan2(cross2(u, v), dot(u, v));
        if (p.kind == Piece::Kind::arc && wosqmc::distance(z, p.center) < p.radius) {
            const Point mid = on_circle(p.center, p.radius, p.start + 0.5 * p.width);
            const Point chord = p.b - p.a;
            const double side_z = cross2(chord, z - p.a);
            const double side_m = cross2(chord, mid - p.a);
            if (side_z * side_m > 0.0) turn += p.ccw ? kTwoPi : -kTwoPi;
        }
    }
    return std::lround(turn / kTwoPi) != 0;
}

double Domain::region_boundary_distance(std::size_t region, const Point& z) const {
    double d = kInf;
    for (std::size_t idx : regions_[region]) d = std::min(d, distance_to(region_pieces_[idx], z));
    return d;
}

double Domain::raw_distance(const Point& z) const noexcept {
    double d = kInf;
    for (const Piece& p : pieces_) d = std::min(d, distance_to(p, z));
    return d;
}

bool Domain::contains(const Point& z) const {
    if (raw_distance(z) <= tol_) return true;
    if (spec_.composition == Composition::union_of) {
        for (std::size_t r = 0; r < regions_.size(); ++r) {
            if (region_contains(r, z)) return true;
        }
        return false;
    }
    for (std::size_t r = 0; r < regions_.size(); ++r) {
        const bool in = region_contains(r, z);
        if (in != (spec_.regions[r].side == Side::keep_inside)) return false;
    }
    return true;
}

double Domain::distance(const Point& z) const {
    const double d = raw_distance(z);
    if (d <= tol_) return d;
    if (!contains(z)) {
        std::ostringstream os;
        os << z << " is not in domain '" << spec_.name << "'";
        throw Error("point-outside-domain", os.str());
    }
    return d;
}

BoundaryHit Domain::project(const Point& z) const {
    distance(z);
    Nearest best;
    int best_comp = -1;
    for (const Piece& p : pieces_) {
        const Nearest cand = nearest_on(p, z, tol_);
        bool take = false;
        if (best_comp < 0 || cand.dist < best.dist - tol_) {
            take = true;
        } else if (cand.dist <= best.dist + tol_) {
            take = p.component < best_comp ||
                   (p.component == best_comp && lex_less(cand.point, best.point));
        }
        if (take) {
            best = cand;
            best_comp = p.component;
        }
    }
    BoundaryHit hit{best.point, best_comp, 0.0};
    hit.value = boundary_value(hit);
    return hit;
}

double Domain::boundary_value(const BoundaryHit& hit) const {
    const Resolved& r = components_.at(static_cast<std::size_t>(hit.component));
    return r.fn ? r.fn(hit.point) : r.constant;
}

double Domain::source_value(const Point& w) const {
    switch (spec_.source.kind) {
        case SourceKind::zero:
            return 0.0;
        case SourceKind::constant:
            return spec_.source.value;
        case SourceKind::formula:
            return source_fn_(w);
    }
    return 0.0;
}

std::pair<double, double> Domain::split_distance(const Point& z, std::span<const char> subset) const {
    double in = kInf;
    double out = kInf;
    for (const Piece& p : pieces_) {
        const double d = distance_to(p, z);
        const auto c = static_cast<std::size_t>(p.component);
        if (c < subset.size() && subset[c]) {
            in = std::min(in, d);
        } else {
            out = std::min(out, d);
        }
    }
    return {in, out};
}

std::vector<std::pair<int, Point>> Domain::sample_boundary(std::size_t per_piece) const {
    std::vector<std::pair<int, Point>> out;
    out.reserve(per_piece * pieces_.size());
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (const Piece& p : pieces_) {
        for (std::size_t i = 0; i < per_piece; ++i) {
            const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(per_piece);
            if (p.kind == Piece::Kind::sphere) {
                // Fibonacci lattice on the sphere
                const double zc = 1.0 - 2.0 * u;
                const double rho = std::sqrt(std::max(0.0, 1.0 - zc * zc));
                const double phi = golden * static_cast<double>(i);
                out.emplace_back(p.component,
                                 p.center + p.radius * Point(rho * std::cos(phi), rho * std::sin(phi), zc));
            } else {
                out.emplace_back(p.component, point_at(p, u * param_extent(p)));
            }
        }
    }
    return out;
}

}  // namespace wosqmc
