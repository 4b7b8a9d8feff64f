#include "wosqmc/domain_config.hpp"

#include <fstream>

#include "wosqmc/error.hpp"

namespace wosqmc {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) { throw Error("config-error", what); }

Point read_point(const json& j, const char* key, int dim) {
    if (!j.contains(key)) bad(std::string("missing '") + key + "'");
    const json& v = j.at(key);
    if (!v.is_array() || v.size() != static_cast<std::size_t>(dim)) {
        bad(std::string("'") + key + "' must be a " + std::to_string(dim) + "-vector");
    }
    if (dim == 2) return Point(v[0].get<double>(), v[1].get<double>());
    return Point(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
}

json write_point(const Point& p) {
    if (p.dim() == 3) return json::array({p.x(), p.y(), p.z()});
    return json::array({p.x(), p.y()});
}

BoundaryData read_boundary(const json& j) {
    if (!j.contains("boundary_value")) bad("component without boundary_value");
    const json& b = j.at("boundary_value");
    if (b.is_number()) return BoundaryData::value(b.get<double>());
    if (b.contains("const")) return BoundaryData::value(b.at("const").get<double>());
    if (b.contains("formula")) return BoundaryData::named(b.at("formula").get<std::string>());
    bad("boundary_value needs 'const' or 'formula'");
}

ComponentSpec read_component(const json& j) {
    const std::string kind = j.value("kind", "");
    ComponentSpec c;
    if (kind == "circle") {
        c.shape = Circle{read_point(j, "center", 2), j.at("radius").get<double>()};
    } else if (kind == "ball") {
        c.shape = Ball{read_point(j, "center", 3), j.at("radius").get<double>()};
    } else if (kind == "segment") {
        c.shape = Segment{read_point(j, "a", 2), read_point(j, "b", 2)};
    } else if (kind == "arc") {
        const json& ang = j.at("angles");
        if (!ang.is_array() || ang.size() != 2) bad("arc 'angles' must be [start, end]");
        c.shape = Arc{read_point(j, "center", 2), j.at("radius").get<double>(), ang[0].get<double>(),
                      ang[1].get<double>()};
    } else {
        bad("unknown component kind '" + kind + "'");
    }
    c.boundary = read_boundary(j);
    return c;
}

}  // namespace

DomainSpec domain_spec_from_json(const json& j) {
    try {
        DomainSpec spec;
        spec.name = j.value("name", "");
        spec.dimension = j.value("dimension", 2);
        const std::string comp = j.value("composition", "difference");
        if (comp == "difference") {
            spec.composition = Composition::difference;
        } else if (comp == "union") {
            spec.composition = Composition::union_of;
        } else {
            bad("unknown composition '" + comp + "'");
        }
        if (!j.contains("regions") || !j.at("regions").is_array()) bad("missing 'regions' array");
        for (const json& r : j.at("regions")) {
            RegionSpec region;
            const std::string side = r.value("side", "keep-inside");
            if (side == "keep-inside") {
                region.side = Side::keep_inside;
            } else if (side == "keep-outside") {
                region.side = Side::keep_outside;
            } else {
                bad("unknown side '" + side + "'");
            }
            for (const json& c : r.at("components")) region.components.push_back(read_component(c));
            spec.regions.push_back(std::move(region));
        }
        if (j.contains("source")) {
            const json& s = j.at("source");
            if (s.is_string() && s.get<std::string>() == "zero") {
                spec.source = SourceData::none();
            } else if (s.is_object() && s.contains("const")) {
                spec.source = SourceData::constant(s.at("const").get<double>());
            } else if (s.is_object() && s.contains("formula")) {
                spec.source = SourceData::named(s.at("formula").get<std::string>());
            } else {
                bad("source must be \"zero\", {\"const\": v} or {\"formula\": id}");
            }
        }
        return spec;
    } catch (const json::exception& e) {
        bad(e.what());
    }
}

json domain_spec_to_json(const DomainSpec& spec) {
    json regions = json::array();
    for (const RegionSpec& r : spec.regions) {
        json comps = json::array();
        for (const ComponentSpec& c : r.components) {
            json jc;
            std::visit(
                [&jc](const auto& s) {
                    using T = std::decay_t<decltype(s)>;
                    if constexpr (std::is_same_v<T, Circle>) {
                        jc = {{"kind", "circle"}, {"center", write_point(s.center)}, {"radius", s.radius}};
                    } else if constexpr (std::is_same_v<T, Ball>) {
                        jc = {{"kind", "ball"}, {"center", write_point(s.center)}, {"radius", s.radius}};
                    } else if constexpr (std::is_same_v<T, Segment>) {
                        jc = {{"kind", "segment"}, {"a", write_point(s.a)}, {"b", write_point(s.b)}};
                    } else {
                        jc = {{"kind", "arc"},
                              {"center", write_point(s.center)},
                              {"radius", s.radius},
                              {"angles", json::array({s.start, s.end})}};
                    }
                },
                c.shape);
            if (c.boundary.constant) {
                jc["boundary_value"] = {{"const", *c.boundary.constant}};
            } else {
                jc["boundary_value"] = {{"formula", c.boundary.formula}};
            }
            comps.push_back(std::move(jc));
        }
        regions.push_back({{"side", r.side == Side::keep_inside ? "keep-inside" : "keep-outside"},
                           {"components", std::move(comps)}});
    }
    json source;
    switch (spec.source.kind) {
        case SourceKind::zero:
            source = "zero";
            break;
        case SourceKind::constant:
            source = {{"const", spec.source.value}};
            break;
        case SourceKind::formula:
            source = {{"formula", spec.source.formula}};
            break;
    }
    return {{"name", spec.name},
            {"dimension", spec.dimension},
            {"composition", spec.composition == Composition::difference ? "difference" : "union"},
            {"regions", std::move(regions)},
            {"source", std::move(source)}};
}

DomainSpec load_domain_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("missing-data-file", "cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error("config-error", path.string() + ": " + e.what());
    }
    try {
        return domain_spec_from_json(j);
    } catch (const Error& e) {
        throw Error(e.code(), path.string() + ": " + e.detail());
    }
}

}  // namespace wosqmc
