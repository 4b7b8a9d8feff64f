#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "wosqmc/geometry.hpp"

namespace wosqmc {

/// JSON layout:
///   { "name": "disk", "dimension": 2, "composition": "difference" | "union",
///     "regions": [ { "side": "keep-inside" | "keep-outside",
///                    "components": [ { "kind": "circle" | "segment" | "arc" | "ball", ...,
///                                      "boundary_value": {"const": c} | {"formula": id} } ] } ],
///     "source": "zero" | {"const": nu} | {"formula": id} }
/// circle/ball: "center", "radius"; segment: "a", "b"; arc: "center", "radius",
/// "angles": [start, end].
DomainSpec domain_spec_from_json(const nlohmann::json& j);
nlohmann::json domain_spec_to_json(const DomainSpec& spec);

/// Reads and parses a domain file; errors carry the file name.
DomainSpec load_domain_spec(const std::filesystem::path& path);

}  // namespace wosqmc
