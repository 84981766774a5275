#pragma once

#include <string>

#include "hzplate/mesh.hpp"

namespace hzplate {

/// Mesh JSON schema:
///   {
///     "geo_order": 1 | 3,
///     "vertices": [[x, y], ...],
///     "triangles": [[a, b, c], ...],                    // zero-based vertex indices
///     "curves": [{"center": [x, y], "radius": r}, ...],  // optional
///     "boundary_edges": [{"vertices": [a, b], "marker": m, "curve": c}, ...],  // optional
///     "refinement_edges": [[a, b], ...]                 // optional, one per triangle
///   }
/// Boundary edges not listed get marker 1; "curve" defaults to -1 (straight).
std::string mesh_to_json(const Mesh& mesh);
/// Throws std::invalid_argument on schema violations and mesh construction errors.
Mesh mesh_from_json(const std::string& text);

}  // namespace hzplate
