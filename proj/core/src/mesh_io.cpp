#include "hzplate/mesh_io.hpp"

#include <stdexcept>

#include "json.hpp"

namespace hzplate {

using nlohmann::ordered_json;

std::string mesh_to_json(const Mesh& mesh) {
  ordered_json j;
  j["geo_order"] = mesh.geo_order();
  ordered_json verts = ordered_json::array();
  for (const Vec2& v : mesh.vertices()) verts.push_back({v[0], v[1]});
  j["vertices"] = verts;
  ordered_json tris = ordered_json::array();
  for (const auto& t : mesh.triangles()) tris.push_back({t[0], t[1], t[2]});
  j["triangles"] = tris;
  ordered_json curves = ordered_json::array();
  for (const auto& c : mesh.curves()) curves.push_back({{"center", {c.center[0], c.center[1]}}, {"radius", c.radius}});
  j["curves"] = curves;
  ordered_json edges = ordered_json::array();
  for (int i = 0; i < mesh.num_edges(); ++i)
    if (mesh.is_boundary_edge(i))
      edges.push_back({{"vertices", {mesh.edge(i)[0], mesh.edge(i)[1]}},
                       {"marker", mesh.edge_marker(i)},
                       {"curve", mesh.edge_curve(i)}});
  j["boundary_edges"] = edges;
  ordered_json refs = ordered_json::array();
  for (int e = 0; e < mesh.num_elements(); ++e) refs.push_back({mesh.refinement_edge(e).first, mesh.refinement_edge(e).second});
  j["refinement_edges"] = refs;
  return j.dump(1) + "\n";
}

namespace {

Vec2 read_point(const ordered_json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw std::invalid_argument(std::string("mesh json: ") + what + " must be [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

int read_index(const ordered_json& j, const char* what) {
  if (!j.is_number_integer()) throw std::invalid_argument(std::string("mesh json: ") + what + " must be an integer");
  return j.get<int>();
}

}  // namespace

Mesh mesh_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& ex) {
    throw std::invalid_argument(std::string("mesh json: ") + ex.what());
  }
  if (!j.is_object() || !j.contains("vertices") || !j.contains("triangles"))
    throw std::invalid_argument("mesh json: 'vertices' and 'triangles' are required");
  const int geo = j.contains("geo_order") ? read_index(j["geo_order"], "geo_order") : 1;

  std::vector<Vec2> verts;
  for (const auto& v : j["vertices"]) verts.push_back(read_point(v, "vertex"));
  const int nv = static_cast<int>(verts.size());
  auto vertex_index = [&](const ordered_json& v) {
    const int i = read_index(v, "vertex index");
    if (i < 0 || i >= nv) throw std::invalid_argument("mesh json: vertex index " + std::to_string(i) + " out of range");
    return i;
  };

  std::vector<std::array<int, 3>> tris;
  for (const auto& t : j["triangles"]) {
    if (!t.is_array() || t.size() != 3) throw std::invalid_argument("mesh json: triangles must list three vertices");
    tris.push_back({vertex_index(t[0]), vertex_index(t[1]), vertex_index(t[2])});
  }

  std::vector<BoundaryCurve> curves;
  if (j.contains("curves"))
    for (const auto& c : j["curves"]) {
      if (!c.is_object() || !c.contains("center") || !c.contains("radius") || !c["radius"].is_number())
        throw std::invalid_argument("mesh json: curves need 'center' and 'radius'");
      BoundaryCurve bc;
      bc.center = read_point(c["center"], "curve center");
      bc.radius = c["radius"].get<double>();
      if (!(bc.radius > 0.0)) throw std::invalid_argument("mesh json: curve radius must be positive");
      curves.push_back(bc);
    }

  std::map<Mesh::EdgeKey, BoundaryEdgeSpec> boundary;
  if (j.contains("boundary_edges"))
    for (const auto& b : j["boundary_edges"]) {
      if (!b.is_object() || !b.contains("vertices") || !b["vertices"].is_array() || b["vertices"].size() != 2)
        throw std::invalid_argument("mesh json: boundary edges need 'vertices': [a, b]");
      const int a = vertex_index(b["vertices"][0]);
      const int c = vertex_index(b["vertices"][1]);
      BoundaryEdgeSpec spec;
      if (b.contains("marker")) spec.marker = read_index(b["marker"], "marker");
      if (b.contains("curve")) spec.curve = read_index(b["curve"], "curve");
      if (spec.curve >= static_cast<int>(curves.size()))
        throw std::invalid_argument("mesh json: curve index " + std::to_string(spec.curve) + " out of range");
      boundary[{std::min(a, c), std::max(a, c)}] = spec;
    }

  std::vector<Mesh::EdgeKey> refs;
  if (j.contains("refinement_edges")) {
    for (const auto& r : j["refinement_edges"]) {
      if (!r.is_array() || r.size() != 2) throw std::invalid_argument("mesh json: refinement edges must be [a, b]");
      refs.emplace_back(vertex_index(r[0]), vertex_index(r[1]));
    }
    if (refs.size() != tris.size()) throw std::invalid_argument("mesh json: one refinement edge per triangle required");
  }
  return Mesh(std::move(verts), std::move(tris), boundary, std::move(curves), geo, std::move(refs));
}

}  // namespace hzplate
