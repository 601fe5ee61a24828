#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace crowdlod {

// Indexed triangle mesh. Triangles must reference valid vertices and use
// three distinct indices.
struct TriMesh {
    std::vector<std::array<double, 3>> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<std::array<double, 3>> normals; // optional; empty or one per vertex

    std::size_t vertex_count() const { return vertices.size(); }
    std::size_t face_count() const { return triangles.size(); }
};

struct MeshStats {
    std::size_t vertex_count = 0;
    std::size_t face_count = 0;
    std::size_t boundary_edges = 0;     // edges with exactly one incident face
    std::size_t non_manifold_edges = 0; // edges with three or more incident faces
};

// Throws std::invalid_argument when indices are out of range or a triangle
// repeats an index.
void validate_mesh(const TriMesh& mesh);

MeshStats mesh_stats(const TriMesh& mesh);

// Area-weighted per-vertex normals, normalized.
std::vector<std::array<double, 3>> compute_vertex_normals(const TriMesh& mesh);

// Wavefront OBJ: v/f (+ optional vn) lines; polygons are fan-triangulated on
// load; normals are recomputed on save.
TriMesh load_obj(const std::string& path);
void save_obj(const TriMesh& mesh, const std::string& path);

} // namespace crowdlod
