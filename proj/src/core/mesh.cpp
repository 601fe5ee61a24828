#include "core/mesh.hpp"

#include "core/common.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace crowdlod {

void validate_mesh(const TriMesh& mesh) {
    const int n = int(mesh.vertices.size());
    for (const auto& t : mesh.triangles) {
        for (int k = 0; k < 3; ++k)
            if (t[k] < 0 || t[k] >= n)
                throw std::invalid_argument("mesh: triangle index out of range");
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
            throw std::invalid_argument("mesh: degenerate triangle (repeated index)");
    }
    if (!mesh.normals.empty() && mesh.normals.size() != mesh.vertices.size())
        throw std::invalid_argument("mesh: normal count does not match vertex count");
}

MeshStats mesh_stats(const TriMesh& mesh) {
    MeshStats s;
    s.vertex_count = mesh.vertices.size();
    s.face_count = mesh.triangles.size();
    std::map<std::pair<int, int>, int> edge_faces;
    for (const auto& t : mesh.triangles) {
        for (int k = 0; k < 3; ++k) {
            int a = t[k], b = t[(k + 1) % 3];
            if (a > b) std::swap(a, b);
            ++edge_faces[{a, b}];
        }
    }
    for (const auto& [edge, count] : edge_faces) {
        if (count == 1) ++s.boundary_edges;
        else if (count >= 3) ++s.non_manifold_edges;
    }
    return s;
}

namespace {

std::array<double, 3> cross(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

std::array<double, 3> sub(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

} // namespace

std::vector<std::array<double, 3>> compute_vertex_normals(const TriMesh& mesh) {
    std::vector<std::array<double, 3>> normals(mesh.vertices.size(), {0, 0, 0});
    for (const auto& t : mesh.triangles) {
        const auto n = cross(sub(mesh.vertices[t[1]], mesh.vertices[t[0]]),
                             sub(mesh.vertices[t[2]], mesh.vertices[t[0]]));
        for (int k = 0; k < 3; ++k)
            for (int c = 0; c < 3; ++c) normals[t[k]][c] += n[c]; // cross length = 2*area
    }
    for (auto& n : normals) {
        const double len = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
        if (len > 0)
            for (double& c : n) c /= len;
    }
    return normals;
}

TriMesh load_obj(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open mesh: " + path);

    TriMesh mesh;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "v") {
            std::array<double, 3> v{};
            if (!(ls >> v[0] >> v[1] >> v[2]))
                throw IoError(path + ":" + std::to_string(line_no) + ": bad vertex line");
            mesh.vertices.push_back(v);
        } else if (tag == "f") {
            std::vector<int> poly;
            std::string token;
            while (ls >> token) {
                // "idx", "idx/uv", "idx//n" or "idx/uv/n"; 1-based, negative = from end
                const std::string idx_s = token.substr(0, token.find('/'));
                long idx = 0;
                try {
                    idx = std::stol(idx_s);
                } catch (const std::exception&) {
                    throw IoError(path + ":" + std::to_string(line_no) + ": bad face index");
                }
                if (idx < 0) idx = long(mesh.vertices.size()) + idx + 1;
                if (idx < 1 || idx > long(mesh.vertices.size()))
                    throw IoError(path + ":" + std::to_string(line_no) +
                                  ": face index out of range");
                poly.push_back(int(idx - 1));
            }
            if (poly.size() < 3)
                throw IoError(path + ":" + std::to_string(line_no) + ": face with < 3 vertices");
            for (std::size_t k = 1; k + 1 < poly.size(); ++k)
                mesh.triangles.push_back({poly[0], poly[k], poly[k + 1]});
        }
        // vn/vt/usemtl/o/g/s lines are ignored
    }
    validate_mesh(mesh);
    return mesh;
}

void save_obj(const TriMesh& mesh, const std::string& path) {
    validate_mesh(mesh);
    std::ofstream out(path);
    if (!out) throw IoError("cannot write mesh: " + path);

    char buf[200];
    for (const auto& v : mesh.vertices) {
        std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v[0], v[1], v[2]);
        out << buf;
    }
    const auto normals = compute_vertex_normals(mesh);
    for (const auto& n : normals) {
        std::snprintf(buf, sizeof buf, "vn %.9g %.9g %.9g\n", n[0], n[1], n[2]);
        out << buf;
    }
    for (const auto& t : mesh.triangles) {
        std::snprintf(buf, sizeof buf, "f %d//%d %d//%d %d//%d\n", t[0] + 1, t[0] + 1, t[1] + 1,
                      t[1] + 1, t[2] + 1, t[2] + 1);
        out << buf;
    }
    if (!out) throw IoError("write failed: " + path);
}

} // namespace crowdlod
