#include "core/decimate.hpp"

#include "core/common.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace crowdlod {

namespace {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Quadric = Eigen::Matrix4d;

constexpr double kBoundaryPenalty = 1e6;
constexpr double kMinAreaSq = 1e-24;

double quadric_error(const Quadric& q, const Vec3& p) {
    const Vec4 v(p.x(), p.y(), p.z(), 1.0);
    return v.dot(q * v);
}

Quadric plane_quadric(const Vec3& n, double d, double weight) {
    const Vec4 p(n.x(), n.y(), n.z(), d);
    return weight * (p * p.transpose());
}

struct Candidate {
    double cost = 0;
    int a = 0, b = 0;      // a < b
    Vec3 placement{0, 0, 0};
    std::uint64_t stamp_a = 0, stamp_b = 0;
};

struct CandidateOrder {
    // min-heap on (cost, a, b): equal costs resolve to the lowest edge index
    bool operator()(const Candidate& lhs, const Candidate& rhs) const {
        if (lhs.cost != rhs.cost) return lhs.cost > rhs.cost;
        if (lhs.a != rhs.a) return lhs.a > rhs.a;
        return lhs.b > rhs.b;
    }
};

class Decimator {
public:
    Decimator(const TriMesh& mesh, std::size_t target_faces, DecimateStats* stats)
        : target_(target_faces), stats_(stats) {
        const std::size_t nv = mesh.vertices.size();
        pos_.resize(nv);
        for (std::size_t i = 0; i < nv; ++i)
            pos_[i] = Vec3(mesh.vertices[i][0], mesh.vertices[i][1], mesh.vertices[i][2]);
        quadric_.assign(nv, Quadric::Zero());
        vertex_alive_.assign(nv, true);
        vertex_boundary_.assign(nv, false);
        version_.assign(nv, 0);
        vfaces_.resize(nv);

        faces_ = mesh.triangles;
        face_alive_.assign(faces_.size(), true);
        alive_faces_ = faces_.size();
        for (std::size_t f = 0; f < faces_.size(); ++f)
            for (int k = 0; k < 3; ++k) vfaces_[faces_[f][k]].push_back(int(f));

        accumulate_quadrics();
        seed_queue();
    }

    TriMesh run() {
        while (alive_faces_ > target_ && !queue_.empty()) {
            Candidate c = queue_.top();
            queue_.pop();
            if (!is_current(c)) continue;
            if (!legal_collapse(c)) continue;
            collapse(c);
        }
        if (alive_faces_ > target_)
            throw NumericError("decimation stalled at " + std::to_string(alive_faces_) +
                               " faces (target " + std::to_string(target_) + ")");
        return rebuild();
    }

private:
    void accumulate_quadrics() {
        // face plane quadrics, area weighted
        std::vector<Vec3> face_normal(faces_.size(), Vec3::Zero());
        for (std::size_t f = 0; f < faces_.size(); ++f) {
            const auto& t = faces_[f];
            const Vec3 e1 = pos_[t[1]] - pos_[t[0]];
            const Vec3 e2 = pos_[t[2]] - pos_[t[0]];
            const Vec3 cr = e1.cross(e2);
            const double area2 = cr.norm(); // twice the area
            if (area2 <= 0) continue;
            const Vec3 n = cr / area2;
            face_normal[f] = n;
            const double d = -n.dot(pos_[t[0]]);
            const Quadric q = plane_quadric(n, d, 0.5 * area2);
            for (int k = 0; k < 3; ++k) quadric_[t[k]] += q;
        }

        // boundary edges get a perpendicular penalty plane on both endpoints
        std::map<std::pair<int, int>, std::pair<int, int>> edge_info; // edge -> (count, face)
        for (std::size_t f = 0; f < faces_.size(); ++f) {
            for (int k = 0; k < 3; ++k) {
                auto e = ordered(faces_[f][k], faces_[f][(k + 1) % 3]);
                auto& info = edge_info[e];
                ++info.first;
                info.second = int(f);
            }
        }
        for (const auto& [e, info] : edge_info) {
            if (info.first != 1) continue;
            boundary_edges_.insert(e);
            vertex_boundary_[e.first] = true;
            vertex_boundary_[e.second] = true;
            const Vec3 edge = pos_[e.second] - pos_[e.first];
            const double len = edge.norm();
            if (len <= 0) continue;
            Vec3 n = edge.cross(face_normal[info.second]);
            const double n_len = n.norm();
            if (n_len <= 0) continue;
            n /= n_len;
            const double d = -n.dot(pos_[e.first]);
            const Quadric q = plane_quadric(n, d, kBoundaryPenalty * len * len);
            quadric_[e.first] += q;
            quadric_[e.second] += q;
        }
    }

    void seed_queue() {
        std::set<std::pair<int, int>> edges;
        for (std::size_t f = 0; f < faces_.size(); ++f)
            for (int k = 0; k < 3; ++k)
                edges.insert(ordered(faces_[f][k], faces_[f][(k + 1) % 3]));
        for (const auto& e : edges) push_candidate(e.first, e.second);
    }

    static std::pair<int, int> ordered(int a, int b) {
        return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
    }

    void push_candidate(int a, int b) {
        if (!vertex_alive_[a] || !vertex_alive_[b]) return;
        const bool a_bnd = vertex_boundary_[a];
        const bool b_bnd = vertex_boundary_[b];
        const bool edge_bnd = boundary_edges_.count(ordered(a, b)) > 0;
        // interior edge joining two separate boundary loops/arcs: collapsing
        // it would pinch the border, so it is never offered
        if (a_bnd && b_bnd && !edge_bnd) return;

        const Quadric q = quadric_[a] + quadric_[b];
        Candidate c;
        c.a = std::min(a, b);
        c.b = std::max(a, b);
        c.stamp_a = version_[c.a];
        c.stamp_b = version_[c.b];

        if (a_bnd != b_bnd) {
            // keep the border where it is
            c.placement = a_bnd ? pos_[a] : pos_[b];
            c.cost = quadric_error(q, c.placement);
        } else {
            const Vec3 candidates[3] = {pos_[c.a], pos_[c.b],
                                        0.5 * (pos_[c.a] + pos_[c.b])};
            c.placement = candidates[0];
            c.cost = quadric_error(q, candidates[0]);
            for (int i = 1; i < 3; ++i) {
                const double cost = quadric_error(q, candidates[i]);
                if (cost < c.cost) {
                    c.cost = cost;
                    c.placement = candidates[i];
                }
            }
        }
        queue_.push(c);
    }

    bool is_current(const Candidate& c) const {
        if (!vertex_alive_[c.a] || !vertex_alive_[c.b]) return false;
        if (version_[c.a] != c.stamp_a || version_[c.b] != c.stamp_b) return false;
        // the edge must still exist
        for (int f : vfaces_[c.a]) {
            if (!face_alive_[f]) continue;
            const auto& t = faces_[f];
            if (t[0] == c.b || t[1] == c.b || t[2] == c.b) return true;
        }
        return false;
    }

    bool legal_collapse(const Candidate& c) const {
        // faces spanning the edge; their third vertices are the wings
        std::vector<int> shared_faces;
        std::unordered_set<int> wings;
        for (int f : vfaces_[c.a]) {
            if (!face_alive_[f]) continue;
            const auto& t = faces_[f];
            if (t[0] == c.b || t[1] == c.b || t[2] == c.b) {
                shared_faces.push_back(f);
                for (int k = 0; k < 3; ++k)
                    if (t[k] != c.a && t[k] != c.b) wings.insert(t[k]);
            }
        }
        if (shared_faces.size() > 2) return false; // non-manifold edge

        // link condition: every common neighbor must be a wing vertex
        std::unordered_set<int> na = neighbors(c.a);
        for (int v : neighbors(c.b))
            if (na.count(v) && !wings.count(v)) return false;

        // no face may flip or collapse to zero area
        return !flips_normal(c.a, c.b, c.placement) && !flips_normal(c.b, c.a, c.placement);
    }

    std::unordered_set<int> neighbors(int v) const {
        std::unordered_set<int> out;
        for (int f : vfaces_[v]) {
            if (!face_alive_[f]) continue;
            for (int k = 0; k < 3; ++k)
                if (faces_[f][k] != v) out.insert(faces_[f][k]);
        }
        return out;
    }

    // Would moving `moved` to p flip/degenerate any face incident to it
    // (excluding faces also containing `other`, which are removed)?
    bool flips_normal(int moved, int other, const Vec3& p) const {
        for (int f : vfaces_[moved]) {
            if (!face_alive_[f]) continue;
            const auto& t = faces_[f];
            if (t[0] == other || t[1] == other || t[2] == other) continue;
            Vec3 v[3];
            Vec3 w[3];
            for (int k = 0; k < 3; ++k) {
                v[k] = pos_[t[k]];
                w[k] = (t[k] == moved) ? p : pos_[t[k]];
            }
            const Vec3 n_old = (v[1] - v[0]).cross(v[2] - v[0]);
            const Vec3 n_new = (w[1] - w[0]).cross(w[2] - w[0]);
            if (n_new.squaredNorm() < kMinAreaSq) return true;
            if (n_old.dot(n_new) <= 0) return true;
        }
        return false;
    }

    void collapse(const Candidate& c) {
        const int a = c.a, b = c.b;
        pos_[a] = c.placement;
        quadric_[a] += quadric_[b];
        if (vertex_boundary_[b]) vertex_boundary_[a] = true;

        for (int f : vfaces_[b]) {
            if (!face_alive_[f]) continue;
            auto& t = faces_[f];
            if (t[0] == a || t[1] == a || t[2] == a) {
                face_alive_[f] = false;
                --alive_faces_;
            } else {
                for (int k = 0; k < 3; ++k)
                    if (t[k] == b) t[k] = a;
                vfaces_[a].push_back(f);
            }
        }
        vfaces_[b].clear();
        vertex_alive_[b] = false;
        ++version_[a];
        ++version_[b];

        // track boundary edges migrating from b to a
        std::vector<std::pair<int, int>> migrated;
        for (auto it = boundary_edges_.begin(); it != boundary_edges_.end();) {
            if (it->first == b || it->second == b) {
                int u = it->first == b ? it->second : it->first;
                it = boundary_edges_.erase(it);
                if (u != a) migrated.push_back(ordered(a, u));
            } else {
                ++it;
            }
        }
        boundary_edges_.insert(migrated.begin(), migrated.end());

        if (stats_) {
            ++stats_->collapses;
            stats_->collapse_costs.push_back(c.cost);
        }

        // refresh candidates across the two-ring: the surviving vertex, its
        // neighbors, and every edge of their faces
        std::unordered_set<int> ring = neighbors(a);
        ring.insert(a);
        for (int v : ring) ++version_[v];
        std::set<std::pair<int, int>> edges;
        for (int v : ring) {
            for (int f : vfaces_[v]) {
                if (!face_alive_[f]) continue;
                for (int k = 0; k < 3; ++k)
                    edges.insert(ordered(faces_[f][k], faces_[f][(k + 1) % 3]));
            }
        }
        for (const auto& e : edges) push_candidate(e.first, e.second);
    }

    TriMesh rebuild() const {
        TriMesh out;
        std::vector<int> remap(pos_.size(), -1);
        for (std::size_t f = 0; f < faces_.size(); ++f) {
            if (!face_alive_[f]) continue;
            std::array<int, 3> tri{};
            for (int k = 0; k < 3; ++k) {
                const int v = faces_[f][k];
                if (remap[v] < 0) {
                    remap[v] = int(out.vertices.size());
                    out.vertices.push_back({pos_[v].x(), pos_[v].y(), pos_[v].z()});
                }
                tri[k] = remap[v];
            }
            out.triangles.push_back(tri);
        }
        return out;
    }

    std::size_t target_;
    DecimateStats* stats_;
    std::vector<Vec3> pos_;
    std::vector<Quadric> quadric_;
    std::vector<bool> vertex_alive_;
    std::vector<bool> vertex_boundary_;
    std::vector<std::uint64_t> version_;
    std::vector<std::vector<int>> vfaces_;
    std::vector<std::array<int, 3>> faces_;
    std::vector<bool> face_alive_;
    std::size_t alive_faces_ = 0;
    std::set<std::pair<int, int>> boundary_edges_;
    std::priority_queue<Candidate, std::vector<Candidate>, CandidateOrder> queue_;
};

} // namespace

TriMesh decimate(const TriMesh& mesh, double ratio, DecimateStats* stats) {
    validate_mesh(mesh);
    if (!(ratio > 0.0 && ratio <= 1.0))
        throw std::invalid_argument("decimate: ratio must be in (0, 1]");
    if (ratio == 1.0) return mesh;

    const std::size_t target = std::size_t(std::ceil(ratio * double(mesh.face_count())));
    if (target < 4) throw std::invalid_argument("decimate: target below 4 faces");

    Decimator d(mesh, target, stats);
    return d.run();
}

std::vector<TriMesh> mesh_lod_chain(const TriMesh& mesh, const std::vector<double>& ratios) {
    if (ratios.empty()) throw std::invalid_argument("mesh_lod_chain: no ratios");
    std::vector<TriMesh> chain;
    chain.reserve(ratios.size());
    for (double r : ratios) chain.push_back(decimate(mesh, r));
    return chain;
}

void decimate_obj_file(const std::string& in_path, const std::vector<double>& ratios,
                       const std::string& out_dir) {
    const TriMesh mesh = load_obj(in_path);
    const std::vector<TriMesh> chain = mesh_lod_chain(mesh, ratios);
    std::filesystem::create_directories(out_dir);
    for (std::size_t i = 0; i < chain.size(); ++i) {
        const auto path = std::filesystem::path(out_dir) / ("lod" + std::to_string(i) + ".obj");
        save_obj(chain[i], path.string());
    }
}

} // namespace crowdlod
