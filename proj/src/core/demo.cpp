#include "core/demo.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace crowdlod {

namespace {

struct Vec2 {
    double x, y;
};

double dist_point_segment(Vec2 p, Vec2 a, Vec2 b) {
    const double abx = b.x - a.x, aby = b.y - a.y;
    const double len2 = abx * abx + aby * aby;
    double t = len2 > 0 ? ((p.x - a.x) * abx + (p.y - a.y) * aby) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double dx = p.x - (a.x + t * abx);
    const double dy = p.y - (a.y + t * aby);
    return std::sqrt(dx * dx + dy * dy);
}

struct Capsule {
    Vec2 a, b;
    double radius;
    std::uint8_t color[3];
};

} // namespace

std::vector<ImageRGBA> demo_sprite_frames(int frame_count, int frame_size) {
    const double s = frame_size;
    const double cx = 0.5 * s;
    const double ground = 0.80 * s;

    std::vector<ImageRGBA> frames;
    frames.reserve(std::size_t(frame_count));
    for (int f = 0; f < frame_count; ++f) {
        const double phase = 2.0 * M_PI * f / frame_count;
        const double swing = std::sin(phase);

        std::vector<Capsule> parts;
        // head + torso, fixed
        parts.push_back({{cx, 0.285 * s}, {cx, 0.30 * s}, 0.055 * s, {235, 200, 160}});
        parts.push_back({{cx, 0.40 * s}, {cx, 0.60 * s}, 0.065 * s, {45, 85, 165}});
        // arms and legs swing mirrored so the silhouette stays centered
        const double arm = 0.16 * s * swing;
        parts.push_back({{cx, 0.44 * s}, {cx + arm, 0.60 * s}, 0.028 * s, {205, 65, 60}});
        parts.push_back({{cx, 0.44 * s}, {cx - arm, 0.60 * s}, 0.028 * s, {205, 65, 60}});
        const double leg = 0.12 * s * swing;
        parts.push_back({{cx, 0.62 * s}, {cx + leg, ground}, 0.034 * s, {60, 145, 70}});
        parts.push_back({{cx, 0.62 * s}, {cx - leg, ground}, 0.034 * s, {60, 145, 70}});

        ImageRGBA img(frame_size, frame_size);
        for (int y = 0; y < frame_size; ++y) {
            for (int x = 0; x < frame_size; ++x) {
                // 2x2 subsamples give light edge antialiasing
                int hits = 0;
                const Capsule* hit_part = nullptr;
                for (int sub = 0; sub < 4; ++sub) {
                    const Vec2 p{x + 0.25 + 0.5 * (sub % 2), y + 0.25 + 0.5 * (sub / 2)};
                    for (const Capsule& part : parts) {
                        if (dist_point_segment(p, part.a, part.b) <= part.radius) {
                            ++hits;
                            hit_part = &part;
                            break;
                        }
                    }
                }
                if (hits == 0) continue;
                img.set_pixel(x, y, hit_part->color[0], hit_part->color[1], hit_part->color[2],
                              std::uint8_t(hits * 255 / 4));
            }
        }
        frames.push_back(std::move(img));
    }
    return frames;
}

TriMesh demo_uv_sphere(int stacks, int slices, double radius) {
    TriMesh mesh;
    mesh.vertices.push_back({0, radius, 0}); // north pole
    for (int i = 1; i < stacks; ++i) {
        const double theta = M_PI * i / stacks;
        for (int j = 0; j < slices; ++j) {
            const double phi = 2.0 * M_PI * j / slices;
            mesh.vertices.push_back({radius * std::sin(theta) * std::cos(phi),
                                     radius * std::cos(theta),
                                     radius * std::sin(theta) * std::sin(phi)});
        }
    }
    mesh.vertices.push_back({0, -radius, 0}); // south pole

    const auto ring = [&](int i, int j) { return 1 + (i - 1) * slices + (j % slices); };
    for (int j = 0; j < slices; ++j) mesh.triangles.push_back({0, ring(1, j + 1), ring(1, j)});
    for (int i = 1; i < stacks - 1; ++i) {
        for (int j = 0; j < slices; ++j) {
            mesh.triangles.push_back({ring(i, j), ring(i, j + 1), ring(i + 1, j)});
            mesh.triangles.push_back({ring(i, j + 1), ring(i + 1, j + 1), ring(i + 1, j)});
        }
    }
    const int south = int(mesh.vertices.size()) - 1;
    for (int j = 0; j < slices; ++j)
        mesh.triangles.push_back({south, ring(stacks - 1, j), ring(stacks - 1, j + 1)});
    return mesh;
}

TriMesh demo_icosphere(int subdivisions, double radius) {
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    TriMesh mesh;
    mesh.vertices = {{-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0}, {0, -1, t},  {0, 1, t},
                     {0, -1, -t}, {0, 1, -t}, {t, 0, -1},  {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
    mesh.triangles = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

    for (int step = 0; step < subdivisions; ++step) {
        std::map<std::pair<int, int>, int> midpoint;
        const auto mid = [&](int a, int b) {
            const auto key = std::minmax(a, b);
            const auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            const auto& va = mesh.vertices[std::size_t(a)];
            const auto& vb = mesh.vertices[std::size_t(b)];
            mesh.vertices.push_back(
                {(va[0] + vb[0]) / 2, (va[1] + vb[1]) / 2, (va[2] + vb[2]) / 2});
            const int idx = int(mesh.vertices.size()) - 1;
            midpoint[key] = idx;
            return idx;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(mesh.triangles.size() * 4);
        for (const auto& tri : mesh.triangles) {
            const int ab = mid(tri[0], tri[1]);
            const int bc = mid(tri[1], tri[2]);
            const int ca = mid(tri[2], tri[0]);
            next.push_back({tri[0], ab, ca});
            next.push_back({tri[1], bc, ab});
            next.push_back({tri[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        mesh.triangles = std::move(next);
    }

    for (auto& v : mesh.vertices) {
        const double len = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
        for (double& c : v) c *= radius / len;
    }
    return mesh;
}

GaussianCloud demo_splat_cloud(std::size_t count, std::uint32_t seed, int sh_degree) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    GaussianCloud cloud;
    cloud.sh_degree = sh_degree;
    cloud.positions.reserve(3 * count);
    cloud.log_scales.reserve(3 * count);
    cloud.rotations.reserve(4 * count);
    cloud.opacity_logits.reserve(count);
    cloud.sh_coeffs.reserve(cloud.sh_width() * count);

    for (std::size_t i = 0; i < count; ++i) {
        for (int c = 0; c < 3; ++c) cloud.positions.push_back(float(2.0 * unit(rng) - 1.0));
        for (int c = 0; c < 3; ++c) cloud.log_scales.push_back(float(-5.0 + 2.0 * unit(rng)));
        double q[4];
        double norm = 0;
        do {
            norm = 0;
            for (double& v : q) {
                v = gauss(rng);
                norm += v * v;
            }
        } while (norm < 1e-12);
        norm = std::sqrt(norm);
        for (double v : q) cloud.rotations.push_back(float(v / norm));
        // alpha spread over (0.001, 0.999): logit of a uniform draw
        const double alpha = 0.001 + 0.998 * unit(rng);
        cloud.opacity_logits.push_back(float(std::log(alpha / (1.0 - alpha))));
        for (std::size_t c = 0; c < cloud.sh_width(); ++c)
            cloud.sh_coeffs.push_back(float(gauss(rng) * 0.3));
    }
    return cloud;
}

std::vector<stats::TrialRecord> demo_trials(int subjects, int repetitions, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::vector<stats::TrialRecord> trials;
    for (int s = 0; s < subjects; ++s) {
        char id[16];
        std::snprintf(id, sizeof id, "S%02d", s + 1);
        for (int mode = 0; mode < 2; ++mode) {
            for (int dist = 0; dist < 5; ++dist) {
                for (int lod = 0; lod < 4; ++lod) {
                    for (int rep = 0; rep < repetitions; ++rep) {
                        // mesh favored near/high-detail, gaussian and impostor
                        // gain as footprint and detail drop
                        double w_g = 0.6 + 0.35 * dist + 0.30 * lod;
                        double w_i = 0.2 + 0.25 * dist + 0.45 * lod;
                        double w_m = 3.0 - 0.35 * dist - 0.40 * lod;
                        double w_n = 0.5 + 0.10 * dist;
                        w_m = std::max(w_m, 0.15);
                        std::discrete_distribution<int> pick({w_g, w_i, w_m, w_n});
                        stats::TrialRecord t;
                        t.subject = id;
                        t.mode = mode;
                        t.distance = dist;
                        t.lod = lod;
                        t.chosen = pick(rng);
                        t.repetition = rep;
                        trials.push_back(std::move(t));
                    }
                }
            }
        }
    }
    return trials;
}

} // namespace crowdlod
