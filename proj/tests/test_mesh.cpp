#include "core/common.hpp"
#include "core/decimate.hpp"
#include "core/demo.hpp"
#include "core/mesh.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

using namespace crowdlod;

namespace {

TriMesh cube() {
    TriMesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                  {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
    m.triangles = {{0, 2, 1}, {0, 3, 2}, {4, 5, 6}, {4, 6, 7}, {0, 1, 5}, {0, 5, 4},
                   {2, 3, 7}, {2, 7, 6}, {1, 2, 6}, {1, 6, 5}, {3, 0, 4}, {3, 4, 7}};
    return m;
}

// regular grid of coplanar triangles (z = 0), n x n vertices
TriMesh planar_grid(int n) {
    TriMesh m;
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) m.vertices.push_back({double(x), double(y), 0.0});
    const auto at = [n](int x, int y) { return y * n + x; };
    for (int y = 0; y + 1 < n; ++y)
        for (int x = 0; x + 1 < n; ++x) {
            m.triangles.push_back({at(x, y), at(x + 1, y), at(x + 1, y + 1)});
            m.triangles.push_back({at(x, y), at(x + 1, y + 1), at(x, y + 1)});
        }
    return m;
}

void check_valid(const TriMesh& m) {
    validate_mesh(m); // throws on out-of-range or repeated indices
    for (const auto& t : m.triangles) {
        CHECK(t[0] != t[1]);
        CHECK(t[1] != t[2]);
        CHECK(t[0] != t[2]);
    }
}

} // namespace

TEST_CASE("mesh_stats on canonical shapes") {
    SUBCASE("closed cube") {
        const MeshStats s = mesh_stats(cube());
        CHECK(s.vertex_count == 8);
        CHECK(s.face_count == 12);
        CHECK(s.boundary_edges == 0);
        CHECK(s.non_manifold_edges == 0);
    }
    SUBCASE("single triangle") {
        TriMesh m;
        m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
        m.triangles = {{0, 1, 2}};
        const MeshStats s = mesh_stats(m);
        CHECK(s.vertex_count == 3);
        CHECK(s.face_count == 1);
        CHECK(s.boundary_edges == 3);
        CHECK(s.non_manifold_edges == 0);
    }
    SUBCASE("two triangles sharing an edge") {
        TriMesh m;
        m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}};
        m.triangles = {{0, 1, 2}, {1, 3, 2}};
        const MeshStats s = mesh_stats(m);
        CHECK(s.vertex_count == 4);
        CHECK(s.face_count == 2);
        CHECK(s.boundary_edges == 4);
        CHECK(s.non_manifold_edges == 0);
    }
}

TEST_CASE("validate_mesh rejects malformed meshes") {
    TriMesh bad_index;
    bad_index.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    bad_index.triangles = {{0, 1, 3}};
    CHECK_THROWS_AS(validate_mesh(bad_index), std::invalid_argument);

    TriMesh repeated;
    repeated.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    repeated.triangles = {{0, 1, 1}};
    CHECK_THROWS_AS(validate_mesh(repeated), std::invalid_argument);
}

TEST_CASE("decimate at ratio 1 returns the mesh unchanged") {
    const TriMesh m = cube();
    const TriMesh out = decimate(m, 1.0);
    CHECK(out.vertices == m.vertices);
    CHECK(out.triangles == m.triangles);
}

TEST_CASE("decimate rejects bad arguments") {
    CHECK_THROWS_AS(decimate(cube(), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(decimate(cube(), 1.5), std::invalid_argument);
    CHECK_THROWS_AS(decimate(cube(), 0.1), std::invalid_argument); // target < 4 faces
}

TEST_CASE("80-face icosphere halves to 38-40 valid faces") {
    const TriMesh sphere = demo_icosphere(1);
    REQUIRE(sphere.face_count() == 80);
    const TriMesh out = decimate(sphere, 0.5);
    check_valid(out);
    CHECK(out.face_count() >= 38);
    CHECK(out.face_count() <= 40);
}

TEST_CASE("watertight input stays watertight") {
    const TriMesh sphere = demo_icosphere(2); // 320 faces, closed
    REQUIRE(mesh_stats(sphere).boundary_edges == 0);
    const TriMesh out = decimate(sphere, 0.25);
    check_valid(out);
    const MeshStats s = mesh_stats(out);
    CHECK(s.boundary_edges == 0);
    CHECK(s.non_manifold_edges == 0);
}

TEST_CASE("planar grid stays exactly planar under decimation") {
    const TriMesh grid = planar_grid(10); // 162 coplanar faces
    const TriMesh out = decimate(grid, 0.25);
    check_valid(out);
    for (const auto& v : out.vertices) CHECK(v[2] == 0.0);
}

TEST_CASE("collapse costs are non-negative and cumulative cost is monotone") {
    DecimateStats stats;
    decimate(demo_icosphere(2), 0.25, &stats);
    CHECK(stats.collapses > 0);
    double running = 0.0;
    for (double c : stats.collapse_costs) {
        CHECK(c >= -1e-9);
        const double next = running + std::max(c, 0.0);
        CHECK(next >= running);
        running = next;
    }
}

TEST_CASE("face counts respect the ratio ladder") {
    const TriMesh sphere = demo_icosphere(3); // 1280 faces
    const std::vector<double> ratios = {1.0, 0.5, 0.25, 0.125};
    const std::vector<TriMesh> chain = mesh_lod_chain(sphere, ratios);
    REQUIRE(chain.size() == 4);
    std::size_t prev = SIZE_MAX;
    for (std::size_t k = 0; k < chain.size(); ++k) {
        check_valid(chain[k]);
        const auto target = std::size_t(std::ceil(ratios[k] * double(sphere.face_count())));
        CHECK(chain[k].face_count() <= target);
        CHECK(chain[k].face_count() + 2 >= target);
        CHECK(chain[k].face_count() <= prev);
        prev = chain[k].face_count();
    }
}

TEST_CASE("lod_chain with single identity ratio") {
    const TriMesh sphere = demo_icosphere(1);
    const std::vector<TriMesh> chain = mesh_lod_chain(sphere, {1.0});
    REQUIRE(chain.size() == 1);
    CHECK(chain[0].triangles == sphere.triangles);
}

TEST_CASE("decimated face count is monotone in the ratio") {
    const TriMesh sphere = demo_icosphere(2);
    const TriMesh half = decimate(sphere, 0.5);
    const TriMesh eighth = decimate(sphere, 0.125);
    CHECK(half.face_count() >= eighth.face_count());
}

TEST_CASE("obj round trip preserves geometry and connectivity") {
    namespace fs = std::filesystem;
    const TriMesh sphere = demo_icosphere(1, 2.5);
    const fs::path path = fs::temp_directory_path() / "crowdlod_rt.obj";
    save_obj(sphere, path.string());
    const TriMesh back = load_obj(path.string());
    REQUIRE(back.vertex_count() == sphere.vertex_count());
    REQUIRE(back.face_count() == sphere.face_count());
    CHECK(back.triangles == sphere.triangles);
    for (std::size_t i = 0; i < back.vertices.size(); ++i)
        for (int c = 0; c < 3; ++c)
            CHECK(back.vertices[i][c] == doctest::Approx(sphere.vertices[i][c]).epsilon(1e-9));
    fs::remove(path);
}

TEST_CASE("obj loader triangulates quads and validates indices") {
    namespace fs = std::filesystem;
    const fs::path path = fs::temp_directory_path() / "crowdlod_quad.obj";
    {
        std::ofstream out(path);
        out << "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n";
    }
    const TriMesh m = load_obj(path.string());
    CHECK(m.face_count() == 2);
    fs::remove(path);
    CHECK_THROWS_AS(load_obj("/nonexistent/mesh.obj"), IoError);
}

TEST_CASE("decimate workflow writes one obj per ratio") {
    namespace fs = std::filesystem;
    const fs::path base = fs::temp_directory_path() / "crowdlod_decimate_dir";
    fs::remove_all(base);
    fs::create_directories(base);
    const fs::path in = base / "in.obj";
    save_obj(demo_icosphere(2), in.string());
    decimate_obj_file(in.string(), {1.0, 0.5}, (base / "out").string());
    CHECK(fs::exists(base / "out" / "lod0.obj"));
    CHECK(fs::exists(base / "out" / "lod1.obj"));
    const TriMesh lod1 = load_obj((base / "out" / "lod1.obj").string());
    CHECK(lod1.face_count() <= 160);
    fs::remove_all(base);
}
