#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "qgshape/geodesic.hpp"
#include "qgshape/primitives.hpp"

using namespace qgshape;
namespace fs = std::filesystem;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("initial_path: adjacent tetrahedron vertices") {
    MeshAdjacency adj(make_tetrahedron());
    SurfacePath p = initial_path(adj, 0, 1);
    REQUIRE(p.nodes.size() == 2);
    CHECK(p.nodes.front().vertex == 0);
    CHECK(p.nodes.back().vertex == 1);
    CHECK(p.length == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("initial_path: diagonal beats two edges when present") {
    // unit square split along the 0-2 diagonal
    TriangleMesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
    m.faces = {{0, 1, 2}, {0, 2, 3}};
    SurfacePath p = initial_path(m, 0, 2);
    CHECK(p.length == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    REQUIRE(p.nodes.size() == 2);
}

TEST_CASE("initial_path: src == dst rejected") {
    MeshAdjacency adj(make_tetrahedron());
    CHECK_THROWS_AS(initial_path(adj, 1, 1), Error);
}

TEST_CASE("initial_path: disconnected endpoints rejected") {
    TriangleMesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {5, 0, 0}, {6, 0, 0}, {5, 1, 0}};
    m.faces = {{0, 1, 2}, {3, 4, 5}};
    MeshAdjacency adj(m);
    CHECK_THROWS_AS(initial_path(adj, 0, 3), InvalidMeshError);
}

TEST_CASE("crossing_angles: straight segment through planar fan") {
    // hex fan; path 1 -> 0 -> 4 goes straight through the center
    TriangleMesh m = make_hex_fan();
    MeshAdjacency adj(m);
    SurfacePath p;
    p.src = 1;
    p.dst = 4;
    p.nodes = {PathNode::at_vertex(m, 1), PathNode::at_vertex(m, 0), PathNode::at_vertex(m, 4)};
    CrossingAngles c = crossing_angles(adj, p, 1);
    CHECK(c.theta_total == doctest::Approx(2 * kPi).epsilon(1e-12));
    CHECK(c.theta_left == doctest::Approx(kPi).epsilon(1e-12));
    CHECK(c.theta_right == doctest::Approx(kPi).epsilon(1e-12));
    CHECK(discrete_geodesic_curvature(c) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("crossing_angles: right-angle turn at planar vertex") {
    TriangleMesh m = make_hex_fan();
    MeshAdjacency adj(m);
    // 60 degrees per sector: neighbors 1 and 2 are 1 sector apart, etc.
    SurfacePath p;
    p.src = 1;
    p.dst = 3;
    p.nodes = {PathNode::at_vertex(m, 1), PathNode::at_vertex(m, 0), PathNode::at_vertex(m, 3)};
    CrossingAngles c = crossing_angles(adj, p, 1);
    CHECK(c.theta_total == doctest::Approx(2 * kPi).epsilon(1e-12));
    // sides are 2*pi/3 and 4*pi/3
    double lo = std::min(c.theta_left, c.theta_right);
    double hi = std::max(c.theta_left, c.theta_right);
    CHECK(lo == doctest::Approx(2 * kPi / 3).epsilon(1e-12));
    CHECK(hi == doctest::Approx(4 * kPi / 3).epsilon(1e-12));
}

TEST_CASE("crossing_angles: balanced split of the pyramid apex fan") {
    TriangleMesh m = make_square_pyramid();
    MeshAdjacency adj(m);
    // path through the apex from base corner 0 to base corner 2 splits
    // the 4*pi/3 fan symmetrically
    SurfacePath p;
    p.src = 0;
    p.dst = 2;
    p.nodes = {PathNode::at_vertex(m, 0), PathNode::at_vertex(m, 4), PathNode::at_vertex(m, 2)};
    CrossingAngles c = crossing_angles(adj, p, 1);
    CHECK(c.theta_total == doctest::Approx(4 * kPi / 3).epsilon(1e-12));
    CHECK(c.theta_left == doctest::Approx(2 * kPi / 3).epsilon(1e-12));
    CHECK(c.theta_right == doctest::Approx(2 * kPi / 3).epsilon(1e-12));
    CHECK(discrete_geodesic_curvature(c) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("crossing_angles: endpoint node rejected") {
    MeshAdjacency adj(make_tetrahedron());
    SurfacePath p = initial_path(adj, 0, 1);
    CHECK_THROWS_AS(crossing_angles(adj, p, 0), Error);
}

TEST_CASE("discrete_geodesic_curvature: direct substitutions") {
    CHECK(discrete_geodesic_curvature({kPi, kPi, 2 * kPi}) == doctest::Approx(0.0));
    CHECK(discrete_geodesic_curvature({1.5 * kPi, 0.5 * kPi, 2 * kPi}) ==
          doctest::Approx(kPi / 2).epsilon(1e-12));
    CHECK(discrete_geodesic_curvature({2 * kPi / 3, 2 * kPi / 3, 4 * kPi / 3}) ==
          doctest::Approx(0.0));
    CHECK_THROWS_AS(discrete_geodesic_curvature({0, 0, 0}), NumericError);
}

TEST_CASE("straighten: planar strip path becomes the straight segment") {
    TriangleMesh m = make_rect_grid(8, 2, 4.0, 1.0);
    MeshAdjacency adj(m);
    int src = 0;                      // (0,0)
    int dst = 2 * 9 + 8;              // (4,1), opposite corner
    SurfacePath p0 = initial_path(adj, src, dst);
    SurfacePath p = straighten(adj, p0, 1e-3, 100);
    double expect = (m.vertices[dst] - m.vertices[src]).norm();
    CHECK(p.length == doctest::Approx(expect).epsilon(1e-6));
    CHECK(p.converged);
    CHECK(p.max_curvature <= 1e-3);
    CHECK(p.length <= p0.length + 1e-12);
}

TEST_CASE("straighten: already straight path unchanged") {
    TriangleMesh m = make_rect_grid(4, 1, 4.0, 1.0);
    MeshAdjacency adj(m);
    SurfacePath p0 = initial_path(adj, 0, 4); // along the bottom edge
    SurfacePath p = straighten(adj, p0, 1e-3, 100);
    CHECK(std::abs(p.length - p0.length) < 1e-9);
}

TEST_CASE("straighten: cube corner-to-corner approaches sqrt(5)") {
    TriangleMesh m = make_cube_grid(8);
    REQUIRE(m.vertex_count() == 386);
    MeshAdjacency adj(m);
    int src = -1, dst = -1;
    for (int v = 0; v < m.vertex_count(); ++v) {
        if ((m.vertices[v] - Vec3(0, 0, 0)).norm() < 1e-12) src = v;
        if ((m.vertices[v] - Vec3(1, 1, 1)).norm() < 1e-12) dst = v;
    }
    REQUIRE(src >= 0);
    REQUIRE(dst >= 0);
    SurfacePath p0 = initial_path(adj, src, dst);
    SurfacePath p = straighten(adj, p0, 1e-3, 200);
    CHECK(p.length == doctest::Approx(std::sqrt(5.0)).epsilon(0.02));
}

TEST_CASE("straightening monotonicity across iteration budgets") {
    TriangleMesh m = make_icosphere(2);
    MeshAdjacency adj(m);
    SurfacePath p0 = initial_path(adj, 0, 100);
    double prev = p0.length;
    for (int iters : {1, 2, 4, 8, 16, 32}) {
        SurfacePath p = straighten(adj, p0, 1e-9, iters);
        CHECK(p.length <= prev + 1e-12);
        prev = std::min(prev, p.length);
    }
}

TEST_CASE("symmetrize: min rule, idempotence, diagonal") {
    Eigen::MatrixXd raw(2, 2);
    raw << 0, 2, 3, 0;
    GeodesicMatrix g = symmetrize(raw);
    CHECK(g.d(0, 1) == 2.0);
    CHECK(g.d(1, 0) == 2.0);

    GeodesicMatrix again = symmetrize(g.d, g.mesh_fingerprint);
    CHECK(again.d == g.d);

    Eigen::MatrixXd dirty(2, 2);
    dirty << 1e-9, 1, 1, 1e-9;
    CHECK(symmetrize(dirty).d(0, 0) == 0.0);
    CHECK(symmetrize(dirty).d(1, 1) == 0.0);

    Eigen::MatrixXd neg(2, 2);
    neg << 0, -1, 1, 0;
    CHECK_THROWS_AS(symmetrize(neg), NumericError);
}

TEST_CASE("all_pairs: regular tetrahedron is the unit complete graph") {
    GeodesicMatrix g = all_pairs(make_tetrahedron());
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            if (i == j)
                CHECK(g.d(i, j) == 0.0);
            else
                CHECK(g.d(i, j) == doctest::Approx(1.0).epsilon(1e-12));
        }
    CHECK((g.d - g.d.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("all_pairs: icosphere distances track great-circle arcs") {
    TriangleMesh m = make_icosphere(2); // 162 vertices: fast smoke version
    GeodesicMatrix g = all_pairs(m);
    double err_sum = 0.0;
    int cnt = 0;
    for (int i = 0; i < m.vertex_count(); ++i)
        for (int j = i + 1; j < m.vertex_count(); ++j) {
            double arc = std::acos(std::clamp(m.vertices[i].dot(m.vertices[j]), -1.0, 1.0));
            if (arc < 1e-6) continue;
            err_sum += std::abs(g.d(i, j) - arc) / arc;
            ++cnt;
        }
    CHECK(err_sum / cnt <= 0.05);
}

TEST_CASE("all_pairs: lower bound and thread-count determinism") {
    TriangleMesh m = make_icosphere(1);
    GeodesicOptions one;
    one.threads = 1;
    GeodesicOptions four;
    four.threads = 4;
    GeodesicMatrix a = all_pairs(m, one);
    GeodesicMatrix b = all_pairs(m, four);
    CHECK(a.d == b.d);
    for (int i = 0; i < m.vertex_count(); ++i)
        for (int j = 0; j < m.vertex_count(); ++j)
            CHECK(a.d(i, j) >= (m.vertices[i] - m.vertices[j]).norm() - 1e-12);
}

TEST_CASE("all_pairs: permutation equivariance") {
    TriangleMesh m = make_icosphere(1);
    const int n = m.vertex_count();
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937 rng(11);
    std::shuffle(perm.begin(), perm.end(), rng);
    TriangleMesh pm = apply_permutation(m, perm);

    GeodesicMatrix a = all_pairs(m);
    GeodesicMatrix b = all_pairs(pm);
    double max_diff = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            max_diff = std::max(max_diff, std::abs(b.d(perm[i], perm[j]) - a.d(i, j)));
    CHECK(max_diff == 0.0);
}

TEST_CASE("all_pairs: triangle inequality within straightening slack") {
    TriangleMesh m = make_icosphere(1);
    GeodesicOptions opt;
    GeodesicMatrix g = all_pairs(m, opt);
    double max_edge = 0.0;
    for (const auto &f : m.faces)
        for (int s = 0; s < 3; ++s)
            max_edge = std::max(max_edge,
                                (m.vertices[f[s]] - m.vertices[f[(s + 1) % 3]]).norm());
    double slack = 10.0 * opt.tol * max_edge;
    for (int i = 0; i < m.vertex_count(); ++i)
        for (int j = 0; j < m.vertex_count(); ++j)
            for (int k = 0; k < m.vertex_count(); ++k)
                CHECK(g.d(i, k) <= g.d(i, j) + g.d(j, k) + slack);
}

TEST_CASE("all_pairs: disconnected mesh rejected") {
    TriangleMesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {5, 0, 0}, {6, 0, 0}, {5, 1, 0}};
    m.faces = {{0, 1, 2}, {3, 4, 5}};
    CHECK_THROWS_AS(all_pairs(m), InvalidMeshError);
}

TEST_CASE("all_pairs: rigid-motion invariance") {
    TriangleMesh m = make_icosphere(1);
    Eigen::Matrix3d rot =
        Eigen::AngleAxisd(1.1, Eigen::Vector3d(3, 1, 2).normalized()).toRotationMatrix();
    TriangleMesh moved = apply_rigid(m, rot, Vec3(0.7, -1.3, 2.9));
    GeodesicMatrix a = all_pairs(m);
    GeodesicMatrix b = all_pairs(moved);
    double scale = a.d.maxCoeff();
    CHECK(((a.d - b.d).cwiseAbs().maxCoeff() / scale) < 1e-6);
}

TEST_CASE("cache: round-trip, fingerprint, truncation") {
    TriangleMesh m = make_tetrahedron();
    GeodesicMatrix g = all_pairs(m);
    fs::path dir = fs::temp_directory_path() / "qgshape_cache_test";
    fs::create_directories(dir);
    fs::path p = dir / "tetra.qgd";

    cache_write(g, p.string());
    GeodesicMatrix back = cache_read(p.string(), m);
    CHECK(back.d == g.d);
    CHECK(back.mesh_fingerprint == g.mesh_fingerprint);

    CHECK_THROWS_AS(cache_read(p.string(), make_cube()), CacheError);

    // truncate: corrupt
    auto size = fs::file_size(p);
    fs::resize_file(p, size - 9);
    CHECK_THROWS_AS(cache_read(p.string(), m), CacheError);
}
