#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "qgshape/mesh.hpp"
#include "qgshape/primitives.hpp"

using namespace qgshape;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("validate: closed tetrahedron") {
    auto rep = validate(make_tetrahedron());
    CHECK(rep.vertex_count == 4);
    CHECK(rep.face_count == 4);
    CHECK(rep.boundary_edge_count == 0);
    CHECK(rep.non_manifold_edge_count == 0);
    CHECK(rep.connected_component_count == 1);
    CHECK(rep.degenerate_face_list.empty());
}

TEST_CASE("validate: single triangle has 3 boundary edges") {
    auto rep = validate(make_single_triangle());
    CHECK(rep.boundary_edge_count == 3);
    CHECK(rep.connected_component_count == 1);
}

TEST_CASE("validate: two triangles sharing only a vertex are 2 components") {
    TriangleMesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {-1, 0, 0}, {0, -1, 0}};
    m.faces = {{0, 1, 2}, {0, 3, 4}};
    auto rep = validate(m);
    CHECK(rep.connected_component_count == 2);
}

TEST_CASE("validate: counts invariant under face permutation") {
    TriangleMesh m = make_icosphere(1);
    auto base = validate(m);
    std::mt19937 rng(7);
    std::shuffle(m.faces.begin(), m.faces.end(), rng);
    auto rep = validate(m);
    CHECK(rep.boundary_edge_count == base.boundary_edge_count);
    CHECK(rep.non_manifold_edge_count == base.non_manifold_edge_count);
    CHECK(rep.connected_component_count == base.connected_component_count);
}

TEST_CASE("vertex_fan: planar hexagonal fan is 2*pi") {
    auto fan = vertex_fan(make_hex_fan(), 0);
    CHECK(fan.total_angle == doctest::Approx(2.0 * kPi).epsilon(1e-12));
    CHECK(fan.closed);
    CHECK(fan.incident_angles.size() == 6);
    double sum = std::accumulate(fan.incident_angles.begin(), fan.incident_angles.end(), 0.0);
    CHECK(std::abs(sum - fan.total_angle) < 1e-9);
}

TEST_CASE("vertex_fan: pyramid apex is 4*pi/3") {
    auto fan = vertex_fan(make_square_pyramid(), 4);
    CHECK(fan.total_angle == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-12));
    for (double a : fan.incident_angles) {
        CHECK(a > 0.0);
        CHECK(a < kPi);
    }
}

TEST_CASE("vertex_fan: cube corner is 3*pi/2") {
    TriangleMesh cube = make_cube();
    for (int v = 0; v < 8; ++v) {
        auto fan = vertex_fan(cube, v);
        CHECK(fan.total_angle == doctest::Approx(1.5 * kPi).epsilon(1e-12));
    }
}

TEST_CASE("vertex_fan: rigid-motion invariance of total angle") {
    TriangleMesh m = make_icosphere(1);
    Eigen::Matrix3d rot =
        Eigen::AngleAxisd(0.83, Eigen::Vector3d(1, 2, 3).normalized()).toRotationMatrix();
    TriangleMesh moved = apply_rigid(m, rot, Vec3(4.5, -2.0, 0.25));
    for (int v = 0; v < m.vertex_count(); ++v) {
        double a = vertex_fan(m, v).total_angle;
        double b = vertex_fan(moved, v).total_angle;
        CHECK(std::abs(a - b) < 1e-9);
    }
}

TEST_CASE("vertex_fan: unreferenced vertex throws") {
    TriangleMesh m = make_single_triangle();
    m.vertices.emplace_back(5, 5, 5);
    CHECK_THROWS_AS(vertex_fan(m, 3), Error);
}

TEST_CASE("mesh_fingerprint distinguishes meshes") {
    CHECK(mesh_fingerprint(make_tetrahedron()) != mesh_fingerprint(make_cube()));
    CHECK(mesh_fingerprint(make_tetrahedron()) == mesh_fingerprint(make_tetrahedron()));
}

TEST_CASE("MeshAdjacency basics") {
    MeshAdjacency adj(make_tetrahedron());
    CHECK(adj.connected());
    auto [f1, f2] = adj.edge_faces(0, 1);
    CHECK(f1 >= 0);
    CHECK(f2 >= 0);
    CHECK(adj.neighbors(0).size() == 3);
}
