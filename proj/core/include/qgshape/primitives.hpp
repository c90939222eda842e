#pragma once

#include "qgshape/mesh.hpp"

namespace qgshape {

// Regular tetrahedron with unit edge length.
TriangleMesh make_tetrahedron();

TriangleMesh make_single_triangle();

// Planar fan of 6 equilateral triangles around a center vertex (vertex 0).
TriangleMesh make_hex_fan();

// Square pyramid with equilateral side faces; apex is vertex 4. Base left open.
TriangleMesh make_square_pyramid();

// Axis-aligned unit cube, two triangles per face (12 faces, 8 vertices).
TriangleMesh make_cube();

// Unit cube surface with each face split into a k x k grid. 6*k*k+2 vertices.
TriangleMesh make_cube_grid(int k);

// Geodesic sphere from icosahedron subdivision. 10*4^s+2 vertices.
TriangleMesh make_icosphere(int subdivisions, double radius = 1.0);

// Flat rectangular strip in the z=0 plane, (nx+1)*(ny+1) vertices.
TriangleMesh make_rect_grid(int nx, int ny, double width, double height);

// Open tube along +z: `segments` vertices per ring, `rings` rings,
// total height `length`. Vertex id = ring*segments + slot.
TriangleMesh make_cylinder(int segments, int rings, double radius, double length);

// Bends a cylinder made by make_cylinder by `angle` radians around a
// circular arc. Vertices with z below z0-half_zone are untouched; the bend
// ramps linearly across [z0-half_zone, z0+half_zone]; vertices above are
// rigidly rotated. Arc length along the spine is preserved.
TriangleMesh bend_cylinder(const TriangleMesh &cyl, double z0, double half_zone, double angle);

// Rigid motion helper for invariance tests.
TriangleMesh apply_rigid(const TriangleMesh &mesh, const Eigen::Matrix3d &rot, const Vec3 &shift);

// Relabels vertices: new index perm[i] holds old vertex i.
TriangleMesh apply_permutation(const TriangleMesh &mesh, const std::vector<int> &perm);

} // namespace qgshape
