#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "qgshape/errors.hpp"

namespace qgshape {

using Vec3 = Eigen::Vector3d;

/// Triangulated 3D surface mesh. Immutable after construction; all
/// downstream operators treat it as shared read-only state.
struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> faces;
    std::string name;

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int face_count() const { return static_cast<int>(faces.size()); }
};

struct ValidationReport {
    int vertex_count = 0;
    int face_count = 0;
    int boundary_edge_count = 0;
    int non_manifold_edge_count = 0;
    int connected_component_count = 0;
    int unreferenced_vertex_count = 0;
    std::vector<int> degenerate_face_list;

    bool manifold() const { return non_manifold_edge_count == 0; }
};

/// Angle fan around a vertex. `incident_angles` follows a consistent
/// circulation when the fan is manifold; `spokes[i]` is the neighbor vertex
/// starting the i-th corner, and `spoke_angles[i]` its accumulated angular
/// coordinate (spoke_angles[0] == 0).
struct VertexFan {
    int center = -1;
    std::vector<double> incident_angles;
    double total_angle = 0.0;
    bool closed = false;
    std::vector<int> spokes;
    std::vector<int> fan_faces;
    std::vector<double> spoke_angles;
};

ValidationReport validate(const TriangleMesh &mesh);

VertexFan vertex_fan(const TriangleMesh &mesh, int v);

/// Connectivity queries shared by the geodesic machinery. Built once per
/// mesh; immutable afterwards.
class MeshAdjacency {
public:
    explicit MeshAdjacency(const TriangleMesh &mesh);

    const TriangleMesh &mesh() const { return *mesh_; }

    // Faces adjacent to undirected edge (a,b); -1 when absent.
    std::pair<int, int> edge_faces(int a, int b) const;
    bool has_edge(int a, int b) const;

    const std::vector<int> &vertex_faces(int v) const { return vertex_faces_[v]; }
    const std::vector<int> &neighbors(int v) const { return neighbors_[v]; }
    const VertexFan &fan(int v) const { return fans_[v]; }

    double edge_length(int a, int b) const;

    bool connected() const { return connected_; }

private:
    const TriangleMesh *mesh_;
    std::vector<std::vector<int>> vertex_faces_;
    std::vector<std::vector<int>> neighbors_;
    std::vector<VertexFan> fans_;
    // canonical edge key (min,max) -> face pair
    std::vector<std::pair<int, int>> edge_face_pairs_;
    std::vector<std::vector<std::pair<int, int>>> edge_index_; // per min-vertex: (max, slot)
    bool connected_ = false;

    int edge_slot(int a, int b) const;
};

/// FNV-1a over the canonical serialization (vertex doubles + face indices).
/// Keys the geodesic cache to its source mesh.
std::uint64_t mesh_fingerprint(const TriangleMesh &mesh);

// Corner angle at vertex `at` of face f (radians).
double corner_angle(const TriangleMesh &mesh, int face, int at);

} // namespace qgshape
