#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "qgshape/mesh.hpp"

namespace qgshape {

/// Node of a surface path: either a mesh vertex or a point on an edge
/// interior, pos = (1-t)*A + t*B with edge_a < edge_b.
struct PathNode {
    bool is_vertex = true;
    int vertex = -1;
    int edge_a = -1;
    int edge_b = -1;
    double t = 0.0;
    Vec3 pos{0, 0, 0};

    static PathNode at_vertex(const TriangleMesh &mesh, int v);
    static PathNode on_edge(const TriangleMesh &mesh, int a, int b, double t);
};

struct SurfacePath {
    int src = -1;
    int dst = -1;
    std::vector<PathNode> nodes;
    double length = 0.0;
    bool converged = true;
    int iterations = 0;
    double max_curvature = 0.0;
};

/// Angular split of the fan at an interior path node by the incoming and
/// outgoing segments. theta_total is the full fan angle at the node (2*pi
/// for an edge-interior crossing).
struct CrossingAngles {
    double theta_left = 0.0;
    double theta_right = 0.0;
    double theta_total = 0.0;
};

struct GeodesicMatrix {
    Eigen::MatrixXd d;
    std::uint64_t mesh_fingerprint = 0;

    int n() const { return static_cast<int>(d.rows()); }
};

struct GeodesicOptions {
    double tol = 1e-3; // straightening curvature tolerance (radians)
    int max_iter = 100;
    int threads = 0; // 0 = hardware concurrency
};

SurfacePath initial_path(const MeshAdjacency &adj, int src, int dst);
SurfacePath initial_path(const TriangleMesh &mesh, int src, int dst);

CrossingAngles crossing_angles(const MeshAdjacency &adj, const SurfacePath &path, int node_index);
CrossingAngles crossing_angles(const TriangleMesh &mesh, const SurfacePath &path, int node_index);

/// kappa_g = (2*pi/theta) * (theta/2 - theta_r).
double discrete_geodesic_curvature(const CrossingAngles &crossing);

SurfacePath straighten(const MeshAdjacency &adj, const SurfacePath &path, double tol, int max_iter);
SurfacePath straighten(const TriangleMesh &mesh, const SurfacePath &path, double tol, int max_iter);

/// All-pairs quasi-geodesic operator D_g. Directed paths are computed
/// independently per source vertex and then symmetrized by element-wise min.
GeodesicMatrix all_pairs(const TriangleMesh &mesh, const GeodesicOptions &opt = {});

GeodesicMatrix symmetrize(const Eigen::MatrixXd &raw, std::uint64_t fingerprint = 0);

double path_length(const std::vector<PathNode> &nodes);

// Binary cache, see docs/formats.md.
void cache_write(const GeodesicMatrix &matrix, const std::string &path);
GeodesicMatrix cache_read(const std::string &path, const TriangleMesh &mesh);

} // namespace qgshape
