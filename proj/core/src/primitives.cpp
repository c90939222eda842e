#include "qgshape/primitives.hpp"

#include <cmath>
#include <map>

namespace qgshape {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TriangleMesh make_tetrahedron() {
    TriangleMesh m;
    m.name = "tetra";
    const double s3 = std::sqrt(3.0), s6 = std::sqrt(6.0);
    m.vertices = {
        {0.0, 0.0, 0.0},
        {1.0, 0.0, 0.0},
        {0.5, s3 / 2.0, 0.0},
        {0.5, s3 / 6.0, s6 / 3.0},
    };
    m.faces = {{0, 2, 1}, {0, 1, 3}, {1, 2, 3}, {2, 0, 3}};
    return m;
}

TriangleMesh make_single_triangle() {
    TriangleMesh m;
    m.name = "triangle";
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    m.faces = {{0, 1, 2}};
    return m;
}

TriangleMesh make_hex_fan() {
    TriangleMesh m;
    m.name = "hex_fan";
    m.vertices.emplace_back(0, 0, 0);
    for (int k = 0; k < 6; ++k) {
        double a = kPi / 3.0 * k;
        m.vertices.emplace_back(std::cos(a), std::sin(a), 0.0);
    }
    for (int k = 0; k < 6; ++k) m.faces.push_back({0, 1 + k, 1 + (k + 1) % 6});
    return m;
}

TriangleMesh make_square_pyramid() {
    TriangleMesh m;
    m.name = "pyramid";
    const double h = std::sqrt(2.0) / 2.0;
    m.vertices = {{0.5, 0.5, 0}, {-0.5, 0.5, 0}, {-0.5, -0.5, 0}, {0.5, -0.5, 0}, {0, 0, h}};
    m.faces = {{0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {3, 0, 4}};
    return m;
}

TriangleMesh make_cube() {
    TriangleMesh m;
    m.name = "cube";
    for (int i = 0; i < 8; ++i)
        m.vertices.emplace_back((i & 1) ? 1.0 : 0.0, (i & 2) ? 1.0 : 0.0, (i & 4) ? 1.0 : 0.0);
    m.faces = {
        {0, 2, 1}, {1, 2, 3}, // z = 0
        {4, 5, 6}, {5, 7, 6}, // z = 1
        {0, 1, 4}, {1, 5, 4}, // y = 0
        {2, 6, 3}, {3, 6, 7}, // y = 1
        {0, 4, 2}, {2, 4, 6}, // x = 0
        {1, 3, 5}, {3, 7, 5}, // x = 1
    };
    return m;
}

TriangleMesh make_cube_grid(int k) {
    TriangleMesh m;
    m.name = "cube_grid";
    // Integer lattice keys dedupe shared edge/corner vertices exactly.
    std::map<std::array<int, 3>, int> ids;
    auto vid = [&](std::array<int, 3> key) {
        auto it = ids.find(key);
        if (it != ids.end()) return it->second;
        int id = m.vertex_count();
        ids.emplace(key, id);
        m.vertices.emplace_back(double(key[0]) / k, double(key[1]) / k, double(key[2]) / k);
        return id;
    };
    // axis = fixed coordinate, side = 0 or k; (u,v) span the other two axes.
    for (int axis = 0; axis < 3; ++axis) {
        for (int side = 0; side <= 1; ++side) {
            int fixed = side ? k : 0;
            for (int u = 0; u < k; ++u) {
                for (int v = 0; v < k; ++v) {
                    auto key = [&](int uu, int vv) {
                        std::array<int, 3> c{};
                        c[axis] = fixed;
                        c[(axis + 1) % 3] = uu;
                        c[(axis + 2) % 3] = vv;
                        return c;
                    };
                    int a = vid(key(u, v)), b = vid(key(u + 1, v));
                    int c = vid(key(u + 1, v + 1)), d = vid(key(u, v + 1));
                    if (side) {
                        m.faces.push_back({a, b, c});
                        m.faces.push_back({a, c, d});
                    } else {
                        m.faces.push_back({a, c, b});
                        m.faces.push_back({a, d, c});
                    }
                }
            }
        }
    }
    return m;
}

TriangleMesh make_icosphere(int subdivisions, double radius) {
    TriangleMesh m;
    m.name = "icosphere";
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> vs = {
        {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0},
        {0, -1, t}, {0, 1, t}, {0, -1, -t}, {0, 1, -t},
        {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1},
    };
    for (Vec3 &v : vs) m.vertices.push_back(v.normalized() * radius);
    m.faces = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
        {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
        {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1},
    };
    for (int s = 0; s < subdivisions; ++s) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            auto key = std::minmax(a, b);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            int id = m.vertex_count();
            midpoint.emplace(key, id);
            m.vertices.push_back(((m.vertices[a] + m.vertices[b]) * 0.5).normalized() * radius);
            return id;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(m.faces.size() * 4);
        for (const auto &f : m.faces) {
            int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
            next.push_back({f[0], ab, ca});
            next.push_back({f[1], bc, ab});
            next.push_back({f[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        m.faces = std::move(next);
    }
    return m;
}

TriangleMesh make_rect_grid(int nx, int ny, double width, double height) {
    TriangleMesh m;
    m.name = "rect_grid";
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
            m.vertices.emplace_back(width * i / nx, height * j / ny, 0.0);
    auto vid = [&](int i, int j) { return j * (nx + 1) + i; };
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            m.faces.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
            m.faces.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
        }
    return m;
}

TriangleMesh make_cylinder(int segments, int rings, double radius, double length) {
    TriangleMesh m;
    m.name = "cylinder";
    for (int r = 0; r < rings; ++r) {
        double z = length * r / (rings - 1);
        for (int s = 0; s < segments; ++s) {
            double a = 2.0 * kPi * s / segments;
            m.vertices.emplace_back(radius * std::cos(a), radius * std::sin(a), z);
        }
    }
    auto vid = [&](int r, int s) { return r * segments + (s % segments); };
    for (int r = 0; r + 1 < rings; ++r)
        for (int s = 0; s < segments; ++s) {
            m.faces.push_back({vid(r, s), vid(r, s + 1), vid(r + 1, s + 1)});
            m.faces.push_back({vid(r, s), vid(r + 1, s + 1), vid(r + 1, s)});
        }
    return m;
}

TriangleMesh bend_cylinder(const TriangleMesh &cyl, double z0, double half_zone, double angle) {
    TriangleMesh m = cyl;
    m.name = cyl.name + "_bent";
    const double z1 = z0 - half_zone, z2 = z0 + half_zone;
    const double arc = 2.0 * half_zone;
    const double R = arc / angle; // spine curvature radius inside the zone

    auto frame_at = [&](double phi) {
        // spine point and local axes after turning by phi toward +x
        Vec3 spine(R * (1.0 - std::cos(phi)), 0.0, z1 + R * std::sin(phi));
        Vec3 ex(std::cos(phi), 0.0, -std::sin(phi));
        Vec3 tangent(std::sin(phi), 0.0, std::cos(phi));
        return std::tuple<Vec3, Vec3, Vec3>(spine, ex, tangent);
    };

    for (Vec3 &v : m.vertices) {
        if (v.z() <= z1) continue;
        double x = v.x(), y = v.y();
        if (v.z() < z2) {
            double phi = angle * (v.z() - z1) / arc;
            auto [spine, ex, tangent] = frame_at(phi);
            v = spine + x * ex + Vec3(0, y, 0);
        } else {
            auto [spine, ex, tangent] = frame_at(angle);
            v = spine + (v.z() - z2) * tangent + x * ex + Vec3(0, y, 0);
        }
    }
    return m;
}

TriangleMesh apply_rigid(const TriangleMesh &mesh, const Eigen::Matrix3d &rot, const Vec3 &shift) {
    TriangleMesh m = mesh;
    for (Vec3 &v : m.vertices) v = rot * v + shift;
    return m;
}

TriangleMesh apply_permutation(const TriangleMesh &mesh, const std::vector<int> &perm) {
    TriangleMesh m;
    m.name = mesh.name + "_perm";
    m.vertices.resize(mesh.vertices.size());
    for (int i = 0; i < mesh.vertex_count(); ++i) m.vertices[perm[i]] = mesh.vertices[i];
    m.faces.reserve(mesh.faces.size());
    for (const auto &f : mesh.faces) m.faces.push_back({perm[f[0]], perm[f[1]], perm[f[2]]});
    return m;
}

} // namespace qgshape
