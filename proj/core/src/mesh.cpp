#include "qgshape/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <numeric>

namespace qgshape {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

std::uint64_t fnv1a(const void *data, std::size_t len, std::uint64_t h) {
    const auto *p = static_cast<const unsigned char *>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace

double corner_angle(const TriangleMesh &mesh, int face, int at) {
    const auto &f = mesh.faces[face];
    int slot = -1;
    for (int s = 0; s < 3; ++s)
        if (f[s] == at) slot = s;
    if (slot < 0) throw InvalidMeshError("corner_angle: vertex not in face");
    const Vec3 &p = mesh.vertices[at];
    Vec3 u = mesh.vertices[f[(slot + 1) % 3]] - p;
    Vec3 w = mesh.vertices[f[(slot + 2) % 3]] - p;
    double nu = u.norm(), nw = w.norm();
    if (nu <= 0.0 || nw <= 0.0) throw InvalidMeshError("corner_angle: zero-length edge");
    double c = u.dot(w) / (nu * nw);
    c = std::clamp(c, -1.0, 1.0);
    return std::acos(c);
}

ValidationReport validate(const TriangleMesh &mesh) {
    ValidationReport rep;
    rep.vertex_count = mesh.vertex_count();
    rep.face_count = mesh.face_count();

    std::map<std::pair<int, int>, std::vector<int>> edges;
    std::vector<char> referenced(mesh.vertices.size(), 0);
    for (int fi = 0; fi < mesh.face_count(); ++fi) {
        const auto &f = mesh.faces[fi];
        if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) {
            rep.degenerate_face_list.push_back(fi);
            continue;
        }
        Vec3 a = mesh.vertices[f[1]] - mesh.vertices[f[0]];
        Vec3 b = mesh.vertices[f[2]] - mesh.vertices[f[0]];
        if (a.cross(b).norm() <= 0.0) rep.degenerate_face_list.push_back(fi);
        for (int s = 0; s < 3; ++s) {
            referenced[f[s]] = 1;
            int u = f[s], v = f[(s + 1) % 3];
            edges[{std::min(u, v), std::max(u, v)}].push_back(fi);
        }
    }
    for (char r : referenced)
        if (!r) ++rep.unreferenced_vertex_count;

    UnionFind uf(std::max(1, mesh.face_count()));
    for (const auto &[e, fs] : edges) {
        if (fs.size() == 1) ++rep.boundary_edge_count;
        if (fs.size() > 2) ++rep.non_manifold_edge_count;
        for (std::size_t i = 1; i < fs.size(); ++i) uf.unite(fs[0], fs[i]);
    }
    // Components over face-edge connectivity.
    std::vector<int> roots;
    for (int fi = 0; fi < mesh.face_count(); ++fi) roots.push_back(uf.find(fi));
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    rep.connected_component_count = static_cast<int>(roots.size());
    return rep;
}

VertexFan vertex_fan(const TriangleMesh &mesh, int v) {
    if (v < 0 || v >= mesh.vertex_count())
        throw InvalidMeshError("vertex_fan: index out of range");

    // Incident faces as unordered spoke pairs; the walk below does not
    // depend on face orientation.
    std::vector<std::array<int, 3>> corners; // (spoke_a, spoke_b, face)
    for (int fi = 0; fi < mesh.face_count(); ++fi) {
        const auto &f = mesh.faces[fi];
        for (int s = 0; s < 3; ++s)
            if (f[s] == v) corners.push_back({f[(s + 1) % 3], f[(s + 2) % 3], fi});
    }
    if (corners.empty()) throw InvalidMeshError("vertex_fan: unreferenced vertex");

    VertexFan fan;
    fan.center = v;

    std::map<int, std::vector<int>> by_spoke; // spoke vertex -> corner slots
    for (std::size_t i = 0; i < corners.size(); ++i) {
        by_spoke[corners[i][0]].push_back(static_cast<int>(i));
        by_spoke[corners[i][1]].push_back(static_cast<int>(i));
    }
    bool manifold_fan = true;
    int boundary_spokes = 0;
    for (const auto &[s, slots] : by_spoke) {
        if (slots.size() > 2) manifold_fan = false;
        if (slots.size() == 1) ++boundary_spokes;
    }
    bool closed = (boundary_spokes == 0);
    if (!manifold_fan || (boundary_spokes != 0 && boundary_spokes != 2)) {
        // Non-manifold fan: keep file order; angle sum is still exact.
        double acc = 0.0;
        for (const auto &c : corners) {
            fan.spokes.push_back(c[0]);
            fan.fan_faces.push_back(c[2]);
            fan.spoke_angles.push_back(acc);
            double ang = corner_angle(mesh, c[2], v);
            fan.incident_angles.push_back(ang);
            acc += ang;
        }
        fan.total_angle = acc;
        fan.closed = false;
        return fan;
    }

    // Walk corner to corner across shared spokes, deterministically seeded.
    int start_spoke = -1;
    if (closed) {
        start_spoke = by_spoke.begin()->first;
    } else {
        for (const auto &[s, slots] : by_spoke)
            if (slots.size() == 1) {
                start_spoke = s;
                break;
            }
    }
    std::vector<char> used(corners.size(), 0);
    int cur_spoke = start_spoke;
    int cur = -1;
    {
        const auto &slots = by_spoke[start_spoke];
        cur = slots[0];
        if (slots.size() == 2 && corners[slots[1]][2] < corners[cur][2]) cur = slots[1];
    }
    double acc = 0.0;
    for (std::size_t step = 0; step < corners.size(); ++step) {
        used[cur] = 1;
        fan.spokes.push_back(cur_spoke);
        fan.fan_faces.push_back(corners[cur][2]);
        fan.spoke_angles.push_back(acc);
        double ang = corner_angle(mesh, corners[cur][2], v);
        fan.incident_angles.push_back(ang);
        acc += ang;
        int out = (corners[cur][0] == cur_spoke) ? corners[cur][1] : corners[cur][0];
        cur_spoke = out;
        int next = -1;
        for (int slot : by_spoke[out])
            if (!used[slot]) next = slot;
        if (next < 0) break;
        cur = next;
    }
    fan.total_angle = acc;
    fan.closed = closed && fan.incident_angles.size() == corners.size();
    if (!fan.closed) {
        // trailing boundary spoke, carries the accumulated end angle
        fan.spokes.push_back(cur_spoke);
        fan.spoke_angles.push_back(acc);
    }
    if (fan.incident_angles.size() != corners.size()) {
        // disconnected fan (shares only the vertex): recompute total over all
        fan.total_angle = 0.0;
        for (const auto &c : corners) fan.total_angle += corner_angle(mesh, c[2], v);
    }
    return fan;
}

MeshAdjacency::MeshAdjacency(const TriangleMesh &mesh) : mesh_(&mesh) {
    const int n = mesh.vertex_count();
    vertex_faces_.resize(n);
    neighbors_.resize(n);
    edge_index_.resize(n);

    for (int fi = 0; fi < mesh.face_count(); ++fi) {
        const auto &f = mesh.faces[fi];
        for (int s = 0; s < 3; ++s) {
            int u = f[s], v = f[(s + 1) % 3];
            vertex_faces_[u].push_back(fi);
            int a = std::min(u, v), b = std::max(u, v);
            int slot = edge_slot(a, b);
            if (slot < 0) {
                slot = static_cast<int>(edge_face_pairs_.size());
                edge_face_pairs_.emplace_back(fi, -1);
                edge_index_[a].emplace_back(b, slot);
                neighbors_[a].push_back(b);
                neighbors_[b].push_back(a);
            } else {
                auto &pr = edge_face_pairs_[slot];
                if (pr.first != fi && pr.second != fi) {
                    if (pr.second != -1) throw InvalidMeshError("non-manifold edge");
                    pr.second = fi;
                }
            }
        }
    }
    for (auto &vf : vertex_faces_) {
        std::sort(vf.begin(), vf.end());
        vf.erase(std::unique(vf.begin(), vf.end()), vf.end());
    }
    for (auto &nb : neighbors_) std::sort(nb.begin(), nb.end());

    fans_.reserve(n);
    for (int v = 0; v < n; ++v) fans_.push_back(vertex_fan(mesh, v));

    // vertex connectivity over edges
    UnionFind uf(std::max(1, n));
    for (int a = 0; a < n; ++a)
        for (const auto &[b, slot] : edge_index_[a]) uf.unite(a, b);
    connected_ = true;
    for (int v = 1; v < n; ++v)
        if (uf.find(v) != uf.find(0)) {
            connected_ = false;
            break;
        }
}

int MeshAdjacency::edge_slot(int a, int b) const {
    for (const auto &[bb, slot] : edge_index_[a])
        if (bb == b) return slot;
    return -1;
}

std::pair<int, int> MeshAdjacency::edge_faces(int a, int b) const {
    int slot = edge_slot(std::min(a, b), std::max(a, b));
    if (slot < 0) return {-1, -1};
    return edge_face_pairs_[slot];
}

bool MeshAdjacency::has_edge(int a, int b) const {
    return edge_slot(std::min(a, b), std::max(a, b)) >= 0;
}

double MeshAdjacency::edge_length(int a, int b) const {
    return (mesh_->vertices[a] - mesh_->vertices[b]).norm();
}

std::uint64_t mesh_fingerprint(const TriangleMesh &mesh) {
    std::uint64_t h = 1469598103934665603ULL;
    std::uint64_t nv = mesh.vertices.size(), nf = mesh.faces.size();
    h = fnv1a(&nv, sizeof nv, h);
    h = fnv1a(&nf, sizeof nf, h);
    for (const Vec3 &v : mesh.vertices) {
        double c[3] = {v.x(), v.y(), v.z()};
        h = fnv1a(c, sizeof c, h);
    }
    for (const auto &f : mesh.faces) {
        std::int32_t idx[3] = {f[0], f[1], f[2]};
        h = fnv1a(idx, sizeof idx, h);
    }
    return h;
}

} // namespace qgshape
