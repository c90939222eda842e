#include "qgshape/geodesic.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <list>
#include <queue>
#include <thread>

namespace qgshape {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kTMin = 1e-9; // edge parameter guard band

double angle3(const Vec3 &u, const Vec3 &w) {
    double nu = u.norm(), nw = w.norm();
    if (nu <= 0.0 || nw <= 0.0) return 0.0;
    return std::acos(std::clamp(u.dot(w) / (nu * nw), -1.0, 1.0));
}

bool lex_less(const Vec3 &a, const Vec3 &b) {
    if (a.x() != b.x()) return a.x() < b.x();
    if (a.y() != b.y()) return a.y() < b.y();
    return a.z() < b.z();
}

bool face_has(const TriangleMesh &mesh, int face, int v) {
    const auto &f = mesh.faces[face];
    return f[0] == v || f[1] == v || f[2] == v;
}

bool node_on_face(const TriangleMesh &mesh, const PathNode &n, int face) {
    if (face < 0) return false;
    if (n.is_vertex) return face_has(mesh, face, n.vertex);
    return face_has(mesh, face, n.edge_a) && face_has(mesh, face, n.edge_b);
}

// Smallest face id adjacent to both nodes, or -1.
int common_face(const MeshAdjacency &adj, const PathNode &a, const PathNode &b) {
    const TriangleMesh &mesh = adj.mesh();
    int best = -1;
    auto consider = [&](int f) {
        if (f >= 0 && node_on_face(mesh, a, f) && node_on_face(mesh, b, f))
            if (best < 0 || f < best) best = f;
    };
    if (a.is_vertex) {
        for (int f : adj.vertex_faces(a.vertex)) consider(f);
    } else {
        auto [f1, f2] = adj.edge_faces(a.edge_a, a.edge_b);
        consider(f1);
        consider(f2);
    }
    return best;
}

// Angular coordinate of neighbor node `nb` within the fan of vertex v.
double fan_coordinate(const MeshAdjacency &adj, int v, const PathNode &nb) {
    const TriangleMesh &mesh = adj.mesh();
    const VertexFan &fan = adj.fan(v);
    int spoke = -1;
    if (nb.is_vertex) {
        spoke = nb.vertex;
    } else if (nb.edge_a == v) {
        spoke = nb.edge_b;
    } else if (nb.edge_b == v) {
        spoke = nb.edge_a;
    }
    if (spoke >= 0) {
        for (std::size_t i = 0; i < fan.spokes.size(); ++i)
            if (fan.spokes[i] == spoke) return fan.spoke_angles[i];
        throw InvalidMeshError("fan_coordinate: node not adjacent to vertex fan");
    }
    // Edge node on the link: locate the fan face holding both endpoints.
    for (std::size_t i = 0; i < fan.fan_faces.size(); ++i) {
        int f = fan.fan_faces[i];
        if (face_has(mesh, f, nb.edge_a) && face_has(mesh, f, nb.edge_b)) {
            const Vec3 &pv = mesh.vertices[v];
            Vec3 ds = mesh.vertices[fan.spokes[i]] - pv;
            return fan.spoke_angles[i] + angle3(ds, nb.pos - pv);
        }
    }
    throw InvalidMeshError("fan_coordinate: node not on vertex link");
}

double wrap_angle(double a, double period) {
    double r = std::fmod(a, period);
    if (r < 0) r += period;
    return r;
}

CrossingAngles crossing_at(const MeshAdjacency &adj, const PathNode &prev, const PathNode &cur,
                           const PathNode &next) {
    const TriangleMesh &mesh = adj.mesh();
    CrossingAngles out;
    if (cur.is_vertex) {
        const VertexFan &fan = adj.fan(cur.vertex);
        double phi0 = fan_coordinate(adj, cur.vertex, prev);
        double phi1 = fan_coordinate(adj, cur.vertex, next);
        out.theta_total = fan.total_angle;
        if (fan.closed) {
            out.theta_right = wrap_angle(phi1 - phi0, fan.total_angle);
        } else {
            out.theta_right = std::abs(phi1 - phi0);
        }
        out.theta_left = out.theta_total - out.theta_right;
    } else {
        // Interior edge point: the surface cone angle is exactly 2*pi, split
        // by the path into the side of edge_a and the side of edge_b.
        const Vec3 &pa = mesh.vertices[cur.edge_a];
        double a_prev = angle3(prev.pos - cur.pos, pa - cur.pos);
        double a_next = angle3(next.pos - cur.pos, pa - cur.pos);
        out.theta_total = kTwoPi;
        out.theta_left = a_prev + a_next;
        out.theta_right = kTwoPi - out.theta_left;
    }
    return out;
}

// Deviation from the locally-shortest condition, in radians. For edge
// crossings this is |kappa_g|. A path vertex is locally shortest when both
// side sums are >= pi, so the defect is the shortfall of the smaller side.
double straightness_defect(const MeshAdjacency &adj, const PathNode &prev, const PathNode &cur,
                           const PathNode &next) {
    CrossingAngles c = crossing_at(adj, prev, cur, next);
    if (!cur.is_vertex) {
        return std::abs(discrete_geodesic_curvature(c));
    }
    double m = std::min(c.theta_left, c.theta_right);
    if (c.theta_total <= 0.0) return 0.0;
    return std::max(0.0, kPi - m) * (kTwoPi / c.theta_total);
}

struct Workspace {
    std::list<PathNode> nodes;
    double scale = 1.0; // mesh bbox diagonal, for merge tolerances
};

using NodeIt = std::list<PathNode>::iterator;

// Replaces an edge node by the straight crossing of its two adjacent faces
// unfolded into a plane. Returns true if the path changed.
bool relax_edge_node(const MeshAdjacency &adj, Workspace &ws, NodeIt it) {
    const TriangleMesh &mesh = adj.mesh();
    NodeIt pit = std::prev(it), nit = std::next(it);
    const PathNode &prev = *pit, &next = *nit;

    auto [f1, f2] = adj.edge_faces(it->edge_a, it->edge_b);
    bool prev_on_f1 = node_on_face(mesh, prev, f1), prev_on_f2 = node_on_face(mesh, prev, f2);
    bool next_on_f1 = node_on_face(mesh, next, f1), next_on_f2 = node_on_face(mesh, next, f2);
    if ((prev_on_f1 && next_on_f1) || (prev_on_f2 && next_on_f2)) {
        // both neighbors visible in one face: the node is redundant
        ws.nodes.erase(it);
        return true;
    }
    if (!(prev_on_f1 || prev_on_f2) || !(next_on_f1 || next_on_f2)) return false;

    const Vec3 &A = mesh.vertices[it->edge_a];
    const Vec3 &B = mesh.vertices[it->edge_b];
    double L = (B - A).norm();
    if (L <= 0.0) return false;

    // Unfold both faces flat across the edge: A at 0, B at L on the x axis,
    // prev above, next below.
    auto embed = [&](const Vec3 &p, double sign) {
        double da = (p - A).norm(), db = (p - B).norm();
        double x = (da * da - db * db + L * L) / (2.0 * L);
        double y2 = da * da - x * x;
        double y = sign * std::sqrt(std::max(0.0, y2));
        return Eigen::Vector2d(x, y);
    };
    Eigen::Vector2d p0 = embed(prev.pos, 1.0), p1 = embed(next.pos, -1.0);
    double denom = p0.y() - p1.y();
    if (denom <= 1e-300) return false;
    double s = p0.y() / denom;
    double x = p0.x() + s * (p1.x() - p0.x());
    double tn = x / L;

    double old_len = (prev.pos - it->pos).norm() + (next.pos - it->pos).norm();
    if (tn <= kTMin || tn >= 1.0 - kTMin) {
        int v = (tn <= kTMin) ? it->edge_a : it->edge_b;
        PathNode cand = PathNode::at_vertex(mesh, v);
        double new_len = (prev.pos - cand.pos).norm() + (next.pos - cand.pos).norm();
        if (new_len < old_len - 1e-15 * ws.scale) {
            *it = cand;
            return true;
        }
        return false;
    }
    if (std::abs(tn - it->t) < 1e-15) return false;
    PathNode cand = PathNode::on_edge(mesh, it->edge_a, it->edge_b, tn);
    double new_len = (prev.pos - cand.pos).norm() + (next.pos - cand.pos).norm();
    if (new_len > old_len + 1e-12 * ws.scale) return false;
    *it = cand;
    return true;
}

// Routes the path around a pinned vertex through the side of the fan with
// the smaller angle sum, unfolding that face wedge into the plane.
bool relax_vertex_node(const MeshAdjacency &adj, Workspace &ws, NodeIt it) {
    const TriangleMesh &mesh = adj.mesh();
    NodeIt pit = std::prev(it), nit = std::next(it);
    const PathNode prev = *pit, next = *nit;
    const int v = it->vertex;
    const VertexFan &fan = adj.fan(v);
    if (fan.incident_angles.empty()) return false;

    double phi0, phi1;
    try {
        phi0 = fan_coordinate(adj, v, prev);
        phi1 = fan_coordinate(adj, v, next);
    } catch (const Error &) {
        return false;
    }

    double theta = fan.total_angle;
    double dpos = fan.closed ? wrap_angle(phi1 - phi0, theta) : (phi1 - phi0);
    // candidate wedges: increasing-phi side and decreasing-phi side
    double wedge_pos = fan.closed ? dpos : std::abs(dpos);
    double wedge_neg = fan.closed ? theta - dpos : std::numeric_limits<double>::infinity();
    if (!fan.closed && theta > 0) {
        // open fan: only the through-fan route stays on the surface
        wedge_neg = std::numeric_limits<double>::infinity();
    }
    int dir = (wedge_pos <= wedge_neg) ? +1 : -1;
    if (!fan.closed && dpos < 0) dir = -1; // decreasing phi but still through the fan
    double wedge = std::min(wedge_pos, wedge_neg);
    if (!fan.closed) wedge = std::abs(dpos);
    if (wedge >= kPi - 1e-12) return false; // locally shortest through the vertex

    // spokes strictly inside the wedge, with their relative angles
    struct Spoke {
        double psi;
        int neighbor;
    };
    std::vector<Spoke> inside;
    for (std::size_t i = 0; i < fan.spokes.size(); ++i) {
        double rel;
        if (fan.closed) {
            rel = (dir > 0) ? wrap_angle(fan.spoke_angles[i] - phi0, theta)
                            : wrap_angle(phi0 - fan.spoke_angles[i], theta);
        } else {
            rel = (dir > 0) ? (fan.spoke_angles[i] - phi0) : (phi0 - fan.spoke_angles[i]);
        }
        if (rel > 1e-12 && rel < wedge - 1e-12) inside.push_back({rel, fan.spokes[i]});
    }
    std::sort(inside.begin(), inside.end(), [](const Spoke &a, const Spoke &b) { return a.psi < b.psi; });

    const Vec3 &pv = mesh.vertices[v];
    double r0 = (prev.pos - pv).norm(), r1 = (next.pos - pv).norm();
    if (r0 <= 0 || r1 <= 0) return false;
    Eigen::Vector2d q0(r0, 0.0), q1(r1 * std::cos(wedge), r1 * std::sin(wedge));
    Eigen::Vector2d d = q1 - q0;

    std::vector<PathNode> replacement;
    replacement.reserve(inside.size());
    for (const Spoke &sp : inside) {
        Eigen::Vector2d u(std::cos(sp.psi), std::sin(sp.psi));
        double den = u.x() * d.y() - u.y() * d.x();
        if (std::abs(den) < 1e-300) return false;
        double r = (q0.x() * d.y() - q0.y() * d.x()) / den;
        double L = (mesh.vertices[sp.neighbor] - pv).norm();
        if (L <= 0) return false;
        double t = std::clamp(r / L, kTMin, 1.0 - kTMin);
        // canonical edge orientation (min index first)
        PathNode node = (v < sp.neighbor) ? PathNode::on_edge(mesh, v, sp.neighbor, t)
                                          : PathNode::on_edge(mesh, sp.neighbor, v, 1.0 - t);
        replacement.push_back(node);
    }

    double old_len = (prev.pos - it->pos).norm() + (next.pos - it->pos).norm();
    double new_len = 0.0;
    {
        Vec3 last = prev.pos;
        for (const PathNode &n : replacement) {
            new_len += (n.pos - last).norm();
            last = n.pos;
        }
        new_len += (next.pos - last).norm();
    }
    if (new_len >= old_len - 1e-15 * ws.scale) return false; // ties keep the vertex pinned

    NodeIt ins = ws.nodes.erase(it);
    for (const PathNode &n : replacement) ws.nodes.insert(ins, n);
    return true;
}

void merge_duplicates(Workspace &ws) {
    if (ws.nodes.size() < 2) return;
    double eps = 1e-12 * ws.scale;
    auto it = ws.nodes.begin();
    while (std::next(it) != ws.nodes.end()) {
        auto nxt = std::next(it);
        if ((it->pos - nxt->pos).norm() <= eps) {
            // keep endpoints; otherwise prefer the vertex node
            if (nxt == std::prev(ws.nodes.end())) {
                if (it == ws.nodes.begin()) {
                    ++it;
                    continue;
                }
                ws.nodes.erase(it);
                it = ws.nodes.begin();
                continue;
            }
            if (it->is_vertex && !nxt->is_vertex) {
                ws.nodes.erase(nxt);
            } else if (it == ws.nodes.begin()) {
                ws.nodes.erase(nxt);
            } else {
                it = ws.nodes.erase(it);
                if (it != ws.nodes.begin()) --it;
            }
            continue;
        }
        ++it;
    }
}

double bbox_diag(const TriangleMesh &mesh) {
    if (mesh.vertices.empty()) return 1.0;
    Vec3 lo = mesh.vertices[0], hi = mesh.vertices[0];
    for (const Vec3 &v : mesh.vertices) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
    double d = (hi - lo).norm();
    return d > 0 ? d : 1.0;
}

} // namespace

PathNode PathNode::at_vertex(const TriangleMesh &mesh, int v) {
    PathNode n;
    n.is_vertex = true;
    n.vertex = v;
    n.pos = mesh.vertices[v];
    return n;
}

PathNode PathNode::on_edge(const TriangleMesh &mesh, int a, int b, double t) {
    PathNode n;
    n.is_vertex = false;
    n.edge_a = a;
    n.edge_b = b;
    n.t = t;
    n.pos = (1.0 - t) * mesh.vertices[a] + t * mesh.vertices[b];
    return n;
}

double path_length(const std::vector<PathNode> &nodes) {
    double len = 0.0;
    for (std::size_t i = 1; i < nodes.size(); ++i) len += (nodes[i].pos - nodes[i - 1].pos).norm();
    return len;
}

SurfacePath initial_path(const MeshAdjacency &adj, int src, int dst) {
    const TriangleMesh &mesh = adj.mesh();
    const int n = mesh.vertex_count();
    if (src < 0 || src >= n || dst < 0 || dst >= n || src == dst)
        throw Error(ErrorCode::Usage, "initial_path: invalid endpoints");
    if (adj.fan(src).incident_angles.empty() || adj.fan(dst).incident_angles.empty())
        throw InvalidMeshError("initial_path: unreferenced endpoint");

    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    std::vector<int> pred(n, -1);
    dist[src] = 0.0;
    using QE = std::pair<double, int>;
    std::priority_queue<QE, std::vector<QE>, std::greater<QE>> heap;
    heap.push({0.0, src});
    std::vector<char> done(n, 0);
    while (!heap.empty()) {
        auto [du, u] = heap.top();
        heap.pop();
        if (done[u]) continue;
        done[u] = 1;
        for (int w : adj.neighbors(u)) {
            double nd = dist[u] + adj.edge_length(u, w);
            if (nd < dist[w]) {
                dist[w] = nd;
                pred[w] = u;
                heap.push({nd, w});
            } else if (nd == dist[w] && pred[w] >= 0 &&
                       lex_less(mesh.vertices[u], mesh.vertices[pred[w]])) {
                // tie-break on predecessor position: stable under relabeling
                pred[w] = u;
            }
        }
    }
    if (!std::isfinite(dist[dst]))
        throw InvalidMeshError("initial_path: endpoints are in different components");

    SurfacePath path;
    path.src = src;
    path.dst = dst;
    std::vector<int> chain;
    for (int v = dst; v != -1; v = pred[v]) chain.push_back(v);
    std::reverse(chain.begin(), chain.end());
    for (int v : chain) path.nodes.push_back(PathNode::at_vertex(mesh, v));
    path.length = path_length(path.nodes);
    return path;
}

SurfacePath initial_path(const TriangleMesh &mesh, int src, int dst) {
    MeshAdjacency adj(mesh);
    return initial_path(adj, src, dst);
}

CrossingAngles crossing_angles(const MeshAdjacency &adj, const SurfacePath &path, int node_index) {
    if (node_index <= 0 || node_index + 1 >= static_cast<int>(path.nodes.size()))
        throw Error(ErrorCode::Usage, "crossing_angles: endpoint node has no crossing");
    return crossing_at(adj, path.nodes[node_index - 1], path.nodes[node_index],
                       path.nodes[node_index + 1]);
}

CrossingAngles crossing_angles(const TriangleMesh &mesh, const SurfacePath &path, int node_index) {
    MeshAdjacency adj(mesh);
    return crossing_angles(adj, path, node_index);
}

double discrete_geodesic_curvature(const CrossingAngles &crossing) {
    if (crossing.theta_total <= 0.0)
        throw NumericError("discrete_geodesic_curvature: zero total angle");
    return (kTwoPi / crossing.theta_total) * (crossing.theta_total / 2.0 - crossing.theta_right);
}

SurfacePath straighten(const MeshAdjacency &adj, const SurfacePath &path, double tol, int max_iter) {
    if (tol <= 0.0 || max_iter < 1)
        throw Error(ErrorCode::Usage, "straighten: tol > 0 and max_iter >= 1 required");
    SurfacePath out = path;
    if (path.nodes.size() < 3) {
        out.length = path_length(out.nodes);
        out.converged = true;
        out.max_curvature = 0.0;
        return out;
    }

    Workspace ws;
    ws.scale = bbox_diag(adj.mesh());
    ws.nodes.assign(path.nodes.begin(), path.nodes.end());

    double max_defect = 0.0;
    int it_count = 0;
    bool converged = false;
    for (int iter = 0; iter < max_iter; ++iter) {
        it_count = iter + 1;
        bool changed = false;
        if (ws.nodes.size() >= 3) {
            auto it = std::next(ws.nodes.begin());
            while (it != ws.nodes.end() && std::next(it) != ws.nodes.end()) {
                NodeIt cur = it;
                ++it;
                bool moved = cur->is_vertex ? relax_vertex_node(adj, ws, cur)
                                            : relax_edge_node(adj, ws, cur);
                changed |= moved;
            }
        }
        merge_duplicates(ws);

        max_defect = 0.0;
        if (ws.nodes.size() >= 3) {
            auto prev = ws.nodes.begin();
            auto cur = std::next(prev);
            auto next = std::next(cur);
            for (; next != ws.nodes.end(); ++prev, ++cur, ++next)
                max_defect = std::max(max_defect, straightness_defect(adj, *prev, *cur, *next));
        }
        if (max_defect <= tol) {
            converged = true;
            break;
        }
        if (!changed) break; // stuck; report best path so far
    }

    out.nodes.assign(ws.nodes.begin(), ws.nodes.end());
    out.length = path_length(out.nodes);
    out.converged = converged;
    out.iterations = it_count;
    out.max_curvature = max_defect;
    return out;
}

SurfacePath straighten(const TriangleMesh &mesh, const SurfacePath &path, double tol, int max_iter) {
    MeshAdjacency adj(mesh);
    return straighten(adj, path, tol, max_iter);
}

GeodesicMatrix all_pairs(const TriangleMesh &mesh, const GeodesicOptions &opt) {
    MeshAdjacency adj(mesh);
    if (!adj.connected()) throw InvalidMeshError("all_pairs: mesh is not connected");
    const int n = mesh.vertex_count();

    Eigen::MatrixXd raw = Eigen::MatrixXd::Zero(n, n);

    int threads = opt.threads > 0 ? opt.threads
                                  : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, n);

    std::atomic<int> next_src{0};
    auto worker = [&]() {
        for (;;) {
            int i = next_src.fetch_add(1);
            if (i >= n) return;
            // one Dijkstra per source, then straighten every tree path
            std::vector<double> dist(n, std::numeric_limits<double>::infinity());
            std::vector<int> pred(n, -1);
            dist[i] = 0.0;
            using QE = std::pair<double, int>;
            std::priority_queue<QE, std::vector<QE>, std::greater<QE>> heap;
            heap.push({0.0, i});
            std::vector<char> done(n, 0);
            while (!heap.empty()) {
                auto [du, u] = heap.top();
                heap.pop();
                if (done[u]) continue;
                done[u] = 1;
                for (int w : adj.neighbors(u)) {
                    double nd = dist[u] + adj.edge_length(u, w);
                    if (nd < dist[w]) {
                        dist[w] = nd;
                        pred[w] = u;
                        heap.push({nd, w});
                    } else if (nd == dist[w] && pred[w] >= 0 &&
                               lex_less(mesh.vertices[u], mesh.vertices[pred[w]])) {
                        pred[w] = u;
                    }
                }
            }
            std::vector<int> chain;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                chain.clear();
                for (int v = j; v != -1; v = pred[v]) chain.push_back(v);
                SurfacePath p;
                p.src = i;
                p.dst = j;
                p.nodes.reserve(chain.size());
                for (auto it = chain.rbegin(); it != chain.rend(); ++it)
                    p.nodes.push_back(PathNode::at_vertex(mesh, *it));
                p.length = path_length(p.nodes);
                SurfacePath s = straighten(adj, p, opt.tol, opt.max_iter);
                raw(i, j) = s.length;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto &th : pool) th.join();

    return symmetrize(raw, mesh_fingerprint(mesh));
}

GeodesicMatrix symmetrize(const Eigen::MatrixXd &raw, std::uint64_t fingerprint) {
    const int n = static_cast<int>(raw.rows());
    if (raw.cols() != n) throw NumericError("symmetrize: matrix must be square");
    GeodesicMatrix out;
    out.mesh_fingerprint = fingerprint;
    out.d.resize(n, n);
    for (int i = 0; i < n; ++i) {
        out.d(i, i) = 0.0;
        for (int j = i + 1; j < n; ++j) {
            double a = raw(i, j), b = raw(j, i);
            if (a < 0.0 || b < 0.0) throw NumericError("symmetrize: negative entry");
            if (!std::isfinite(a) || !std::isfinite(b))
                throw NumericError("symmetrize: non-finite entry");
            double m = std::min(a, b); // shorter directed path approximates better
            out.d(i, j) = m;
            out.d(j, i) = m;
        }
    }
    return out;
}

} // namespace qgshape
