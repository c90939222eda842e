#include "qgshape/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

namespace qgshape {

double geodesic_error(const std::vector<int> &predicted, const std::vector<int> &truth,
                      const GeodesicMatrix &matrix_y, double normalizer) {
    if (normalizer <= 0.0) throw Error(ErrorCode::Usage, "geodesic_error: normalizer must be > 0");
    if (predicted.size() != truth.size())
        throw Error(ErrorCode::Usage, "geodesic_error: length mismatch");
    const int n = matrix_y.n();
    double acc = 0.0;
    for (std::size_t p = 0; p < predicted.size(); ++p) {
        int a = predicted[p], b = truth[p];
        if (a < 0 || a >= n || b < 0 || b >= n)
            throw IndexOutOfRangeError("geodesic_error: index out of range");
        acc += matrix_y.d(a, b);
    }
    return acc / (static_cast<double>(predicted.size()) * normalizer);
}

double percent_correspondence(const std::vector<double> &per_vertex_errors, double threshold) {
    if (threshold <= 0.0)
        throw Error(ErrorCode::Usage, "percent_correspondence: threshold must be > 0");
    if (per_vertex_errors.empty()) return 100.0;
    std::size_t ok = 0;
    for (double e : per_vertex_errors)
        if (e <= threshold) ++ok;
    return 100.0 * static_cast<double>(ok) / per_vertex_errors.size();
}

std::vector<int> nearest_neighbor_map(const AlignedSpectra &aligned) {
    const int n = static_cast<int>(aligned.aligned_x.rows());
    std::vector<int> map(n, 0);
    for (int p = 0; p < n; ++p) {
        double best = std::numeric_limits<double>::infinity();
        int arg = 0;
        for (int q = 0; q < n; ++q) {
            double d = (aligned.aligned_x.row(p) - aligned.aligned_y.row(q)).squaredNorm();
            if (d < best) { // strict: ties keep the lowest index
                best = d;
                arg = q;
            }
        }
        map[p] = arg;
    }
    return map;
}

double surface_area(const TriangleMesh &mesh) {
    double area = 0.0;
    for (const auto &f : mesh.faces) {
        Vec3 a = mesh.vertices[f[1]] - mesh.vertices[f[0]];
        Vec3 b = mesh.vertices[f[2]] - mesh.vertices[f[0]];
        area += 0.5 * a.cross(b).norm();
    }
    return area;
}

std::vector<std::pair<double, double>> cumulative_curve(const std::vector<double> &errors) {
    std::vector<double> sorted = errors;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::pair<double, double>> curve;
    curve.reserve(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i)
        curve.emplace_back(sorted[i], 100.0 * (i + 1) / sorted.size());
    return curve;
}

double EvalReport::category_mean_c(const std::string &name) const {
    for (const auto &[cat, members] : categories) {
        if (cat != name) continue;
        double acc = 0.0;
        for (int m : members) acc += pairs[m].c_xy;
        return members.empty() ? 0.0 : acc / members.size();
    }
    return 0.0;
}

double EvalReport::category_mean_epsilon(const std::string &name) const {
    for (const auto &[cat, members] : categories) {
        if (cat != name) continue;
        double acc = 0.0;
        for (int m : members) acc += pairs[m].epsilon;
        return members.empty() ? 0.0 : acc / members.size();
    }
    return 0.0;
}

void write_report_csv(const EvalReport &report, const std::string &path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for writing: " + path);
    os << "shape_x,shape_y,n,k0,tol,max_iter,c_xy,c_xy_per_order,c_xy_per_vertex,"
          "epsilon,stable_score,stable_count,geodesic_error,pct_correspondence,"
          "threshold,runtime_seconds\n";
    char buf[512];
    for (const auto &r : report.pairs) {
        std::snprintf(buf, sizeof buf,
                      "%s,%s,%d,%d,%.17g,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%.17g,%.17g,%.17g,%.6f\n",
                      r.shape_x.c_str(), r.shape_y.c_str(), r.n, r.k0, r.tol, r.max_iter, r.c_xy,
                      r.c_xy_per_order, r.c_xy_per_vertex, r.epsilon, r.stable_score,
                      r.stable_count, r.geodesic_err, r.pct_correspondence, r.threshold,
                      r.runtime_seconds);
        os << buf;
    }
    if (!os) throw IoError("write failed: " + path);
}

void write_report_json(const EvalReport &report, const std::string &path) {
    nlohmann::ordered_json j;
    j["pairs"] = nlohmann::ordered_json::array();
    for (const auto &r : report.pairs) {
        nlohmann::ordered_json p;
        p["shape_x"] = r.shape_x;
        p["shape_y"] = r.shape_y;
        p["n"] = r.n;
        p["k0"] = r.k0;
        p["tol"] = r.tol;
        p["max_iter"] = r.max_iter;
        p["c_xy"] = r.c_xy;
        p["c_xy_per_order"] = r.c_xy_per_order;
        p["c_xy_per_vertex"] = r.c_xy_per_vertex;
        p["epsilon"] = r.epsilon;
        p["stable_score"] = r.stable_score;
        p["stable_count"] = r.stable_count;
        p["geodesic_error"] = r.geodesic_err;
        p["pct_correspondence"] = r.pct_correspondence;
        p["threshold"] = r.threshold;
        p["runtime_seconds"] = r.runtime_seconds;
        j["pairs"].push_back(p);
    }
    j["categories"] = nlohmann::ordered_json::array();
    for (const auto &[cat, members] : report.categories) {
        nlohmann::ordered_json c;
        c["category"] = cat;
        c["members"] = members;
        c["mean_c_xy"] = report.category_mean_c(cat);
        c["mean_epsilon"] = report.category_mean_epsilon(cat);
        j["categories"].push_back(c);
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for writing: " + path);
    os << j.dump(2) << "\n";
    if (!os) throw IoError("write failed: " + path);
}

} // namespace qgshape
