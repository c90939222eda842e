#pragma once

#include <string>
#include <vector>

#include "qgshape/analysis.hpp"
#include "qgshape/geodesic.hpp"

namespace qgshape {

/// Mean geodesic distance on the target between predicted and true images,
/// divided by `normalizer`.
double geodesic_error(const std::vector<int> &predicted, const std::vector<int> &truth,
                      const GeodesicMatrix &matrix_y, double normalizer);

/// 100 * fraction of per-vertex errors at or below `threshold`.
double percent_correspondence(const std::vector<double> &per_vertex_errors, double threshold);

/// Maps each vertex of X to the target vertex with the nearest aligned
/// spectral row; ties resolve to the lowest index.
std::vector<int> nearest_neighbor_map(const AlignedSpectra &aligned);

double surface_area(const TriangleMesh &mesh);

struct PairRecord {
    std::string shape_x, shape_y;
    int n = 0;
    double c_xy = 0.0;
    double c_xy_per_order = 0.0;  // c_xy / k0
    double c_xy_per_vertex = 0.0; // c_xy / n
    double epsilon = 0.0;
    double stable_score = 0.0;
    int stable_count = 0;
    double geodesic_err = 0.0;
    double pct_correspondence = 0.0;
    double threshold = 0.0;
    double runtime_seconds = 0.0;
    int k0 = 0;
    double tol = 0.0;
    int max_iter = 0;
};

struct EvalReport {
    std::vector<PairRecord> pairs;
    // category label -> mean over its member records, recomputed on emit
    std::vector<std::pair<std::string, std::vector<int>>> categories;

    double category_mean_c(const std::string &name) const;
    double category_mean_epsilon(const std::string &name) const;
};

void write_report_csv(const EvalReport &report, const std::string &path);
void write_report_json(const EvalReport &report, const std::string &path);

/// Cumulative correspondence curve: for each error value e (sorted), the
/// percentage of vertices with error <= e.
std::vector<std::pair<double, double>> cumulative_curve(const std::vector<double> &errors);

} // namespace qgshape
