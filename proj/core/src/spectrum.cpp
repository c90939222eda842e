#include "qgshape/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

namespace qgshape {

SpectralDecomposition decompose(const GeodesicMatrix &matrix, int k, EigenOrdering ordering) {
    const int n = matrix.n();
    if (k < 1 || k > n) throw Error(ErrorCode::Usage, "decompose: k must be in [1, n]");
    double asym = (matrix.d - matrix.d.transpose()).cwiseAbs().maxCoeff();
    if (asym != 0.0) throw NumericError("decompose: matrix is not symmetric");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix.d);
    if (solver.info() != Eigen::Success)
        throw NumericError("decompose: eigensolver failed to converge");

    const Eigen::VectorXd &vals = solver.eigenvalues(); // ascending
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    if (ordering == EigenOrdering::AbsDesc) {
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            double ma = std::abs(vals[a]), mb = std::abs(vals[b]);
            if (ma != mb) return ma > mb;
            return vals[a] > vals[b];
        });
    } else {
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return vals[a] > vals[b]; });
    }

    SpectralDecomposition out;
    out.k = k;
    out.ordering = ordering;
    out.source_fingerprint = matrix.mesh_fingerprint;
    out.eigenvalues.resize(k);
    out.eigenvectors.resize(n, k);
    for (int i = 0; i < k; ++i) {
        out.eigenvalues[i] = vals[order[i]];
        Eigen::VectorXd col = solver.eigenvectors().col(order[i]);
        // sign canonicalization: largest-magnitude entry positive,
        // lowest index wins ties
        int arg = 0;
        double best = -1.0;
        for (int r = 0; r < n; ++r) {
            double m = std::abs(col[r]);
            if (m > best) {
                best = m;
                arg = r;
            }
        }
        if (col[arg] < 0.0) col = -col;
        out.eigenvectors.col(i) = col / col.norm();
    }
    return out;
}

std::vector<double> embedding_sum(const SpectralDecomposition &decomp, int k0) {
    if (k0 < 1 || k0 > decomp.k) throw Error(ErrorCode::Usage, "embedding_sum: k0 out of range");
    std::vector<double> s(decomp.n());
    for (int p = 0; p < decomp.n(); ++p) {
        double acc = 0.0;
        for (int i = 0; i < k0; ++i) acc += decomp.eigenvectors(p, i);
        s[p] = acc;
    }
    return s;
}

void write_eigenvalues_csv(const SpectralDecomposition &decomp, const std::string &path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for writing: " + path);
    os << "order,eigenvalue\n";
    char buf[64];
    for (int i = 0; i < decomp.k; ++i) {
        std::snprintf(buf, sizeof buf, "%d,%.17g\n", i + 1, decomp.eigenvalues[i]);
        os << buf;
    }
    if (!os) throw IoError("write failed: " + path);
}

} // namespace qgshape
