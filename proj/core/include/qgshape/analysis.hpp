#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qgshape/spectrum.hpp"

namespace qgshape {

enum class EpsilonMode { Config, Variance };

struct EpsilonBound {
    double epsilon = 0.0;
    EpsilonMode method = EpsilonMode::Config;
    std::uint64_t inputs_fingerprint = 0;
};

/// Variance mode over two operators: scale * stddev of |d_X(i,j) - d_Y(i,j)|
/// over vertex pairs (all pairs for n <= 2000, else a fixed-seed sample of
/// 2e6 pairs). Requires matching vertex indexing.
EpsilonBound epsilon_bound(const GeodesicMatrix &matrix_x, const GeodesicMatrix &matrix_y,
                           double scale, std::uint64_t seed = 1);

/// Variance mode over one shape: scale * stddev of the embedding-sum values.
EpsilonBound epsilon_bound(const std::vector<double> &embedding, double scale);

/// Config mode: epsilon = scale verbatim.
EpsilonBound epsilon_config(double scale);

struct SymmetryMap {
    std::vector<double> embedding;
    std::vector<std::pair<int, int>> pairs; // p < q, sorted by (p, q)
    double epsilon_used = 0.0;
};

SymmetryMap self_symmetry(const SpectralDecomposition &decomp, int k0, const EpsilonBound &eps);

/// Aligned spectra of two shapes: matched eigenpair selections, relative
/// signs applied to the Y side, and the final coupling objective.
struct AlignedSpectra {
    int k0 = 0;
    std::vector<int> selection_x; // indices into the source decompositions
    std::vector<int> selection_y; // selection_y[i] pairs with selection_x[i]
    std::vector<int> signs;       // +1 / -1 per pair, applied to aligned_y
    Eigen::MatrixXd aligned_x;    // n x k0
    Eigen::MatrixXd aligned_y;    // n x k0, signs applied
    Eigen::VectorXd eigvals_x;    // selected eigenvalues, pair order
    Eigen::VectorXd eigvals_y;
    double objective = 0.0;       // coupling residual, see align_objective
    double coupling_strength = 0.0; // |X^T Y Dy|_F + |Y^T X Dx|_F of the result
};

/// Coupling residual for a candidate alignment. With Dx, Dy the k0 x k0
/// diagonal matrices of paired eigenvalues and Dm their mean,
///   J = |X^T Y Dy - Dm|_F + |Y^T X Dx - Dm|_F.
/// Zero exactly when the selected bases coincide pair-for-pair with equal
/// spectra; large when pairs are mismatched.
double align_objective(const Eigen::MatrixXd &x, const Eigen::MatrixXd &y,
                       const Eigen::VectorXd &gx, const Eigen::VectorXd &gy);

AlignedSpectra align_spectra(const SpectralDecomposition &dx, const SpectralDecomposition &dy,
                             int k0);

struct CorrespondenceResult {
    double c_xy = 0.0;
    std::vector<double> per_order;  // |X^k - Y^k|_2 per pair
    std::vector<double> per_vertex; // row-wise |X(p) - Y(p)|_2
};

CorrespondenceResult correspondence_error(const AlignedSpectra &aligned);

struct StableRegion {
    std::vector<bool> mask;
    double score = 0.0;
    double epsilon_used = 0.0;
};

StableRegion stable_regions(const AlignedSpectra &aligned, const CorrespondenceResult &corr,
                            const EpsilonBound &eps);

} // namespace qgshape
