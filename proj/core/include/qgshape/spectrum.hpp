#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qgshape/geodesic.hpp"

namespace qgshape {

enum class EigenOrdering { AbsDesc, AlgDesc };

/// Leading eigenpairs of the symmetric operator D_g. Columns of
/// `eigenvectors` are unit-norm and sign-canonicalized (largest-magnitude
/// entry positive, ties broken by lowest vertex index).
struct SpectralDecomposition {
    int k = 0;
    Eigen::VectorXd eigenvalues;  // ordered per `ordering`
    Eigen::MatrixXd eigenvectors; // n x k
    EigenOrdering ordering = EigenOrdering::AbsDesc;
    std::uint64_t source_fingerprint = 0;

    int n() const { return static_cast<int>(eigenvectors.rows()); }
};

SpectralDecomposition decompose(const GeodesicMatrix &matrix, int k,
                                EigenOrdering ordering = EigenOrdering::AbsDesc);

/// s(p) = sum over the first k0 eigenvectors of their value at vertex p.
std::vector<double> embedding_sum(const SpectralDecomposition &decomp, int k0);

void write_eigenvalues_csv(const SpectralDecomposition &decomp, const std::string &path);

} // namespace qgshape
