#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "qgshape/primitives.hpp"
#include "qgshape/spectrum.hpp"

using namespace qgshape;
namespace fs = std::filesystem;

namespace {

GeodesicMatrix wrap(Eigen::MatrixXd d) {
    GeodesicMatrix g;
    g.d = std::move(d);
    g.mesh_fingerprint = 42;
    return g;
}

} // namespace

TEST_CASE("decompose: 2x2 swap matrix") {
    Eigen::MatrixXd d(2, 2);
    d << 0, 1, 1, 0;
    SpectralDecomposition s = decompose(wrap(d), 2);
    // eigenvalues +1 and -1; abs-desc with alg tie-break puts +1 first
    CHECK(s.eigenvalues(0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.eigenvalues(1) == doctest::Approx(-1.0).epsilon(1e-14));
    double r = 1.0 / std::sqrt(2.0);
    CHECK(s.eigenvectors(0, 0) == doctest::Approx(r).epsilon(1e-12));
    CHECK(s.eigenvectors(1, 0) == doctest::Approx(r).epsilon(1e-12));
    // second vector is (r, -r) after canonicalization (lowest index positive on tie)
    CHECK(s.eigenvectors(0, 1) == doctest::Approx(r).epsilon(1e-12));
    CHECK(s.eigenvectors(1, 1) == doctest::Approx(-r).epsilon(1e-12));
}

TEST_CASE("decompose: tetrahedron operator = complete graph") {
    GeodesicMatrix g = all_pairs(make_tetrahedron());
    SpectralDecomposition s = decompose(g, 4);
    CHECK(s.eigenvalues(0) == doctest::Approx(3.0).epsilon(1e-10));
    for (int k = 1; k < 4; ++k)
        CHECK(s.eigenvalues(k) == doctest::Approx(-1.0).epsilon(1e-10));
    for (int p = 0; p < 4; ++p)
        CHECK(s.eigenvectors(p, 0) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("decompose: residuals, orthonormality, trace") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(0.1, 2.0);
    const int n = 40;
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            d(i, j) = d(j, i) = uni(rng);
    GeodesicMatrix g = wrap(d);
    SpectralDecomposition s = decompose(g, n);

    double dnorm = d.norm();
    for (int k = 0; k < n; ++k) {
        Eigen::VectorXd r = d * s.eigenvectors.col(k) - s.eigenvalues(k) * s.eigenvectors.col(k);
        CHECK(r.norm() <= 1e-8 * dnorm);
    }
    Eigen::MatrixXd gram = s.eigenvectors.transpose() * s.eigenvectors;
    CHECK((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(std::abs(s.eigenvalues.sum() - d.trace()) <= 1e-6 * dnorm);

    // full reconstruction at k = n
    Eigen::MatrixXd recon = s.eigenvectors *
                            s.eigenvalues.asDiagonal() *
                            s.eigenvectors.transpose();
    CHECK((recon - d).cwiseAbs().maxCoeff() <= 1e-8 * dnorm);
}

TEST_CASE("decompose: abs-desc ordering on mixed-sign spectrum") {
    // diag(5, -7, 1): abs-desc should order -7, 5, 1
    Eigen::MatrixXd d = Eigen::Vector3d(5, -7, 1).asDiagonal();
    SpectralDecomposition s = decompose(wrap(d), 3);
    CHECK(s.eigenvalues(0) == doctest::Approx(-7.0));
    CHECK(s.eigenvalues(1) == doctest::Approx(5.0));
    CHECK(s.eigenvalues(2) == doctest::Approx(1.0));

    SpectralDecomposition alg = decompose(wrap(d), 3, EigenOrdering::AlgDesc);
    CHECK(alg.eigenvalues(0) == doctest::Approx(5.0));
    CHECK(alg.eigenvalues(1) == doctest::Approx(1.0));
    CHECK(alg.eigenvalues(2) == doctest::Approx(-7.0));
}

TEST_CASE("decompose: sign canonicalization is idempotent and deterministic") {
    GeodesicMatrix g = all_pairs(make_icosphere(1));
    SpectralDecomposition a = decompose(g, 6);
    SpectralDecomposition b = decompose(g, 6);
    CHECK(a.eigenvectors == b.eigenvectors);
    for (int k = 0; k < a.k; ++k) {
        int argmax = 0;
        a.eigenvectors.col(k).cwiseAbs().maxCoeff(&argmax);
        CHECK(a.eigenvectors(argmax, k) > 0.0);
        CHECK(a.eigenvectors.col(k).norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("decompose: permutation equivariance of leading eigenvector") {
    GeodesicMatrix g = all_pairs(make_icosphere(1));
    const int n = g.n();
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937 rng(5);
    std::shuffle(perm.begin(), perm.end(), rng);

    Eigen::MatrixXd pd(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            pd(perm[i], perm[j]) = g.d(i, j);
    SpectralDecomposition a = decompose(g, 3);
    SpectralDecomposition b = decompose(wrap(pd), 3);
    for (int k = 0; k < 3; ++k) {
        CHECK(b.eigenvalues(k) == doctest::Approx(a.eigenvalues(k)).epsilon(1e-9));
        double diff = 0.0;
        for (int i = 0; i < n; ++i)
            diff = std::max(diff, std::abs(b.eigenvectors(perm[i], k) - a.eigenvectors(i, k)));
        CHECK(diff < 1e-8);
    }
}

TEST_CASE("decompose: argument validation") {
    Eigen::MatrixXd d(2, 2);
    d << 0, 1, 1, 0;
    CHECK_THROWS_AS(decompose(wrap(d), 0), Error);
    CHECK_THROWS_AS(decompose(wrap(d), 3), Error);
    Eigen::MatrixXd asym(2, 2);
    asym << 0, 1, 2, 0;
    CHECK_THROWS_AS(decompose(wrap(asym), 2), NumericError);
}

TEST_CASE("embedding_sum: direct sum of leading columns") {
    Eigen::MatrixXd d = Eigen::Vector3d(3, 2, 1).asDiagonal();
    SpectralDecomposition s = decompose(wrap(d), 3);
    std::vector<double> e1 = embedding_sum(s, 1);
    std::vector<double> e3 = embedding_sum(s, 3);
    REQUIRE(e1.size() == 3);
    for (int p = 0; p < 3; ++p) {
        CHECK(e1[p] == doctest::Approx(s.eigenvectors(p, 0)));
        CHECK(e3[p] == doctest::Approx(s.eigenvectors.row(p).sum()));
    }
    CHECK_THROWS_AS(embedding_sum(s, 0), Error);
    CHECK_THROWS_AS(embedding_sum(s, 4), Error);
}

TEST_CASE("write_eigenvalues_csv: round-trippable output") {
    Eigen::MatrixXd d = Eigen::Vector2d(2, -3).asDiagonal();
    SpectralDecomposition s = decompose(wrap(d), 2);
    fs::path p = fs::temp_directory_path() / "qgshape_eigs.csv";
    write_eigenvalues_csv(s, p.string());
    std::ifstream in(p);
    std::string header;
    std::getline(in, header);
    CHECK(header == "order,eigenvalue");
    int order;
    char comma;
    double v;
    in >> order >> comma >> v;
    CHECK(order == 0);
    CHECK(v == doctest::Approx(-3.0));
}
