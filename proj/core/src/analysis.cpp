#include "qgshape/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

namespace qgshape {

namespace {

double stddev(const std::vector<double> &vals) {
    if (vals.empty()) return 0.0;
    double mean = std::accumulate(vals.begin(), vals.end(), 0.0) / vals.size();
    double acc = 0.0;
    for (double v : vals) acc += (v - mean) * (v - mean);
    return std::sqrt(acc / vals.size());
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    a ^= b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2);
    return a;
}

} // namespace

EpsilonBound epsilon_bound(const GeodesicMatrix &matrix_x, const GeodesicMatrix &matrix_y,
                           double scale, std::uint64_t seed) {
    if (scale <= 0.0) throw Error(ErrorCode::Usage, "epsilon_bound: scale must be positive");
    const int n = matrix_x.n();
    if (matrix_y.n() != n)
        throw Error(ErrorCode::Usage, "epsilon_bound: shape mismatch (different vertex counts)");

    std::vector<double> diffs;
    if (n <= 2000) {
        diffs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                diffs.push_back(std::abs(matrix_x.d(i, j) - matrix_y.d(i, j)));
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<int> pick(0, n - 1);
        constexpr std::size_t kSamples = 2'000'000;
        diffs.reserve(kSamples);
        while (diffs.size() < kSamples) {
            int i = pick(rng), j = pick(rng);
            if (i == j) continue;
            diffs.push_back(std::abs(matrix_x.d(i, j) - matrix_y.d(i, j)));
        }
    }
    EpsilonBound out;
    out.method = EpsilonMode::Variance;
    out.epsilon = scale * stddev(diffs);
    out.inputs_fingerprint = mix(matrix_x.mesh_fingerprint, matrix_y.mesh_fingerprint);
    return out;
}

EpsilonBound epsilon_bound(const std::vector<double> &embedding, double scale) {
    if (scale <= 0.0) throw Error(ErrorCode::Usage, "epsilon_bound: scale must be positive");
    EpsilonBound out;
    out.method = EpsilonMode::Variance;
    out.epsilon = scale * stddev(embedding);
    return out;
}

EpsilonBound epsilon_config(double scale) {
    if (scale <= 0.0) throw Error(ErrorCode::Usage, "epsilon_bound: scale must be positive");
    EpsilonBound out;
    out.method = EpsilonMode::Config;
    out.epsilon = scale;
    return out;
}

SymmetryMap self_symmetry(const SpectralDecomposition &decomp, int k0, const EpsilonBound &eps) {
    if (k0 < 1 || k0 > std::min(20, decomp.k))
        throw Error(ErrorCode::Usage, "self_symmetry: k0 out of range");
    SymmetryMap out;
    out.embedding = embedding_sum(decomp, k0);
    out.epsilon_used = eps.epsilon;

    const int n = static_cast<int>(out.embedding.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return out.embedding[a] < out.embedding[b]; });

    // sliding window over sorted embedding values
    std::size_t lo = 0;
    for (std::size_t hi = 1; hi < order.size(); ++hi) {
        while (out.embedding[order[hi]] - out.embedding[order[lo]] > eps.epsilon) ++lo;
        for (std::size_t i = lo; i < hi; ++i) {
            int p = order[i], q = order[hi];
            out.pairs.emplace_back(std::min(p, q), std::max(p, q));
        }
    }
    std::sort(out.pairs.begin(), out.pairs.end());
    return out;
}

double align_objective(const Eigen::MatrixXd &x, const Eigen::MatrixXd &y,
                       const Eigen::VectorXd &gx, const Eigen::VectorXd &gy) {
    Eigen::MatrixXd a = x.transpose() * y; // k0 x k0
    Eigen::MatrixXd m1 = a * gy.asDiagonal();
    Eigen::MatrixXd m2 = a.transpose() * gx.asDiagonal();
    Eigen::MatrixXd dm = (0.5 * (gx + gy)).asDiagonal();
    return (m1 - dm).norm() + (m2 - dm).norm();
}

namespace {

struct Candidate {
    std::vector<int> sel_x, sel_y;
    std::vector<int> signs;
    double objective = 0.0;
};

double eval_candidate(const SpectralDecomposition &dx, const SpectralDecomposition &dy,
                      Candidate &c) {
    const int k0 = static_cast<int>(c.sel_x.size());
    const int n = dx.n();
    Eigen::MatrixXd X(n, k0), Y(n, k0);
    Eigen::VectorXd gx(k0), gy(k0);
    for (int i = 0; i < k0; ++i) {
        X.col(i) = dx.eigenvectors.col(c.sel_x[i]);
        Y.col(i) = c.signs[i] * dy.eigenvectors.col(c.sel_y[i]);
        gx[i] = dx.eigenvalues[c.sel_x[i]];
        gy[i] = dy.eigenvalues[c.sel_y[i]];
    }
    c.objective = align_objective(X, Y, gx, gy);
    return c.objective;
}

// deterministic preference among equal objectives
bool better(const Candidate &a, const Candidate &b) {
    if (a.objective != b.objective) return a.objective < b.objective;
    if (a.sel_x != b.sel_x) return a.sel_x < b.sel_x;
    if (a.sel_y != b.sel_y) return a.sel_y < b.sel_y;
    return a.signs > b.signs; // prefer +1
}

std::uint64_t binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

void combinations(int m, int k, const std::function<void(const std::vector<int> &)> &fn) {
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    for (;;) {
        fn(idx);
        int i = k - 1;
        while (i >= 0 && idx[i] == m - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

// coordinate-descent sign choice; ties keep +1
void settle_signs(const SpectralDecomposition &dx, const SpectralDecomposition &dy, Candidate &c) {
    eval_candidate(dx, dy, c);
    bool changed = true;
    int guard = 0;
    while (changed && guard++ < 8) {
        changed = false;
        for (std::size_t i = 0; i < c.signs.size(); ++i) {
            Candidate alt = c;
            alt.signs[i] = -alt.signs[i];
            eval_candidate(dx, dy, alt);
            if (alt.objective < c.objective - 1e-15) {
                c = alt;
                changed = true;
            }
        }
    }
}

} // namespace

AlignedSpectra align_spectra(const SpectralDecomposition &dx, const SpectralDecomposition &dy,
                             int k0) {
    if (dx.n() != dy.n())
        throw Error(ErrorCode::Usage, "align_spectra: shape mismatch (different vertex counts)");
    if (k0 < 1 || k0 > std::min(dx.k, dy.k))
        throw Error(ErrorCode::Usage, "align_spectra: k0 out of range");

    const int pool = std::min({2 * k0, dx.k, dy.k});

    Candidate best;
    bool have_best = false;
    auto consider = [&](Candidate c) {
        settle_signs(dx, dy, c);
        if (!have_best || better(c, best)) {
            best = std::move(c);
            have_best = true;
        }
    };

    // identity selection is always in the search space
    Candidate identity;
    identity.sel_x.resize(k0);
    identity.sel_y.resize(k0);
    identity.signs.assign(k0, 1);
    std::iota(identity.sel_x.begin(), identity.sel_x.end(), 0);
    std::iota(identity.sel_y.begin(), identity.sel_y.end(), 0);
    consider(identity);

    const std::uint64_t subset_pairs = binom(pool, k0) * binom(pool, k0);
    if (subset_pairs <= 4096 && k0 <= 4) {
        // exhaustive: every x-subset, y-subset and bijection of the pool
        std::vector<std::vector<int>> xsubs, ysubs;
        combinations(pool, k0, [&](const std::vector<int> &s) { xsubs.push_back(s); });
        ysubs = xsubs;
        for (const auto &sx : xsubs) {
            for (const auto &sy : ysubs) {
                std::vector<int> perm(k0);
                std::iota(perm.begin(), perm.end(), 0);
                do {
                    Candidate c;
                    c.sel_x = sx;
                    c.sel_y.resize(k0);
                    for (int i = 0; i < k0; ++i) c.sel_y[i] = sy[perm[i]];
                    c.signs.assign(k0, 1);
                    consider(std::move(c));
                } while (std::next_permutation(perm.begin(), perm.end()));
            }
        }
    } else {
        // greedy eigenvalue-proximity matching over the pool
        struct Edge {
            double gap;
            int i, j;
        };
        std::vector<Edge> edges;
        edges.reserve(pool * pool);
        for (int i = 0; i < pool; ++i)
            for (int j = 0; j < pool; ++j)
                edges.push_back({std::abs(dx.eigenvalues[i] - dy.eigenvalues[j]), i, j});
        std::sort(edges.begin(), edges.end(), [](const Edge &a, const Edge &b) {
            if (a.gap != b.gap) return a.gap < b.gap;
            if (a.i != b.i) return a.i < b.i;
            return a.j < b.j;
        });
        std::vector<int> partner(pool, -1);
        std::vector<char> used_y(pool, 0);
        int matched = 0;
        for (const Edge &e : edges) {
            if (matched == pool) break;
            if (partner[e.i] >= 0 || used_y[e.j]) continue;
            partner[e.i] = e.j;
            used_y[e.j] = 1;
            ++matched;
        }
        Candidate c;
        for (int i = 0; i < k0; ++i) {
            c.sel_x.push_back(i);
            c.sel_y.push_back(partner[i]);
        }
        c.signs.assign(k0, 1);
        settle_signs(dx, dy, c);

        // local improvement: swap y partners, swap in unselected pool pairs
        bool improved = true;
        int guard = 0;
        while (improved && guard++ < 100) {
            improved = false;
            for (int a = 0; a < k0 && !improved; ++a) {
                for (int b = a + 1; b < k0 && !improved; ++b) {
                    Candidate alt = c;
                    std::swap(alt.sel_y[a], alt.sel_y[b]);
                    settle_signs(dx, dy, alt);
                    if (alt.objective < c.objective - 1e-15) {
                        c = alt;
                        improved = true;
                    }
                }
                for (int j = 0; j < pool && !improved; ++j) {
                    if (std::find(c.sel_y.begin(), c.sel_y.end(), j) != c.sel_y.end()) continue;
                    Candidate alt = c;
                    alt.sel_y[a] = j;
                    settle_signs(dx, dy, alt);
                    if (alt.objective < c.objective - 1e-15) {
                        c = alt;
                        improved = true;
                    }
                }
                for (int i = 0; i < pool && !improved; ++i) {
                    if (std::find(c.sel_x.begin(), c.sel_x.end(), i) != c.sel_x.end()) continue;
                    Candidate alt = c;
                    alt.sel_x[a] = i;
                    settle_signs(dx, dy, alt);
                    if (alt.objective < c.objective - 1e-15) {
                        c = alt;
                        improved = true;
                    }
                }
            }
        }
        consider(std::move(c));
    }

    AlignedSpectra out;
    out.k0 = k0;
    out.selection_x = best.sel_x;
    out.selection_y = best.sel_y;
    out.signs = best.signs;
    const int n = dx.n();
    out.aligned_x.resize(n, k0);
    out.aligned_y.resize(n, k0);
    out.eigvals_x.resize(k0);
    out.eigvals_y.resize(k0);
    for (int i = 0; i < k0; ++i) {
        out.aligned_x.col(i) = dx.eigenvectors.col(best.sel_x[i]);
        out.aligned_y.col(i) = best.signs[i] * dy.eigenvectors.col(best.sel_y[i]);
        out.eigvals_x[i] = dx.eigenvalues[best.sel_x[i]];
        out.eigvals_y[i] = dy.eigenvalues[best.sel_y[i]];
    }
    out.objective = best.objective;
    {
        Eigen::MatrixXd a = out.aligned_x.transpose() * out.aligned_y;
        out.coupling_strength = (a * out.eigvals_y.asDiagonal()).norm() +
                                (a.transpose() * out.eigvals_x.asDiagonal()).norm();
    }
    return out;
}

CorrespondenceResult correspondence_error(const AlignedSpectra &aligned) {
    CorrespondenceResult out;
    const int k0 = aligned.k0;
    const int n = static_cast<int>(aligned.aligned_x.rows());
    out.per_order.resize(k0);
    for (int i = 0; i < k0; ++i)
        out.per_order[i] = (aligned.aligned_x.col(i) - aligned.aligned_y.col(i)).norm();
    out.c_xy = std::accumulate(out.per_order.begin(), out.per_order.end(), 0.0);
    out.per_vertex.resize(n);
    for (int p = 0; p < n; ++p)
        out.per_vertex[p] = (aligned.aligned_x.row(p) - aligned.aligned_y.row(p)).norm();
    return out;
}

StableRegion stable_regions(const AlignedSpectra &aligned, const CorrespondenceResult &corr,
                            const EpsilonBound &eps) {
    StableRegion out;
    out.epsilon_used = eps.epsilon;
    out.mask.resize(corr.per_vertex.size());
    out.score = 0.0;
    for (std::size_t p = 0; p < corr.per_vertex.size(); ++p) {
        bool stable = corr.per_vertex[p] <= eps.epsilon;
        out.mask[p] = stable;
        if (stable) out.score += corr.per_vertex[p];
    }
    return out;
}

} // namespace qgshape
