#include "raman/unmix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "raman/errors.hpp"
#include "raman/rng.hpp"

namespace raman::unmix {

namespace {

constexpr double kGradTol = 1e-10;

Eigen::MatrixXd cube_as_matrix(const HyperCube& cube) {
    const int b = cube.bands();
    const Eigen::Index n = static_cast<Eigen::Index>(cube.height()) * cube.width();
    Eigen::MatrixXd r(b, n);
    for (Eigen::Index p = 0; p < n; ++p) {
        const double* s = cube.data().data() + static_cast<size_t>(p) * b;
        for (int k = 0; k < b; ++k) r(k, p) = s[k];
    }
    return r;
}

}  // namespace

Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    const Eigen::Index m = A.rows();
    const Eigen::Index n = A.cols();
    if (n < 1) throw ValueError("nnls: empty system");
    if (!A.allFinite() || !b.allFinite()) throw ValueError("nnls: non-finite input");

    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    std::vector<bool> passive(n, false);
    Eigen::VectorXd w = A.transpose() * b;  // gradient of -0.5||Ax-b||^2 at x=0
    const double entry_tol = kGradTol * std::max(1.0, w.lpNorm<Eigen::Infinity>());

    // Lawson-Hanson: grow the passive set while some zero coordinate has a
    // strictly positive gradient, solving the unconstrained subproblem on the
    // passive set each time; inner loop backtracks when a passive coordinate
    // would go negative. Finite termination, at most 3n outer rounds guarded.
    const int max_outer = 3 * static_cast<int>(n) + 10;
    for (int outer = 0; outer < max_outer; ++outer) {
        int best = -1;
        double best_w = entry_tol;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (!passive[j] && w[j] > best_w) {
                best_w = w[j];
                best = static_cast<int>(j);
            }
        }
        if (best < 0) break;
        passive[best] = true;

        for (int inner = 0; inner < max_outer; ++inner) {
            std::vector<int> idx;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (passive[j]) idx.push_back(static_cast<int>(j));
            }
            Eigen::MatrixXd Ap(m, idx.size());
            for (size_t c = 0; c < idx.size(); ++c) Ap.col(c) = A.col(idx[c]);
            Eigen::VectorXd z = Ap.colPivHouseholderQr().solve(b);

            bool feasible = true;
            double alpha = 1.0;
            size_t blocking = idx.size();
            for (size_t c = 0; c < idx.size(); ++c) {
                if (z[c] <= 0.0) {
                    feasible = false;
                    const double t = x[idx[c]] / (x[idx[c]] - z[c]);
                    if (t < alpha) {
                        alpha = t;
                        blocking = c;
                    }
                }
            }
            if (feasible) {
                x.setZero();
                for (size_t c = 0; c < idx.size(); ++c) x[idx[c]] = z[c];
                break;
            }
            // Back off to the constraint boundary; the blocking coordinate is
            // pinned at exactly zero and leaves the passive set, along with
            // anything else the step drove to the boundary.
            for (size_t c = 0; c < idx.size(); ++c) {
                x[idx[c]] += alpha * (z[c] - x[idx[c]]);
            }
            for (size_t c = 0; c < idx.size(); ++c) {
                if (c == blocking || (z[c] <= 0.0 && x[idx[c]] <= 1e-14)) {
                    passive[idx[c]] = false;
                    x[idx[c]] = 0.0;
                }
            }
        }
        w = A.transpose() * (b - A * x);
        for (Eigen::Index j = 0; j < n; ++j) {
            if (passive[j]) w[j] = 0.0;
        }
    }
    return x;
}

EndmemberSet vca(const HyperCube& cube, int k, uint64_t seed) {
    const int b = cube.bands();
    const Eigen::Index n = static_cast<Eigen::Index>(cube.height()) * cube.width();
    if (k < 1 || k > std::min<Eigen::Index>(b, n)) {
        throw ValueError("vca: k out of range");
    }
    Eigen::MatrixXd r = cube_as_matrix(cube);

    // Rank guard on the data correlation matrix.
    Eigen::MatrixXd corr = (r * r.transpose()) / static_cast<double>(n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig_corr(corr);
    {
        const Eigen::VectorXd& ev = eig_corr.eigenvalues();
        const double tol = std::max(ev.maxCoeff(), 0.0) * b * 1e-12;
        int rank = 0;
        for (Eigen::Index i = 0; i < ev.size(); ++i) {
            if (ev[i] > tol) ++rank;
        }
        if (rank < k) throw RankError("vca: data rank below requested endmember count");
    }

    const Eigen::VectorXd mean = r.rowwise().mean();
    Eigen::MatrixXd r0 = r.colwise() - mean;

    // SNR estimate from the k-dimensional PCA projection.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig_cov(
        (r0 * r0.transpose()) / static_cast<double>(n));
    Eigen::MatrixXd ud_pca(b, k);
    for (int i = 0; i < k; ++i) ud_pca.col(i) = eig_cov.eigenvectors().col(b - 1 - i);
    Eigen::MatrixXd x_p = ud_pca.transpose() * r0;
    const double p_y = r.squaredNorm() / static_cast<double>(n);
    const double p_x = x_p.squaredNorm() / static_cast<double>(n) + mean.squaredNorm();
    // p_y <= p_x means the projection captures everything: noiseless data.
    double snr = std::numeric_limits<double>::infinity();
    if (p_y > p_x) {
        const double ratio = (p_x - (static_cast<double>(k) / b) * p_y) / (p_y - p_x);
        snr = ratio > 0.0 ? 10.0 * std::log10(ratio)
                          : -std::numeric_limits<double>::infinity();
    }
    const double snr_threshold = 15.0 + 10.0 * std::log10(static_cast<double>(k));

    // Project to k (projective) or k-1 (affine) dimensions per the SNR test.
    Eigen::MatrixXd y;       // k x n working representation
    Eigen::MatrixXd ud;      // back-projection basis
    Eigen::MatrixXd x_sub;   // subspace coordinates of the data
    bool projective = snr > snr_threshold;
    if (projective) {
        Eigen::MatrixXd ud_corr(b, k);
        for (int i = 0; i < k; ++i) {
            ud_corr.col(i) = eig_corr.eigenvectors().col(b - 1 - i);
        }
        ud = ud_corr;
        x_sub = ud.transpose() * r;
        Eigen::VectorXd u = x_sub.rowwise().mean();
        y.resize(k, n);
        for (Eigen::Index p = 0; p < n; ++p) {
            const double denom = x_sub.col(p).dot(u);
            y.col(p) = x_sub.col(p) / (denom != 0.0 ? denom : 1e-12);
        }
    } else {
        const int d = k - 1;
        ud.resize(b, std::max(d, 1));
        for (int i = 0; i < std::max(d, 1); ++i) {
            ud.col(i) = eig_cov.eigenvectors().col(b - 1 - i);
        }
        x_sub = ud.transpose() * r0;
        double c = 0.0;
        for (Eigen::Index p = 0; p < n; ++p) c = std::max(c, x_sub.col(p).norm());
        y.resize(k, n);
        if (d > 0) y.topRows(d) = x_sub;
        y.row(k - 1).setConstant(c);
    }

    // Iterative vertex extraction: project onto a random direction orthogonal
    // to the span of the vertices found so far, take the extreme pixel.
    Rng rng(seed);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(k, k);
    a(k - 1, 0) = 1.0;
    std::vector<Eigen::Index> indices(k);
    for (int i = 0; i < k; ++i) {
        Eigen::VectorXd wdir(k);
        for (int j = 0; j < k; ++j) wdir[j] = rng.normal();
        Eigen::MatrixXd pinv = a.completeOrthogonalDecomposition().pseudoInverse();
        Eigen::VectorXd f = wdir - a * (pinv * wdir);
        const double norm = f.norm();
        f /= (norm != 0.0 ? norm : 1.0);
        Eigen::VectorXd v = y.transpose() * f;
        Eigen::Index best = 0;
        double best_abs = -1.0;
        for (Eigen::Index p = 0; p < n; ++p) {
            if (std::abs(v[p]) > best_abs) {
                best_abs = std::abs(v[p]);
                best = p;
            }
        }
        indices[i] = best;
        a.col(i) = y.col(best);
    }

    EndmemberSet out;
    out.spectra.resize(b, k);
    for (int i = 0; i < k; ++i) {
        if (projective) {
            out.spectra.col(i) = ud * x_sub.col(indices[i]);
        } else if (k > 1) {
            out.spectra.col(i) = ud * x_sub.col(indices[i]) + mean;
        } else {
            out.spectra.col(i) = r.col(indices[i]);
        }
        out.names.push_back("endmember_" + std::to_string(i));
    }
    for (int i = 0; i < k; ++i) {
        if (out.spectra.col(i).lpNorm<Eigen::Infinity>() == 0.0) {
            out.spectra.col(i) = r.col(indices[i]);
        }
    }
    return out;
}

AbundanceCube abundance_map(const HyperCube& cube, const EndmemberSet& ems) {
    if (ems.spectra.rows() != cube.bands()) {
        throw ShapeError("abundance_map: endmember band count mismatch");
    }
    const int k = static_cast<int>(ems.spectra.cols());
    const int b = cube.bands();
    AbundanceCube ab;
    ab.height = cube.height();
    ab.width = cube.width();
    ab.planes = k;
    ab.values.resize(static_cast<size_t>(ab.height) * ab.width * k);
    Eigen::VectorXd pixel(b);
    const size_t pixels = static_cast<size_t>(ab.height) * ab.width;
    for (size_t p = 0; p < pixels; ++p) {
        const double* s = cube.data().data() + p * b;
        for (int i = 0; i < b; ++i) pixel[i] = s[i];
        Eigen::VectorXd x = nnls(ems.spectra, pixel);
        for (int i = 0; i < k; ++i) ab.values[p * k + i] = x[i];
    }
    return ab;
}

LabelMap classify_pixels(const AbundanceCube& ab) {
    LabelMap map;
    map.height = ab.height;
    map.width = ab.width;
    const size_t pixels = static_cast<size_t>(ab.height) * ab.width;
    map.labels.resize(pixels);
    for (size_t p = 0; p < pixels; ++p) {
        int best = 0;
        double best_v = ab.values[p * ab.planes];
        for (int k = 1; k < ab.planes; ++k) {
            const double v = ab.values[p * ab.planes + k];
            if (v > best_v) {
                best_v = v;
                best = k;
            }
        }
        map.labels[p] = best;
    }
    return map;
}

double classification_accuracy(const LabelMap& pred, const LabelMap& ref) {
    if (pred.height != ref.height || pred.width != ref.width) {
        throw ShapeError("classification_accuracy: dimension mismatch");
    }
    size_t hits = 0;
    for (size_t i = 0; i < pred.labels.size(); ++i) {
        if (pred.labels[i] == ref.labels[i]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(pred.labels.size());
}

double spectral_angle(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const double denom = a.norm() * b.norm();
    if (denom == 0.0) return M_PI / 2.0;
    double c = a.dot(b) / denom;
    c = std::clamp(c, -1.0, 1.0);
    return std::acos(c);
}

std::vector<double> match_endmembers(const Eigen::MatrixXd& estimated,
                                     const Eigen::MatrixXd& reference) {
    const int k = static_cast<int>(reference.cols());
    if (estimated.cols() != k || estimated.rows() != reference.rows()) {
        throw ShapeError("match_endmembers: shape mismatch");
    }
    if (k > 8) throw ValueError("match_endmembers: exhaustive matching limited to K <= 8");
    Eigen::MatrixXd angles(k, k);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            angles(i, j) = spectral_angle(estimated.col(i), reference.col(j));
        }
    }
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> best_perm = perm;
    double best_total = std::numeric_limits<double>::infinity();
    do {
        double total = 0.0;
        for (int j = 0; j < k; ++j) total += angles(perm[j], j);
        if (total < best_total) {
            best_total = total;
            best_perm = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::vector<double> out(k);
    for (int j = 0; j < k; ++j) out[j] = angles(best_perm[j], j);
    return out;
}

}  // namespace raman::unmix
