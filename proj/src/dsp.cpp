#include "raman/dsp.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>

#include "raman/errors.hpp"

namespace raman::dsp {

namespace {

void check_params(const SgParams& p) {
    if (p.frame < 3 || p.frame % 2 == 0) {
        throw ParamError("sg: frame must be an odd integer >= 3");
    }
    if (p.order < 0 || p.order >= p.frame) {
        throw ParamError("sg: order must satisfy 0 <= order < frame");
    }
}

void check_params(const BaselineParams& p) {
    if (!(p.smoothness > 0.0)) throw ParamError("baseline: smoothness must be > 0");
    if (!(p.asymmetry > 0.0 && p.asymmetry < 1.0)) {
        throw ParamError("baseline: asymmetry must be in (0, 1)");
    }
    if (p.iterations < 1) throw ParamError("baseline: iterations must be >= 1");
}

}  // namespace

std::vector<double> sg_coefficients(const SgParams& params) {
    check_params(params);
    const int frame = params.frame;
    const int order = params.order;
    const int half = frame / 2;

    // Discrete orthogonal (Gram) polynomials on {-half..half} via the
    // three-term recurrence; numerically stable where a Vandermonde solve
    // is not. The center-point smoothing weights are the reproducing kernel
    // w_j = sum_p P_p(0) P_p(x_j) / <P_p, P_p>.
    std::vector<std::vector<double>> poly(order + 1, std::vector<double>(frame));
    for (int j = 0; j < frame; ++j) poly[0][j] = 1.0;
    if (order >= 1) {
        for (int j = 0; j < frame; ++j) poly[1][j] = static_cast<double>(j - half);
    }
    std::vector<double> norm(order + 1);
    auto dot = [&](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (int j = 0; j < frame; ++j) s += a[j] * b[j];
        return s;
    };
    norm[0] = dot(poly[0], poly[0]);
    if (order >= 1) norm[1] = dot(poly[1], poly[1]);
    for (int p = 2; p <= order; ++p) {
        // Nodes are symmetric, so the recurrence has no linear term.
        const double beta = norm[p - 1] / norm[p - 2];
        for (int j = 0; j < frame; ++j) {
            double x = static_cast<double>(j - half);
            poly[p][j] = x * poly[p - 1][j] - beta * poly[p - 2][j];
        }
        norm[p] = dot(poly[p], poly[p]);
    }

    std::vector<double> weights(frame, 0.0);
    for (int p = 0; p <= order; ++p) {
        const double at_zero = poly[p][half];
        if (at_zero == 0.0) continue;  // odd polynomials vanish at the center
        const double scale = at_zero / norm[p];
        for (int j = 0; j < frame; ++j) weights[j] += scale * poly[p][j];
    }
    return weights;
}

Spectrum sg_filter(const Spectrum& s, const SgParams& params) {
    check_params(params);
    const int n = static_cast<int>(s.values.size());
    if (n < params.frame) throw ParamError("sg: spectrum shorter than frame");
    const auto w = sg_coefficients(params);
    const int half = params.frame / 2;

    // Mirror padding: index -k maps to k, index n-1+k maps to n-1-k.
    auto sample = [&](int i) {
        if (i < 0) i = -i;
        if (i >= n) i = 2 * (n - 1) - i;
        return s.values[i];
    };
    Spectrum out;
    out.axis = s.axis;
    out.values.resize(n);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int k = -half; k <= half; ++k) acc += w[k + half] * sample(i + k);
        out.values[i] = acc;
    }
    return out;
}

Spectrum estimate_baseline(const Spectrum& s, const BaselineParams& params) {
    check_params(params);
    const int n = static_cast<int>(s.values.size());
    if (n < 3) throw ParamError("baseline: need at least 3 samples");

    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) y[i] = s.values[i];

    // D is the (n-2) x n second-difference operator; the smoother solves
    // (W + lambda D'D) z = W y with asymmetric weights re-estimated each round.
    Eigen::SparseMatrix<double> dtd(n, n);
    {
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(static_cast<size_t>(n) * 5);
        for (int i = 0; i < n - 2; ++i) {
            const int cols[3] = {i, i + 1, i + 2};
            const double vals[3] = {1.0, -2.0, 1.0};
            for (int a = 0; a < 3; ++a) {
                for (int b = 0; b < 3; ++b) {
                    trip.emplace_back(cols[a], cols[b], vals[a] * vals[b]);
                }
            }
        }
        dtd.setFromTriplets(trip.begin(), trip.end());
    }

    Eigen::VectorXd weight = Eigen::VectorXd::Ones(n);
    Eigen::VectorXd z = y;
    for (int it = 0; it < params.iterations; ++it) {
        Eigen::SparseMatrix<double> lhs = params.smoothness * dtd;
        for (int i = 0; i < n; ++i) lhs.coeffRef(i, i) += weight[i];
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(lhs);
        z = solver.solve(weight.cwiseProduct(y).matrix());
        for (int i = 0; i < n; ++i) {
            weight[i] = y[i] > z[i] ? params.asymmetry : 1.0 - params.asymmetry;
        }
    }

    Spectrum out;
    out.axis = s.axis;
    out.values.assign(z.data(), z.data() + n);
    return out;
}

Spectrum normalize_peak(const Spectrum& s) {
    double mx = -std::numeric_limits<double>::infinity();
    for (double v : s.values) mx = std::max(mx, v);
    if (!(mx > 0.0)) throw ValueError("normalize_peak: maximum must be > 0");
    Spectrum out;
    out.axis = s.axis;
    out.values.resize(s.values.size());
    for (size_t i = 0; i < s.values.size(); ++i) out.values[i] = s.values[i] / mx;
    return out;
}

std::vector<SgParams> sg_benchmark_grid() {
    std::vector<SgParams> grid;
    for (int order = 1; order <= 5; ++order) {
        for (int frame : {5, 7, 9, 11, 13}) {
            if (order < frame) grid.push_back({order, frame});
        }
    }
    return grid;
}

}  // namespace raman::dsp
