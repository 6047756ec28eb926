#pragma once

#include <vector>

#include "raman/hypercube.hpp"

namespace raman::dsp {

struct SgParams {
    int order = 1;  // polynomial order
    int frame = 9;  // odd window length >= 3
};

struct BaselineParams {
    double smoothness = 1e5;  // second-difference penalty weight
    double asymmetry = 0.01;  // weight on residuals above the baseline
    int iterations = 10;
};

// Central-point convolution weights of the least-squares polynomial fit of
// `order` over `frame` samples. Symmetric; weights sum to 1.
std::vector<double> sg_coefficients(const SgParams& params);

// Savitzky-Golay smoothing with mirror padding at the edges; the axis is
// passed through untouched.
Spectrum sg_filter(const Spectrum& s, const SgParams& params);

// Asymmetric-least-squares baseline: penalized smoother with small weight on
// residuals above the current estimate, reweighted for `iterations` rounds.
Spectrum estimate_baseline(const Spectrum& s, const BaselineParams& params);

// Scale so the maximum value is exactly 1.
Spectrum normalize_peak(const Spectrum& s);

// The benchmark grid used for "best performing" SG comparisons:
// orders {1..5} x frames {5, 7, 9, 11, 13}.
std::vector<SgParams> sg_benchmark_grid();

}  // namespace raman::dsp
