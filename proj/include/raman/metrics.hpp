#pragma once

#include "raman/hypercube.hpp"

namespace raman::metrics {

struct SsimConstants {
    double c1 = 0.0;
    double c2 = 0.0;

    // Standard stabilizers k1 = 0.01, k2 = 0.03 against dynamic range L.
    static SsimConstants from_dynamic_range(double range);
};

// Mean squared error over all H*W*B elements; x is the ground truth.
double mse(const HyperCube& x, const HyperCube& y);

// 10 log10(x_max^2 / MSE); +infinity when MSE == 0. x_max is the data maximum
// of the ground-truth cube across all channels.
double psnr(const HyperCube& x, const HyperCube& y);

// Single-window SSIM per channel (global channel statistics, no sliding
// window), averaged over channels.
double ssim(const HyperCube& x, const HyperCube& y, const SsimConstants& consts);
double ssim(const HyperCube& x, const HyperCube& y);  // consts from max(x)

// Effective acquisition speedup of low-integration, decimated imaging:
// (t_high / t_low) * s^2.
double speedup(double t_low, double t_high, int scale);

}  // namespace raman::metrics
