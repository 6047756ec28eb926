#include "raman/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "raman/errors.hpp"

namespace raman::metrics {

namespace {

void check_dims(const HyperCube& x, const HyperCube& y) {
    if (x.height() != y.height() || x.width() != y.width() || x.bands() != y.bands()) {
        throw ShapeError("metrics: cube dimensions differ");
    }
}

double cube_max(const HyperCube& c) {
    double mx = -std::numeric_limits<double>::infinity();
    for (double v : c.data()) mx = std::max(mx, v);
    return mx;
}

}  // namespace

SsimConstants SsimConstants::from_dynamic_range(double range) {
    SsimConstants c;
    c.c1 = (0.01 * range) * (0.01 * range);
    c.c2 = (0.03 * range) * (0.03 * range);
    return c;
}

double mse(const HyperCube& x, const HyperCube& y) {
    check_dims(x, y);
    double acc = 0.0;
    const auto& xv = x.data();
    const auto& yv = y.data();
    for (size_t i = 0; i < xv.size(); ++i) {
        const double d = static_cast<double>(xv[i]) - static_cast<double>(yv[i]);
        acc += d * d;
    }
    return acc / static_cast<double>(xv.size());
}

double psnr(const HyperCube& x, const HyperCube& y) {
    const double err = mse(x, y);
    const double mx = cube_max(x);
    if (!(mx > 0.0)) throw ValueError("psnr: ground-truth maximum must be > 0");
    if (err == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(mx * mx / err);
}

double ssim(const HyperCube& x, const HyperCube& y, const SsimConstants& consts) {
    check_dims(x, y);
    const int bands = x.bands();
    const size_t pixels = static_cast<size_t>(x.height()) * x.width();
    double total = 0.0;
    for (int k = 0; k < bands; ++k) {
        double mean_x = 0.0, mean_y = 0.0;
        for (size_t p = 0; p < pixels; ++p) {
            mean_x += x.data()[p * bands + k];
            mean_y += y.data()[p * bands + k];
        }
        mean_x /= static_cast<double>(pixels);
        mean_y /= static_cast<double>(pixels);
        double var_x = 0.0, var_y = 0.0, cov = 0.0;
        for (size_t p = 0; p < pixels; ++p) {
            const double dx = x.data()[p * bands + k] - mean_x;
            const double dy = y.data()[p * bands + k] - mean_y;
            var_x += dx * dx;
            var_y += dy * dy;
            cov += dx * dy;
        }
        var_x /= static_cast<double>(pixels);
        var_y /= static_cast<double>(pixels);
        cov /= static_cast<double>(pixels);
        total += (2.0 * mean_x * mean_y + consts.c1) * (2.0 * cov + consts.c2) /
                 ((mean_x * mean_x + mean_y * mean_y + consts.c1) *
                  (var_x + var_y + consts.c2));
    }
    return total / bands;
}

double ssim(const HyperCube& x, const HyperCube& y) {
    return ssim(x, y, SsimConstants::from_dynamic_range(cube_max(x)));
}

double speedup(double t_low, double t_high, int scale) {
    if (!(t_low > 0.0) || !(t_high > 0.0)) {
        throw ValueError("speedup: integration times must be > 0");
    }
    if (t_low > t_high) throw ValueError("speedup: t_low must be <= t_high");
    return (t_high / t_low) * static_cast<double>(scale) * static_cast<double>(scale);
}

}  // namespace raman::metrics
