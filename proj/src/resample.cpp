#include "raman/resample.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "raman/errors.hpp"

namespace raman::resample {

namespace {

void check_scale(int s) {
    if (!valid_scale(s)) throw ParamError("resample: scale must be 2, 3 or 4");
}

void check_out_dims(const HyperCube& cube, int s, int out_h, int out_w) {
    // Consistent up to remainder: ceil(out/s) must recover the input dims.
    auto ceil_div = [](int a, int b) { return (a + b - 1) / b; };
    if (out_h < 1 || out_w < 1 || ceil_div(out_h, s) != cube.height() ||
        ceil_div(out_w, s) != cube.width()) {
        throw ShapeError("resample: output dims inconsistent with scale");
    }
}

}  // namespace

bool valid_scale(int s) { return s == 2 || s == 3 || s == 4; }

HyperCube decimate(const HyperCube& cube, int s) {
    check_scale(s);
    if (cube.height() < s || cube.width() < s) {
        throw ShapeError("decimate: cube smaller than scale");
    }
    const int oh = (cube.height() + s - 1) / s;
    const int ow = (cube.width() + s - 1) / s;
    const int b = cube.bands();
    std::vector<double> data(static_cast<size_t>(oh) * ow * b);
    for (int i = 0; i < oh; ++i) {
        for (int j = 0; j < ow; ++j) {
            std::memcpy(data.data() + (static_cast<size_t>(i) * ow + j) * b,
                        cube.spectrum_at(i * s, j * s).data(), b * sizeof(double));
        }
    }
    AcquisitionMeta meta = cube.meta();
    meta.pixel_pitch *= s;
    return HyperCube(oh, ow, cube.axis(), std::move(data), std::move(meta));
}

HyperCube upsample_nearest(const HyperCube& cube, int s, int out_h, int out_w) {
    check_scale(s);
    check_out_dims(cube, s, out_h, out_w);
    const int b = cube.bands();
    std::vector<double> data(static_cast<size_t>(out_h) * out_w * b);
    for (int i = 0; i < out_h; ++i) {
        for (int j = 0; j < out_w; ++j) {
            std::memcpy(data.data() + (static_cast<size_t>(i) * out_w + j) * b,
                        cube.spectrum_at(i / s, j / s).data(), b * sizeof(double));
        }
    }
    AcquisitionMeta meta = cube.meta();
    meta.pixel_pitch /= s;
    return HyperCube(out_h, out_w, cube.axis(), std::move(data), std::move(meta));
}

void bicubic_weights(double t, double w[4]) {
    // Keys (1981) cubic convolution with a = -0.5.
    constexpr double a = -0.5;
    const double t2 = t * t;
    const double t3 = t2 * t;
    w[0] = a * (t3 - 2.0 * t2 + t);
    w[1] = (a + 2.0) * t3 - (a + 3.0) * t2 + 1.0;
    w[2] = -(a + 2.0) * t3 + (2.0 * a + 3.0) * t2 - a * t;
    w[3] = a * (t2 - t3);
}

HyperCube upsample_bicubic(const HyperCube& cube, int s, int out_h, int out_w) {
    check_scale(s);
    if (cube.height() < 2 || cube.width() < 2) {
        throw ShapeError("upsample_bicubic: input must be at least 2x2");
    }
    check_out_dims(cube, s, out_h, out_w);
    const int h = cube.height(), w = cube.width(), b = cube.bands();

    // Separable: rows first into a (out_h x w) buffer, then columns.
    auto clamp = [](int i, int n) { return std::clamp(i, 0, n - 1); };
    std::vector<double> tmp(static_cast<size_t>(out_h) * w * b);
    for (int oi = 0; oi < out_h; ++oi) {
        const double src = static_cast<double>(oi) / s;
        const int base = static_cast<int>(std::floor(src));
        double wt[4];
        bicubic_weights(src - base, wt);
        const int rows[4] = {clamp(base - 1, h), clamp(base, h), clamp(base + 1, h),
                             clamp(base + 2, h)};
        for (int j = 0; j < w; ++j) {
            double* dst = tmp.data() + (static_cast<size_t>(oi) * w + j) * b;
            const double* r0 = cube.spectrum_at(rows[0], j).data();
            const double* r1 = cube.spectrum_at(rows[1], j).data();
            const double* r2 = cube.spectrum_at(rows[2], j).data();
            const double* r3 = cube.spectrum_at(rows[3], j).data();
            for (int k = 0; k < b; ++k) {
                dst[k] = wt[0] * r0[k] + wt[1] * r1[k] + wt[2] * r2[k] + wt[3] * r3[k];
            }
        }
    }
    std::vector<double> data(static_cast<size_t>(out_h) * out_w * b);
    for (int oj = 0; oj < out_w; ++oj) {
        const double src = static_cast<double>(oj) / s;
        const int base = static_cast<int>(std::floor(src));
        double wt[4];
        bicubic_weights(src - base, wt);
        const int cols[4] = {clamp(base - 1, w), clamp(base, w), clamp(base + 1, w),
                             clamp(base + 2, w)};
        for (int oi = 0; oi < out_h; ++oi) {
            const double* row = tmp.data() + static_cast<size_t>(oi) * w * b;
            double* dst = data.data() + (static_cast<size_t>(oi) * out_w + oj) * b;
            const double* c0 = row + static_cast<size_t>(cols[0]) * b;
            const double* c1 = row + static_cast<size_t>(cols[1]) * b;
            const double* c2 = row + static_cast<size_t>(cols[2]) * b;
            const double* c3 = row + static_cast<size_t>(cols[3]) * b;
            for (int k = 0; k < b; ++k) {
                dst[k] = wt[0] * c0[k] + wt[1] * c1[k] + wt[2] * c2[k] + wt[3] * c3[k];
            }
        }
    }
    AcquisitionMeta meta = cube.meta();
    meta.pixel_pitch /= s;
    return HyperCube(out_h, out_w, cube.axis(), std::move(data), std::move(meta));
}

}  // namespace raman::resample
