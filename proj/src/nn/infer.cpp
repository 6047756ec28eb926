#include "raman/nn/infer.hpp"

#include <algorithm>

#include "raman/errors.hpp"

namespace raman::nn {

namespace {

double cube_scale(const HyperCube& c) {
    double mx = 0.0;
    for (double v : c.data()) mx = std::max(mx, v);
    return mx > 0.0 ? mx : 1.0;
}

}  // namespace

HyperCube infer_denoise(const Checkpoint& ckpt, const HyperCube& cube) {
    ResUNet1d model = build_resunet(ckpt);
    if (cube.bands() != ckpt.resunet.in_len) {
        throw ConfigError("infer_denoise: cube band count != checkpoint in_len");
    }
    NoGradGuard guard;
    const double scale = cube_scale(cube);
    const double inv = 1.0 / scale;
    const int bands = cube.bands();
    const int pixels = cube.height() * cube.width();
    std::vector<double> out(cube.data().size());
    constexpr int kChunk = 256;
    for (int p0 = 0; p0 < pixels; p0 += kChunk) {
        const int n = std::min(kChunk, pixels - p0);
        std::vector<double> in(static_cast<size_t>(n) * bands);
        for (size_t i = 0; i < in.size(); ++i) {
            in[i] = cube.data()[static_cast<size_t>(p0) * bands + i] * inv;
        }
        Tensor x = Tensor::from_values({n, 1, bands}, std::move(in));
        Tensor y = model.forward(x, false);
        for (size_t i = 0; i < y.values().size(); ++i) {
            out[static_cast<size_t>(p0) * bands + i] = y.values()[i] * scale;
        }
    }
    return HyperCube(cube.height(), cube.width(), cube.axis(), std::move(out), cube.meta());
}

HyperCube infer_superres(const Checkpoint& ckpt, const HyperCube& cube, int out_h,
                         int out_w) {
    Hyrisr model = build_hyrisr(ckpt);
    if (cube.bands() != ckpt.hyrisr.bands) {
        throw ConfigError("infer_superres: cube band count != checkpoint bands");
    }
    const int s = ckpt.hyrisr.scale;
    auto ceil_div = [](int a, int b) { return (a + b - 1) / b; };
    if (out_h < 1 || out_w < 1 || ceil_div(out_h, s) != cube.height() ||
        ceil_div(out_w, s) != cube.width()) {
        throw ConfigError("infer_superres: output dims inconsistent with scale");
    }
    NoGradGuard guard;
    const double scale = cube_scale(cube);
    const double inv = 1.0 / scale;
    const int b = cube.bands(), h = cube.height(), w = cube.width();

    std::vector<double> in(static_cast<size_t>(b) * h * w);
    for (int i = 0; i < h; ++i) {
        for (int j = 0; j < w; ++j) {
            const double* src = cube.data().data() + (static_cast<size_t>(i) * w + j) * b;
            for (int k = 0; k < b; ++k) {
                in[(static_cast<size_t>(k) * h + i) * w + j] = src[k] * inv;
            }
        }
    }
    Tensor y = model.forward(Tensor::from_values({1, b, h, w}, std::move(in)), false);

    const int full_w = w * s;
    std::vector<double> out(static_cast<size_t>(out_h) * out_w * b);
    for (int i = 0; i < out_h; ++i) {
        for (int j = 0; j < out_w; ++j) {
            double* dst = out.data() + (static_cast<size_t>(i) * out_w + j) * b;
            for (int k = 0; k < b; ++k) {
                dst[k] = y.values()[(static_cast<size_t>(k) * (h * s) + i) * full_w + j] *
                         scale;
            }
        }
    }
    AcquisitionMeta meta = cube.meta();
    meta.pixel_pitch /= s;
    return HyperCube(out_h, out_w, cube.axis(), std::move(out), std::move(meta));
}

}  // namespace raman::nn
