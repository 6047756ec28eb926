#pragma once

#include "raman/nn/tensor.hpp"

namespace raman::nn {

// Running statistics owned by a batch-norm layer; updated only in training
// mode, consumed in eval mode.
struct RunningStats {
    std::vector<double> mean;
    std::vector<double> var;
    double momentum = 0.1;
    double eps = 1e-5;
};

// Cross-correlation, x: (N, Ci, L), w: (Co, Ci, K), b: (Co).
Tensor conv1d(const Tensor& x, const Tensor& w, const Tensor& b, int stride, int pad);

// Transposed conv, x: (N, Ci, L), w: (Ci, Co, K); output length (L-1)*stride + K.
Tensor conv_transpose1d(const Tensor& x, const Tensor& w, const Tensor& b, int stride);

// x: (N, Ci, H, W), w: (Co, Ci, Kh, Kw), b: (Co).
Tensor conv2d(const Tensor& x, const Tensor& w, const Tensor& b, int stride, int pad);

// Per-channel normalization over (N, L); batch statistics in training mode
// (running stats updated in place), running statistics in eval mode.
Tensor batchnorm1d(const Tensor& x, const Tensor& gamma, const Tensor& beta,
                   RunningStats& stats, bool training);

// x: (N, F), w: (O, F), b: (O).
Tensor linear(const Tensor& x, const Tensor& w, const Tensor& b);

// (N, C, H, W) -> (N, C) channel means.
Tensor global_avg_pool2d(const Tensor& x);

// Scales x: (N, C, H, W) by per-channel gates: (N, C).
Tensor channel_scale(const Tensor& x, const Tensor& gate);

// Sub-pixel rearrangement, (N, C*s*s, H, W) -> (N, C, s*H, s*W); channel
// c*s*s + dy*s + dx lands on spatial offset (dy, dx).
Tensor pixel_shuffle(const Tensor& x, int s);

// Exact inverse of pixel_shuffle.
Tensor pixel_unshuffle(const Tensor& x, int s);

// Concatenates (N, C1, L) and (N, C2, L) along channels.
Tensor concat_channels(const Tensor& a, const Tensor& b);

// Zero padding / cropping along the last (length) axis of (N, C, L).
Tensor pad1d(const Tensor& x, int left, int right);
Tensor crop1d(const Tensor& x, int start, int length);

}  // namespace raman::nn
