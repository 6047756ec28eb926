#pragma once

#include <string>
#include <vector>

#include "raman/nn/ops.hpp"
#include "raman/nn/tensor.hpp"
#include "raman/rng.hpp"

namespace raman::nn {

// Named views used by the optimizer and the checkpoint writer. Parameters
// are Tensors with gradients; buffers are plain state (running statistics).
struct NamedParam {
    std::string name;
    Tensor tensor;
};
struct NamedBuffer {
    std::string name;
    std::vector<double>* values;
};

struct ParamRegistry {
    std::vector<NamedParam> params;
    std::vector<NamedBuffer> buffers;

    void add(const std::string& name, const Tensor& t) { params.push_back({name, t}); }
    void add_buffer(const std::string& name, std::vector<double>* v) {
        buffers.push_back({name, v});
    }
};

// Rounds every value through f32. Weights live in doubles but stay exactly
// representable in the checkpoint's f32 payload, which keeps save/load/save
// byte-stable and post-load forwards bit-identical.
void quantize_f32(std::vector<double>& values);

// Kaiming-normal fill (fan-in scaling), quantized to f32 grid.
void kaiming_init(Tensor& w, int fan_in, Rng& rng);

struct Conv1dLayer {
    int in_ch = 0, out_ch = 0, kernel = 1, stride = 1, pad = 0;
    Tensor w, b;

    void init(int in_channels, int out_channels, int k, int stride_, int pad_, Rng& rng);
    Tensor operator()(const Tensor& x) const { return conv1d(x, w, b, stride, pad); }
    void reg(ParamRegistry& r, const std::string& prefix) {
        r.add(prefix + ".w", w);
        r.add(prefix + ".b", b);
    }
};

struct ConvT1dLayer {
    int in_ch = 0, out_ch = 0, kernel = 2, stride = 2;
    Tensor w, b;

    void init(int in_channels, int out_channels, int k, int stride_, Rng& rng);
    Tensor operator()(const Tensor& x) const { return conv_transpose1d(x, w, b, stride); }
    void reg(ParamRegistry& r, const std::string& prefix) {
        r.add(prefix + ".w", w);
        r.add(prefix + ".b", b);
    }
};

struct Conv2dLayer {
    int in_ch = 0, out_ch = 0, kernel = 1, stride = 1, pad = 0;
    Tensor w, b;

    void init(int in_channels, int out_channels, int k, int stride_, int pad_, Rng& rng);
    Tensor operator()(const Tensor& x) const { return conv2d(x, w, b, stride, pad); }
    void reg(ParamRegistry& r, const std::string& prefix) {
        r.add(prefix + ".w", w);
        r.add(prefix + ".b", b);
    }
};

struct BatchNorm1dLayer {
    Tensor gamma, beta;
    RunningStats stats;

    void init(int channels);
    Tensor operator()(const Tensor& x, bool training) {
        return batchnorm1d(x, gamma, beta, stats, training);
    }
    void reg(ParamRegistry& r, const std::string& prefix) {
        r.add(prefix + ".gamma", gamma);
        r.add(prefix + ".beta", beta);
        r.add_buffer(prefix + ".running_mean", &stats.mean);
        r.add_buffer(prefix + ".running_var", &stats.var);
    }
};

struct LinearLayer {
    Tensor w, b;

    void init(int in_features, int out_features, Rng& rng);
    Tensor operator()(const Tensor& x) const { return linear(x, w, b); }
    void reg(ParamRegistry& r, const std::string& prefix) {
        r.add(prefix + ".w", w);
        r.add(prefix + ".b", b);
    }
};

// Squeeze-and-gate channel attention: pooled channel descriptor through a
// reduction bottleneck, sigmoid gate back onto the feature map.
struct ChannelAttention {
    LinearLayer down, up;

    void init(int channels, int reduction, Rng& rng);
    Tensor operator()(const Tensor& x) const;
    void reg(ParamRegistry& r, const std::string& prefix) {
        down.reg(r, prefix + ".down");
        up.reg(r, prefix + ".up");
    }
};

}  // namespace raman::nn
