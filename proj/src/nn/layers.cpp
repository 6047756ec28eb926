#include "raman/nn/layers.hpp"

#include <cmath>

#include "raman/errors.hpp"

namespace raman::nn {

void quantize_f32(std::vector<double>& values) {
    for (double& v : values) v = static_cast<double>(static_cast<float>(v));
}

void kaiming_init(Tensor& w, int fan_in, Rng& rng) {
    const double sigma = std::sqrt(2.0 / static_cast<double>(fan_in));
    for (double& v : w.values()) v = rng.normal(0.0, sigma);
    quantize_f32(w.values());
}

void Conv1dLayer::init(int in_channels, int out_channels, int k, int stride_, int pad_,
                       Rng& rng) {
    in_ch = in_channels;
    out_ch = out_channels;
    kernel = k;
    stride = stride_;
    pad = pad_;
    w = Tensor::zeros({out_ch, in_ch, kernel}, true);
    b = Tensor::zeros({out_ch}, true);
    kaiming_init(w, in_ch * kernel, rng);
}

void ConvT1dLayer::init(int in_channels, int out_channels, int k, int stride_, Rng& rng) {
    in_ch = in_channels;
    out_ch = out_channels;
    kernel = k;
    stride = stride_;
    w = Tensor::zeros({in_ch, out_ch, kernel}, true);
    b = Tensor::zeros({out_ch}, true);
    kaiming_init(w, in_ch * kernel, rng);
}

void Conv2dLayer::init(int in_channels, int out_channels, int k, int stride_, int pad_,
                       Rng& rng) {
    in_ch = in_channels;
    out_ch = out_channels;
    kernel = k;
    stride = stride_;
    pad = pad_;
    w = Tensor::zeros({out_ch, in_ch, kernel, kernel}, true);
    b = Tensor::zeros({out_ch}, true);
    kaiming_init(w, in_ch * kernel * kernel, rng);
}

void BatchNorm1dLayer::init(int channels) {
    gamma = Tensor::full({channels}, 1.0, true);
    beta = Tensor::zeros({channels}, true);
    stats.mean.assign(channels, 0.0);
    stats.var.assign(channels, 1.0);
}

void LinearLayer::init(int in_features, int out_features, Rng& rng) {
    w = Tensor::zeros({out_features, in_features}, true);
    b = Tensor::zeros({out_features}, true);
    kaiming_init(w, in_features, rng);
}

void ChannelAttention::init(int channels, int reduction, Rng& rng) {
    if (channels < reduction) {
        throw ConfigError("channel attention: channels must be >= reduction");
    }
    down.init(channels, channels / reduction, rng);
    up.init(channels / reduction, channels, rng);
}

Tensor ChannelAttention::operator()(const Tensor& x) const {
    Tensor pooled = global_avg_pool2d(x);
    Tensor gate = sigmoid(up(relu(down(pooled))));
    return channel_scale(x, gate);
}

}  // namespace raman::nn
