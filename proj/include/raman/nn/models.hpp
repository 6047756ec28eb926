#pragma once

#include <memory>

#include "raman/nn/layers.hpp"

namespace raman::nn {

struct ResUNet1dConfig {
    int in_len = 0;
    int depth = 4;
    int base_channels = 64;
    int kernel = 5;
    bool use_batch_norm = true;

    void validate() const;
    bool operator==(const ResUNet1dConfig&) const = default;
};

struct HyrisrConfig {
    int bands = 0;
    int feature_channels = 64;   // spectral bottleneck width
    int n_residual_groups = 3;   // 18 at full scale
    int n_rcab_per_group = 4;    // 16 at full scale
    int attention_reduction = 16;
    int scale = 2;

    void validate() const;
    bool operator==(const HyrisrConfig&) const = default;
};

// Residual block: conv -> norm -> relu -> conv -> norm, additive skip
// (1x1-projected when channel counts differ), relu after the join.
struct ResBlock1d {
    Conv1dLayer conv1, conv2, proj;
    BatchNorm1dLayer bn1, bn2;
    bool use_bn = true;
    bool has_proj = false;

    void init(int in_ch, int out_ch, int kernel, bool bn, Rng& rng);
    Tensor forward(const Tensor& x, bool training);
    void reg(ParamRegistry& r, const std::string& prefix);
};

// Encoder-decoder denoiser over single spectra, (N, 1, in_len) in and out.
// Inputs are zero-padded to a multiple of 2^depth and cropped back.
class ResUNet1d {
  public:
    explicit ResUNet1d(const ResUNet1dConfig& cfg, uint64_t init_seed = 0);

    const ResUNet1dConfig& config() const { return cfg_; }
    Tensor forward(const Tensor& x, bool training);
    ParamRegistry& registry() { return reg_; }

  private:
    ResUNet1dConfig cfg_;
    Conv1dLayer stem_;
    std::vector<ResBlock1d> enc_;
    std::vector<Conv1dLayer> down_;
    ResBlock1d bottleneck_;
    std::vector<ConvT1dLayer> up_;
    std::vector<ResBlock1d> dec_;
    Conv1dLayer head_;
    ParamRegistry reg_;
};

// Residual channel attention block: conv -> relu -> conv -> channel
// attention, additive skip.
struct Rcab {
    Conv2dLayer conv1, conv2;
    ChannelAttention ca;

    void init(int channels, int reduction, Rng& rng);
    Tensor forward(const Tensor& x) const;
    void reg(ParamRegistry& r, const std::string& prefix);
};

struct ResidualGroup {
    std::vector<Rcab> blocks;
    Conv2dLayer tail;

    void init(int channels, int n_blocks, int reduction, Rng& rng);
    Tensor forward(const Tensor& x) const;
    void reg(ParamRegistry& r, const std::string& prefix);
};

// Hyperspectral super-resolution: 1x1 spectral downsampling, residual
// channel-attention trunk with a long skip, sub-pixel spatial upsampling
// (x3 as one stage, x4 as two x2 stages), 1x1 spectral upsampling.
class Hyrisr {
  public:
    explicit Hyrisr(const HyrisrConfig& cfg, uint64_t init_seed = 0);

    const HyrisrConfig& config() const { return cfg_; }
    Tensor forward(const Tensor& x, bool training = false);
    ParamRegistry& registry() { return reg_; }

  private:
    HyrisrConfig cfg_;
    Conv2dLayer spectral_down_;
    Conv2dLayer head_;
    std::vector<ResidualGroup> groups_;
    Conv2dLayer trunk_tail_;
    std::vector<Conv2dLayer> up_convs_;  // one per sub-pixel stage
    std::vector<int> up_factors_;
    Conv2dLayer spectral_up_;
    ParamRegistry reg_;
};

}  // namespace raman::nn
