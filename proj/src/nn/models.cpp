#include "raman/nn/models.hpp"

#include "raman/errors.hpp"

namespace raman::nn {

void ResUNet1dConfig::validate() const {
    if (in_len < 1) throw ConfigError("resunet1d: in_len must be >= 1");
    if (depth < 1) throw ConfigError("resunet1d: depth must be >= 1");
    if (base_channels < 1) throw ConfigError("resunet1d: base_channels must be >= 1");
    if (kernel < 1 || kernel % 2 == 0) throw ConfigError("resunet1d: kernel must be odd");
}

void HyrisrConfig::validate() const {
    if (bands < 1) throw ConfigError("hyrisr: bands must be >= 1");
    if (feature_channels < attention_reduction) {
        throw ConfigError("hyrisr: feature_channels must be >= attention_reduction");
    }
    if (n_residual_groups < 1 || n_rcab_per_group < 1) {
        throw ConfigError("hyrisr: group/block counts must be >= 1");
    }
    if (attention_reduction < 1) throw ConfigError("hyrisr: reduction must be >= 1");
    if (scale < 2 || scale > 4) throw ConfigError("hyrisr: scale must be 2, 3 or 4");
}

void ResBlock1d::init(int in_ch, int out_ch, int kernel, bool bn, Rng& rng) {
    use_bn = bn;
    has_proj = in_ch != out_ch;
    const int pad = (kernel - 1) / 2;
    conv1.init(in_ch, out_ch, kernel, 1, pad, rng);
    conv2.init(out_ch, out_ch, kernel, 1, pad, rng);
    if (has_proj) proj.init(in_ch, out_ch, 1, 1, 0, rng);
    if (use_bn) {
        bn1.init(out_ch);
        bn2.init(out_ch);
    }
}

Tensor ResBlock1d::forward(const Tensor& x, bool training) {
    Tensor h = conv1(x);
    if (use_bn) h = bn1(h, training);
    h = relu(h);
    h = conv2(h);
    if (use_bn) h = bn2(h, training);
    Tensor skip = has_proj ? proj(x) : x;
    return relu(add(h, skip));
}

void ResBlock1d::reg(ParamRegistry& r, const std::string& prefix) {
    conv1.reg(r, prefix + ".conv1");
    conv2.reg(r, prefix + ".conv2");
    if (has_proj) proj.reg(r, prefix + ".proj");
    if (use_bn) {
        bn1.reg(r, prefix + ".bn1");
        bn2.reg(r, prefix + ".bn2");
    }
}

ResUNet1d::ResUNet1d(const ResUNet1dConfig& cfg, uint64_t init_seed) : cfg_(cfg) {
    cfg_.validate();
    Rng rng(init_seed);
    const int k = cfg_.kernel;
    const int pad = (k - 1) / 2;
    auto ch = [&](int level) { return cfg_.base_channels << level; };

    stem_.init(1, ch(0), k, 1, pad, rng);
    enc_.resize(cfg_.depth);
    down_.resize(cfg_.depth);
    up_.resize(cfg_.depth);
    dec_.resize(cfg_.depth);
    for (int l = 0; l < cfg_.depth; ++l) {
        enc_[l].init(ch(l), ch(l), k, cfg_.use_batch_norm, rng);
        down_[l].init(ch(l), ch(l + 1), k, 2, pad, rng);
    }
    bottleneck_.init(ch(cfg_.depth), ch(cfg_.depth), k, cfg_.use_batch_norm, rng);
    for (int l = cfg_.depth - 1; l >= 0; --l) {
        up_[l].init(ch(l + 1), ch(l), 2, 2, rng);
        dec_[l].init(2 * ch(l), ch(l), k, cfg_.use_batch_norm, rng);
    }
    head_.init(ch(0), 1, 1, 1, 0, rng);

    stem_.reg(reg_, "stem");
    for (int l = 0; l < cfg_.depth; ++l) {
        enc_[l].reg(reg_, "enc" + std::to_string(l));
        down_[l].reg(reg_, "down" + std::to_string(l));
    }
    bottleneck_.reg(reg_, "bottleneck");
    for (int l = cfg_.depth - 1; l >= 0; --l) {
        up_[l].reg(reg_, "up" + std::to_string(l));
        dec_[l].reg(reg_, "dec" + std::to_string(l));
    }
    head_.reg(reg_, "head");
}

Tensor ResUNet1d::forward(const Tensor& x, bool training) {
    if (x.ndim() != 3 || x.dim(1) != 1) {
        throw ShapeError("resunet1d: expected (N, 1, L)");
    }
    if (x.dim(2) != cfg_.in_len) {
        throw ShapeError("resunet1d: input length does not match configured in_len");
    }
    const int mult = 1 << cfg_.depth;
    const int padded = (cfg_.in_len + mult - 1) / mult * mult;
    Tensor h = padded == cfg_.in_len ? x : pad1d(x, 0, padded - cfg_.in_len);

    h = stem_(h);
    std::vector<Tensor> skips(cfg_.depth);
    for (int l = 0; l < cfg_.depth; ++l) {
        h = enc_[l].forward(h, training);
        skips[l] = h;
        h = down_[l](h);
    }
    h = bottleneck_.forward(h, training);
    for (int l = cfg_.depth - 1; l >= 0; --l) {
        h = up_[l](h);
        h = concat_channels(h, skips[l]);
        h = dec_[l].forward(h, training);
    }
    h = head_(h);
    if (padded != cfg_.in_len) h = crop1d(h, 0, cfg_.in_len);
    return h;
}

void Rcab::init(int channels, int reduction, Rng& rng) {
    conv1.init(channels, channels, 3, 1, 1, rng);
    conv2.init(channels, channels, 3, 1, 1, rng);
    ca.init(channels, reduction, rng);
}

Tensor Rcab::forward(const Tensor& x) const {
    Tensor h = conv2(relu(conv1(x)));
    return add(ca(h), x);
}

void Rcab::reg(ParamRegistry& r, const std::string& prefix) {
    conv1.reg(r, prefix + ".conv1");
    conv2.reg(r, prefix + ".conv2");
    ca.reg(r, prefix + ".ca");
}

void ResidualGroup::init(int channels, int n_blocks, int reduction, Rng& rng) {
    blocks.resize(n_blocks);
    for (auto& b : blocks) b.init(channels, reduction, rng);
    tail.init(channels, channels, 3, 1, 1, rng);
}

Tensor ResidualGroup::forward(const Tensor& x) const {
    Tensor h = x;
    for (const auto& b : blocks) h = b.forward(h);
    return add(tail(h), x);
}

void ResidualGroup::reg(ParamRegistry& r, const std::string& prefix) {
    for (size_t i = 0; i < blocks.size(); ++i) {
        blocks[i].reg(r, prefix + ".rcab" + std::to_string(i));
    }
    tail.reg(r, prefix + ".tail");
}

Hyrisr::Hyrisr(const HyrisrConfig& cfg, uint64_t init_seed) : cfg_(cfg) {
    cfg_.validate();
    Rng rng(init_seed);
    const int c = cfg_.feature_channels;

    spectral_down_.init(cfg_.bands, c, 1, 1, 0, rng);
    head_.init(c, c, 3, 1, 1, rng);
    groups_.resize(cfg_.n_residual_groups);
    for (auto& g : groups_) {
        g.init(c, cfg_.n_rcab_per_group, cfg_.attention_reduction, rng);
    }
    trunk_tail_.init(c, c, 3, 1, 1, rng);
    up_factors_ = cfg_.scale == 4 ? std::vector<int>{2, 2} : std::vector<int>{cfg_.scale};
    up_convs_.resize(up_factors_.size());
    for (size_t i = 0; i < up_factors_.size(); ++i) {
        const int f = up_factors_[i];
        up_convs_[i].init(c, c * f * f, 3, 1, 1, rng);
    }
    spectral_up_.init(c, cfg_.bands, 1, 1, 0, rng);

    spectral_down_.reg(reg_, "spectral_down");
    head_.reg(reg_, "head");
    for (size_t i = 0; i < groups_.size(); ++i) {
        groups_[i].reg(reg_, "group" + std::to_string(i));
    }
    trunk_tail_.reg(reg_, "trunk_tail");
    for (size_t i = 0; i < up_convs_.size(); ++i) {
        up_convs_[i].reg(reg_, "up" + std::to_string(i));
    }
    spectral_up_.reg(reg_, "spectral_up");
}

Tensor Hyrisr::forward(const Tensor& x, bool) {
    if (x.ndim() != 4 || x.dim(1) != cfg_.bands) {
        throw ShapeError("hyrisr: expected (N, bands, H, W)");
    }
    Tensor shallow = head_(spectral_down_(x));
    Tensor h = shallow;
    for (const auto& g : groups_) h = g.forward(h);
    h = add(trunk_tail_(h), shallow);  // long skip over the trunk
    for (size_t i = 0; i < up_convs_.size(); ++i) {
        h = pixel_shuffle(up_convs_[i](h), up_factors_[i]);
    }
    return spectral_up_(h);
}

}  // namespace raman::nn
