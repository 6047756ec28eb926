#include "raman/nn/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "raman/errors.hpp"

namespace raman::nn {

namespace {

using augment::AugmentPolicy;
using augment::TrainingPair;

double cube_scale(const HyperCube& c) {
    double mx = 0.0;
    for (double v : c.data()) mx = std::max(mx, v);
    return mx > 0.0 ? mx : 1.0;
}

struct AdamState {
    std::vector<std::vector<double>> m, v;
    int64_t t = 0;

    void reset(const ParamRegistry& reg) {
        m.clear();
        v.clear();
        for (const auto& p : reg.params) {
            m.emplace_back(p.tensor.size(), 0.0);
            v.emplace_back(p.tensor.size(), 0.0);
        }
        t = 0;
    }
};

// Train/val split over pair indices. A single pair validates against itself.
void split_pairs(size_t n, double val_fraction, Rng& rng, std::vector<size_t>& train,
                 std::vector<size_t>& val) {
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (size_t i = n; i > 1; --i) {
        std::swap(order[i - 1], order[rng.uniform_index(i)]);
    }
    size_t n_val = n >= 2 ? std::max<size_t>(1, static_cast<size_t>(std::llround(
                                                    val_fraction * static_cast<double>(n))))
                          : 0;
    if (n_val >= n && n >= 2) n_val = n - 1;
    train.assign(order.begin(), order.end() - n_val);
    val.assign(order.end() - n_val, order.end());
    if (val.empty()) val = train;
}

struct TrainerContext {
    const std::vector<TrainingPair>& dataset;
    const TrainConfig& cfg;
    AugmentPolicy policy;
    std::vector<size_t> train_idx, val_idx;
    std::vector<double> pair_scale_cache;

    TrainerContext(const std::vector<TrainingPair>& data, const TrainConfig& tc,
                   const AugmentPolicy& pol, Rng& split_rng)
        : dataset(data), cfg(tc), policy(pol) {
        if (data.empty()) throw DataError("train: empty dataset");
        split_pairs(data.size(), tc.val_fraction, split_rng, train_idx, val_idx);
        pair_scale_cache.resize(data.size());
        for (size_t i = 0; i < data.size(); ++i) {
            pair_scale_cache[i] = cube_scale(data[i].input);
        }
    }
};

double scheduler_lr(const TrainConfig& cfg, int step, int total_steps) {
    if (cfg.scheduler == TrainConfig::Scheduler::OneCycle) {
        return one_cycle_lr(step, total_steps, cfg.max_lr);
    }
    return cfg.max_lr;
}

template <typename Model>
void optimizer_step(Model& model, AdamState& adam, const TrainConfig& cfg, double lr) {
    ++adam.t;
    auto& reg = model.registry();
    for (size_t i = 0; i < reg.params.size(); ++i) {
        Tensor& p = reg.params[i].tensor;
        if (p.grad().empty()) continue;  // parameter unused this step
        adam_step(p.values(), p.grad(), adam.m[i], adam.v[i], lr, adam.t, cfg.beta1,
                  cfg.beta2, cfg.eps);
        quantize_f32(p.values());
        p.zero_grad();
    }
    // Buffers (running stats) follow the same f32 grid as the payload format.
    for (auto& b : reg.buffers) quantize_f32(*b.values);
}

template <typename Model>
Checkpoint snapshot_model(Model& model, const AdamState& adam) {
    Checkpoint ckpt;
    ckpt.arrays = collect_arrays(model.registry());
    const auto& reg = model.registry();
    for (size_t i = 0; i < reg.params.size(); ++i) {
        std::vector<double> m = adam.m[i];
        std::vector<double> v = adam.v[i];
        quantize_f32(m);
        quantize_f32(v);
        ckpt.arrays.push_back({"adam.m." + reg.params[i].name,
                               reg.params[i].tensor.shape(), std::move(m)});
        ckpt.arrays.push_back({"adam.v." + reg.params[i].name,
                               reg.params[i].tensor.shape(), std::move(v)});
    }
    ckpt.adam_step = adam.t;
    return ckpt;
}

// ---- denoising task -------------------------------------------------------

struct SpectrumRef {
    size_t pair;
    int pixel;
};

TrainingPair spectrum_pair(const TrainingPair& pair, int pixel) {
    const auto& axis = pair.input.axis();
    auto in = pair.input.spectrum_at(pixel / pair.input.width(),
                                     pixel % pair.input.width());
    auto tg = pair.target.spectrum_at(pixel / pair.target.width(),
                                      pixel % pair.target.width());
    AcquisitionMeta meta = pair.input.meta();
    return TrainingPair{
        HyperCube(1, 1, axis, std::vector<double>(in.begin(), in.end()), meta),
        HyperCube(1, 1, axis, std::vector<double>(tg.begin(), tg.end()), meta)};
}

Tensor batch_tensor_1d(const std::vector<TrainingPair>& items,
                       const std::vector<double>& scales, bool target) {
    const int n = static_cast<int>(items.size());
    const int bands = items[0].input.bands();
    std::vector<double> values(static_cast<size_t>(n) * bands);
    for (int i = 0; i < n; ++i) {
        const auto& cube = target ? items[i].target : items[i].input;
        const double inv = 1.0 / scales[i];
        for (int k = 0; k < bands; ++k) {
            values[static_cast<size_t>(i) * bands + k] = cube.data()[k] * inv;
        }
    }
    return Tensor::from_values({n, 1, bands}, std::move(values));
}

double validate_denoiser(ResUNet1d& model, const TrainerContext& ctx) {
    NoGradGuard guard;
    double total = 0.0;
    int64_t count = 0;
    for (size_t idx : ctx.val_idx) {
        const TrainingPair& pair = ctx.dataset[idx];
        const double inv = 1.0 / ctx.pair_scale_cache[idx];
        const int pixels = pair.input.height() * pair.input.width();
        const int bands = pair.input.bands();
        const int chunk = 256;
        for (int p0 = 0; p0 < pixels; p0 += chunk) {
            const int n = std::min(chunk, pixels - p0);
            std::vector<double> in(static_cast<size_t>(n) * bands);
            for (int i = 0; i < n; ++i) {
                const double* src = pair.input.data().data() +
                                    static_cast<size_t>(p0 + i) * bands;
                for (int k = 0; k < bands; ++k) {
                    in[static_cast<size_t>(i) * bands + k] = src[k] * inv;
                }
            }
            Tensor x = Tensor::from_values({n, 1, bands}, std::move(in));
            Tensor y = model.forward(x, false);
            const double* tv = pair.target.data().data() +
                               static_cast<size_t>(p0) * bands;
            for (int64_t i = 0; i < y.size(); ++i) {
                total += std::abs(y.values()[i] - tv[i] * inv);
            }
            count += y.size();
        }
    }
    return total / static_cast<double>(count);
}

// ---- super-resolution task ------------------------------------------------

Tensor cube_tensor(const HyperCube& c, double scale_inv) {
    // (H, W, B) row-major to (1, B, H, W).
    const int h = c.height(), w = c.width(), b = c.bands();
    std::vector<double> values(static_cast<size_t>(b) * h * w);
    for (int i = 0; i < h; ++i) {
        for (int j = 0; j < w; ++j) {
            const double* src = c.data().data() + (static_cast<size_t>(i) * w + j) * b;
            for (int k = 0; k < b; ++k) {
                values[(static_cast<size_t>(k) * h + i) * w + j] = src[k] * scale_inv;
            }
        }
    }
    return Tensor::from_values({1, b, h, w}, std::move(values));
}

Tensor batch_tensor_2d(const std::vector<TrainingPair>& items,
                       const std::vector<double>& scales, bool target) {
    const int n = static_cast<int>(items.size());
    const auto& first = target ? items[0].target : items[0].input;
    const int b = first.bands(), h = first.height(), w = first.width();
    std::vector<double> values(static_cast<size_t>(n) * b * h * w);
    for (int i = 0; i < n; ++i) {
        const auto& cube = target ? items[i].target : items[i].input;
        if (cube.height() != h || cube.width() != w || cube.bands() != b) {
            throw ShapeError("train: augmented batch members have mixed dims");
        }
        const double inv = 1.0 / scales[i];
        double* dst = values.data() + static_cast<size_t>(i) * b * h * w;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const double* src =
                    cube.data().data() + (static_cast<size_t>(y) * w + x) * b;
                for (int k = 0; k < b; ++k) {
                    dst[(static_cast<size_t>(k) * h + y) * w + x] = src[k] * inv;
                }
            }
        }
    }
    std::vector<int> shape{n, b, h, w};
    return Tensor::from_values(std::move(shape), std::move(values));
}

double validate_superres(Hyrisr& model, const TrainerContext& ctx) {
    NoGradGuard guard;
    double total = 0.0;
    int64_t count = 0;
    for (size_t idx : ctx.val_idx) {
        const TrainingPair& pair = ctx.dataset[idx];
        const double inv = 1.0 / ctx.pair_scale_cache[idx];
        Tensor x = cube_tensor(pair.input, inv);
        Tensor y = model.forward(x, false);
        Tensor t = cube_tensor(pair.target, inv);
        for (int64_t i = 0; i < y.size(); ++i) {
            total += std::abs(y.values()[i] - t.values()[i]);
        }
        count += y.size();
    }
    return total / static_cast<double>(count);
}

// ---- shared loop ----------------------------------------------------------

// Runs the epoch/batch loop; `make_batch` returns {input, target} tensors for
// the given sample indices, drawing augmentation randomness from the rng.
template <typename Model, typename MakeBatch, typename Validate>
TrainResult run_training(Model& model, const TrainerContext& ctx,
                         const std::vector<size_t>& samples_per_epoch, int steps_per_epoch,
                         MakeBatch make_batch, Validate validate) {
    const TrainConfig& cfg = ctx.cfg;
    AdamState adam;
    adam.reset(model.registry());

    TrainResult result;
    Checkpoint best = snapshot_model(model, adam);
    best.epoch = 0;
    double best_val = std::numeric_limits<double>::infinity();

    Rng rng(Rng::derive_seed(cfg.seed, 0xA5A5));
    const int total_steps = std::max(1, cfg.epochs * steps_per_epoch);
    int step = 0;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::vector<size_t> order = samples_per_epoch;
        for (size_t i = order.size(); i > 1; --i) {
            std::swap(order[i - 1], order[rng.uniform_index(i)]);
        }
        double epoch_loss = 0.0;
        int batches = 0;
        double lr = cfg.max_lr;
        for (int s = 0; s < steps_per_epoch; ++s) {
            const size_t b0 = static_cast<size_t>(s) * cfg.batch_size;
            if (b0 >= order.size()) break;
            const size_t b1 = std::min(order.size(), b0 + cfg.batch_size);
            std::vector<size_t> batch_idx(order.begin() + b0, order.begin() + b1);
            auto [x, t] = make_batch(batch_idx, rng);
            Tensor loss = l1_loss(model.forward(x, true), t);
            loss.backward();
            lr = scheduler_lr(cfg, std::min(step, total_steps - 1), total_steps);
            optimizer_step(model, adam, cfg, lr);
            ++step;
            epoch_loss += loss.item();
            ++batches;
        }
        EpochStats stats;
        stats.epoch = epoch + 1;
        stats.train_l1 = batches > 0 ? epoch_loss / batches : 0.0;
        stats.val_l1 = validate();
        stats.lr = lr;
        result.history.push_back(stats);
        if (stats.val_l1 < best_val) {
            best_val = stats.val_l1;
            best = snapshot_model(model, adam);
            best.epoch = epoch + 1;
            best.best_val_l1 = stats.val_l1;
        }
    }
    result.checkpoint = std::move(best);
    return result;
}

AugmentPolicy clamp_policy(const AugmentPolicy& policy, int max_crop) {
    AugmentPolicy p = policy;
    if (p.crop_size < 1 || p.crop_size > max_crop) p.crop_size = max_crop;
    return p;
}

// Augments a batch of sample pairs and applies mixup inside the batch.
std::vector<TrainingPair> augment_batch(std::vector<TrainingPair> items,
                                        const AugmentPolicy& policy, Rng& rng) {
    for (auto& item : items) {
        item = augment::augment_pair(item, policy, rng);
    }
    if (policy.p_mixup > 0.0 && items.size() > 1) {
        for (size_t i = 0; i < items.size(); ++i) {
            if (rng.bernoulli(policy.p_mixup)) {
                const size_t j = rng.uniform_index(items.size());
                const double lambda = rng.beta(policy.mixup_alpha, policy.mixup_alpha);
                items[i] = augment::mixup(items[i], items[j], lambda);
            }
        }
    }
    return items;
}

}  // namespace

void TrainConfig::validate() const {
    if (epochs < 0) throw ConfigError("train: epochs must be >= 0");
    if (batch_size < 1) throw ConfigError("train: batch_size must be >= 1");
    if (!(max_lr > 0.0)) throw ConfigError("train: max_lr must be > 0");
    if (!(val_fraction > 0.0 && val_fraction < 1.0)) {
        throw ConfigError("train: val_fraction must be in (0, 1)");
    }
}

double one_cycle_lr(int step, int total_steps, double max_lr) {
    if (total_steps < 1) throw RangeError("one_cycle_lr: total_steps must be >= 1");
    if (step < 0 || step >= total_steps) throw RangeError("one_cycle_lr: step out of range");
    constexpr double div_start = 25.0;
    constexpr double div_final = 1e4;
    const int peak = static_cast<int>(std::llround(0.3 * (total_steps - 1)));
    const double lo = max_lr / div_start;
    const double fin = max_lr / div_final;
    if (step <= peak) {
        if (peak == 0) return max_lr;
        const double u = static_cast<double>(step) / peak;
        return lo + (max_lr - lo) * 0.5 * (1.0 - std::cos(M_PI * u));
    }
    const int span = total_steps - 1 - peak;
    const double u = static_cast<double>(step - peak) / span;
    return fin + (max_lr - fin) * 0.5 * (1.0 + std::cos(M_PI * u));
}

void adam_step(std::vector<double>& param, const std::vector<double>& grad,
               std::vector<double>& m, std::vector<double>& v, double lr, int64_t t,
               double beta1, double beta2, double eps) {
    if (param.size() != grad.size() || param.size() != m.size() ||
        param.size() != v.size()) {
        throw ShapeError("adam_step: size mismatch");
    }
    if (t < 1) throw ValueError("adam_step: t counts from 1");
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(t));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(t));
    for (size_t i = 0; i < param.size(); ++i) {
        m[i] = beta1 * m[i] + (1.0 - beta1) * grad[i];
        v[i] = beta2 * v[i] + (1.0 - beta2) * grad[i] * grad[i];
        const double mhat = m[i] / bc1;
        const double vhat = v[i] / bc2;
        param[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
}

TrainResult train_denoiser(const ResUNet1dConfig& cfg,
                           const std::vector<TrainingPair>& dataset,
                           const TrainConfig& train_cfg, const AugmentPolicy& policy) {
    cfg.validate();
    train_cfg.validate();
    Rng split_rng(Rng::derive_seed(train_cfg.seed, 0x5111));
    TrainerContext ctx(dataset, train_cfg, clamp_policy(policy, 1), split_rng);
    for (const auto& pair : dataset) {
        if (augment::pair_scale(pair) != 1) {
            throw ConfigError("train_denoiser: pairs must have matching dims");
        }
        if (pair.input.bands() != cfg.in_len) {
            throw ConfigError("train_denoiser: pair band count != in_len");
        }
    }

    ResUNet1d model(cfg, Rng::derive_seed(train_cfg.seed, 0x1217));

    // Sample space: every pixel of every training pair, capped per epoch.
    std::vector<SpectrumRef> refs;
    for (size_t idx : ctx.train_idx) {
        const int pixels = dataset[idx].input.height() * dataset[idx].input.width();
        for (int p = 0; p < pixels; ++p) refs.push_back({idx, p});
    }
    if (train_cfg.batch_size > static_cast<int>(refs.size())) {
        throw ConfigError("train: batch_size exceeds training sample count");
    }
    std::vector<size_t> sample_ids(refs.size());
    std::iota(sample_ids.begin(), sample_ids.end(), 0);
    const size_t cap = train_cfg.max_spectra_per_epoch > 0
                           ? std::min<size_t>(refs.size(), train_cfg.max_spectra_per_epoch)
                           : refs.size();
    const int steps = static_cast<int>((cap + train_cfg.batch_size - 1) / train_cfg.batch_size);

    auto make_batch = [&](const std::vector<size_t>& ids, Rng& rng) {
        std::vector<TrainingPair> items;
        std::vector<double> scales;
        items.reserve(ids.size());
        for (size_t id : ids) {
            const auto& ref = refs[id];
            items.push_back(spectrum_pair(ctx.dataset[ref.pair], ref.pixel));
            scales.push_back(ctx.pair_scale_cache[ref.pair]);
        }
        items = augment_batch(std::move(items), ctx.policy, rng);
        return std::pair<Tensor, Tensor>(batch_tensor_1d(items, scales, false),
                                         batch_tensor_1d(items, scales, true));
    };
    auto validate = [&]() { return validate_denoiser(model, ctx); };

    // Per-epoch subsampling happens through the shuffled prefix of sample ids.
    TrainResult result = run_training(model, ctx, sample_ids, steps, make_batch, validate);
    result.checkpoint.arch = "resunet1d";
    result.checkpoint.resunet = cfg;
    result.checkpoint.provenance = "train_denoiser seed=" + std::to_string(train_cfg.seed) +
                                   " epochs=" + std::to_string(train_cfg.epochs);
    return result;
}

TrainResult train_superres(const HyrisrConfig& cfg, const std::vector<TrainingPair>& dataset,
                           const TrainConfig& train_cfg, const AugmentPolicy& policy) {
    cfg.validate();
    train_cfg.validate();
    int min_dim = std::numeric_limits<int>::max();
    for (const auto& pair : dataset) {
        if (augment::pair_scale(pair) != cfg.scale) {
            throw ConfigError("train_superres: pair scale != model scale");
        }
        if (pair.input.bands() != cfg.bands) {
            throw ConfigError("train_superres: pair band count != model bands");
        }
        min_dim = std::min({min_dim, pair.input.height(), pair.input.width()});
    }
    Rng split_rng(Rng::derive_seed(train_cfg.seed, 0x5111));
    TrainerContext ctx(dataset, train_cfg, clamp_policy(policy, min_dim), split_rng);

    Hyrisr model(cfg, Rng::derive_seed(train_cfg.seed, 0x1217));

    if (train_cfg.batch_size > static_cast<int>(ctx.train_idx.size())) {
        throw ConfigError("train: batch_size exceeds training sample count");
    }
    std::vector<size_t> sample_ids(ctx.train_idx.size());
    std::iota(sample_ids.begin(), sample_ids.end(), 0);
    const int steps = static_cast<int>(
        (ctx.train_idx.size() + train_cfg.batch_size - 1) / train_cfg.batch_size);

    auto make_batch = [&](const std::vector<size_t>& ids, Rng& rng) {
        std::vector<TrainingPair> items;
        std::vector<double> scales;
        for (size_t id : ids) {
            const size_t idx = ctx.train_idx[id];
            items.push_back(ctx.dataset[idx]);
            scales.push_back(ctx.pair_scale_cache[idx]);
        }
        items = augment_batch(std::move(items), ctx.policy, rng);
        return std::pair<Tensor, Tensor>(batch_tensor_2d(items, scales, false),
                                         batch_tensor_2d(items, scales, true));
    };
    auto validate = [&]() { return validate_superres(model, ctx); };

    TrainResult result = run_training(model, ctx, sample_ids, steps, make_batch, validate);
    result.checkpoint.arch = "hyrisr";
    result.checkpoint.hyrisr = cfg;
    result.checkpoint.provenance = "train_superres seed=" + std::to_string(train_cfg.seed) +
                                   " epochs=" + std::to_string(train_cfg.epochs);
    return result;
}

TrainResult fine_tune(const Checkpoint& parent, const std::vector<TrainingPair>& dataset,
                      const TrainConfig& train_cfg, const AugmentPolicy& policy) {
    train_cfg.validate();
    if (dataset.empty()) throw DataError("fine_tune: empty dataset");
    const std::string parent_hash = parent.weight_sha256();

    TrainResult result;
    if (parent.arch == "resunet1d") {
        for (const auto& pair : dataset) {
            if (pair.input.bands() != parent.resunet.in_len) {
                throw ConfigError("fine_tune: band count does not match checkpoint");
            }
        }
        Rng split_rng(Rng::derive_seed(train_cfg.seed, 0x5111));
        TrainerContext ctx(dataset, train_cfg, clamp_policy(policy, 1), split_rng);
        ResUNet1d model = build_resunet(parent);
        std::vector<SpectrumRef> refs;
        for (size_t idx : ctx.train_idx) {
            const int pixels = dataset[idx].input.height() * dataset[idx].input.width();
            for (int p = 0; p < pixels; ++p) refs.push_back({idx, p});
        }
        if (train_cfg.batch_size > static_cast<int>(refs.size())) {
            throw ConfigError("train: batch_size exceeds training sample count");
        }
        std::vector<size_t> sample_ids(refs.size());
        std::iota(sample_ids.begin(), sample_ids.end(), 0);
        const size_t cap =
            train_cfg.max_spectra_per_epoch > 0
                ? std::min<size_t>(refs.size(), train_cfg.max_spectra_per_epoch)
                : refs.size();
        const int steps =
            static_cast<int>((cap + train_cfg.batch_size - 1) / train_cfg.batch_size);
        auto make_batch = [&](const std::vector<size_t>& ids, Rng& rng) {
            std::vector<TrainingPair> items;
            std::vector<double> scales;
            for (size_t id : ids) {
                const auto& ref = refs[id];
                items.push_back(spectrum_pair(ctx.dataset[ref.pair], ref.pixel));
                scales.push_back(ctx.pair_scale_cache[ref.pair]);
            }
            items = augment_batch(std::move(items), ctx.policy, rng);
            return std::pair<Tensor, Tensor>(batch_tensor_1d(items, scales, false),
                                             batch_tensor_1d(items, scales, true));
        };
        auto validate = [&]() { return validate_denoiser(model, ctx); };
        result = run_training(model, ctx, sample_ids, steps, make_batch, validate);
        result.checkpoint.arch = "resunet1d";
        result.checkpoint.resunet = parent.resunet;
    } else if (parent.arch == "hyrisr") {
        int min_dim = std::numeric_limits<int>::max();
        for (const auto& pair : dataset) {
            if (augment::pair_scale(pair) != parent.hyrisr.scale) {
                throw ConfigError("fine_tune: pair scale does not match checkpoint");
            }
            if (pair.input.bands() != parent.hyrisr.bands) {
                throw ConfigError("fine_tune: band count does not match checkpoint");
            }
            min_dim = std::min({min_dim, pair.input.height(), pair.input.width()});
        }
        Rng split_rng(Rng::derive_seed(train_cfg.seed, 0x5111));
        TrainerContext ctx(dataset, train_cfg, clamp_policy(policy, min_dim), split_rng);
        Hyrisr model = build_hyrisr(parent);
        if (train_cfg.batch_size > static_cast<int>(ctx.train_idx.size())) {
            throw ConfigError("train: batch_size exceeds training sample count");
        }
        std::vector<size_t> sample_ids(ctx.train_idx.size());
        std::iota(sample_ids.begin(), sample_ids.end(), 0);
        const int steps = static_cast<int>(
            (ctx.train_idx.size() + train_cfg.batch_size - 1) / train_cfg.batch_size);
        auto make_batch = [&](const std::vector<size_t>& ids, Rng& rng) {
            std::vector<TrainingPair> items;
            std::vector<double> scales;
            for (size_t id : ids) {
                const size_t idx = ctx.train_idx[id];
                items.push_back(ctx.dataset[idx]);
                scales.push_back(ctx.pair_scale_cache[idx]);
            }
            items = augment_batch(std::move(items), ctx.policy, rng);
            return std::pair<Tensor, Tensor>(batch_tensor_2d(items, scales, false),
                                             batch_tensor_2d(items, scales, true));
        };
        auto validate = [&]() { return validate_superres(model, ctx); };
        result = run_training(model, ctx, sample_ids, steps, make_batch, validate);
        result.checkpoint.arch = "hyrisr";
        result.checkpoint.hyrisr = parent.hyrisr;
    } else {
        throw ConfigError("fine_tune: unknown architecture '" + parent.arch + "'");
    }
    result.checkpoint.provenance = parent.provenance + "; fine_tune parent_sha256=" +
                                   parent_hash + " seed=" + std::to_string(train_cfg.seed) +
                                   " epochs=" + std::to_string(train_cfg.epochs);
    return result;
}

}  // namespace raman::nn
