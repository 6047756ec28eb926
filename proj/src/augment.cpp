#include "raman/augment.hpp"

#include <cmath>
#include <cstring>

#include "raman/errors.hpp"

namespace raman::augment {

namespace {

void check_policy(const AugmentPolicy& p) {
    auto prob = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!prob(p.p_flip_h) || !prob(p.p_flip_v) || !prob(p.p_rot90) ||
        !prob(p.p_mixup) || !prob(p.p_spectral_flip)) {
        throw ParamError("augment: probabilities must be in [0, 1]");
    }
    if (p.crop_size < 1) throw ParamError("augment: crop_size must be >= 1");
    if (!(p.mixup_alpha > 0.0)) throw ParamError("augment: mixup_alpha must be > 0");
    if (p.max_spectral_shift < 0) throw ParamError("augment: max_spectral_shift < 0");
}

HyperCube crop_spatial(const HyperCube& c, int row0, int col0, int h, int w) {
    const int b = c.bands();
    std::vector<double> data(static_cast<size_t>(h) * w * b);
    for (int i = 0; i < h; ++i) {
        for (int j = 0; j < w; ++j) {
            std::memcpy(data.data() + (static_cast<size_t>(i) * w + j) * b,
                        c.spectrum_at(row0 + i, col0 + j).data(), b * sizeof(double));
        }
    }
    return HyperCube(h, w, c.axis(), std::move(data), c.meta());
}

// Permutes s x s pixel blocks through `map`, keeping within-block offsets, so
// the top-left decimation grid stays aligned across the pair.
template <typename BlockMap>
HyperCube permute_blocks(const HyperCube& c, int s, int out_bh, int out_bw,
                         BlockMap map) {
    const int b = c.bands();
    const int out_h = out_bh * s;
    const int out_w = out_bw * s;
    std::vector<double> data(static_cast<size_t>(out_h) * out_w * b);
    for (int bi = 0; bi < out_bh; ++bi) {
        for (int bj = 0; bj < out_bw; ++bj) {
            auto [si, sj] = map(bi, bj);
            for (int oi = 0; oi < s; ++oi) {
                for (int oj = 0; oj < s; ++oj) {
                    std::memcpy(
                        data.data() +
                            (static_cast<size_t>(bi * s + oi) * out_w + bj * s + oj) * b,
                        c.spectrum_at(si * s + oi, sj * s + oj).data(),
                        b * sizeof(double));
                }
            }
        }
    }
    return HyperCube(out_h, out_w, c.axis(), std::move(data), c.meta());
}

HyperCube flip_h(const HyperCube& c, int s) {
    const int bw = c.width() / s;
    return permute_blocks(c, s, c.height() / s, bw, [bw](int bi, int bj) {
        return std::pair<int, int>(bi, bw - 1 - bj);
    });
}

HyperCube flip_v(const HyperCube& c, int s) {
    const int bh = c.height() / s;
    return permute_blocks(c, s, bh, c.width() / s, [bh](int bi, int bj) {
        return std::pair<int, int>(bh - 1 - bi, bj);
    });
}

// One quarter turn clockwise (block granularity); requires square block grid.
HyperCube rot90(const HyperCube& c, int s) {
    const int n = c.height() / s;
    return permute_blocks(c, s, n, n, [n](int bi, int bj) {
        return std::pair<int, int>(n - 1 - bj, bi);
    });
}

}  // namespace

int pair_scale(const TrainingPair& pair) {
    if (pair.input.bands() != pair.target.bands()) {
        throw ShapeError("training pair: band counts differ");
    }
    if (pair.input.height() == pair.target.height() &&
        pair.input.width() == pair.target.width()) {
        return 1;
    }
    for (int s : {2, 3, 4}) {
        if (pair.target.height() == s * pair.input.height() &&
            pair.target.width() == s * pair.input.width()) {
            return s;
        }
    }
    throw ShapeError("training pair: target dims must equal or be 2-4x input dims");
}

TrainingPair augment_pair(const TrainingPair& pair, const AugmentPolicy& policy,
                          Rng& rng) {
    check_policy(policy);
    const int s = pair_scale(pair);
    const int ih = pair.input.height();
    const int iw = pair.input.width();
    if (policy.crop_size > ih || policy.crop_size > iw) {
        throw ParamError("augment: crop larger than image");
    }

    const int crop = policy.crop_size;
    const int row0 = static_cast<int>(rng.uniform_index(ih - crop + 1));
    const int col0 = static_cast<int>(rng.uniform_index(iw - crop + 1));
    HyperCube in = crop_spatial(pair.input, row0, col0, crop, crop);
    HyperCube tg = crop_spatial(pair.target, row0 * s, col0 * s, crop * s, crop * s);

    if (rng.bernoulli(policy.p_flip_h)) {
        in = flip_h(in, 1);
        tg = flip_h(tg, s);
    }
    if (rng.bernoulli(policy.p_flip_v)) {
        in = flip_v(in, 1);
        tg = flip_v(tg, s);
    }
    if (rng.bernoulli(policy.p_rot90)) {
        const int turns = 1 + static_cast<int>(rng.uniform_index(3));
        for (int t = 0; t < turns; ++t) {
            in = rot90(in, 1);
            tg = rot90(tg, s);
        }
    }
    if (policy.max_spectral_shift > 0) {
        const int span = 2 * policy.max_spectral_shift + 1;
        const int k = static_cast<int>(rng.uniform_index(span)) - policy.max_spectral_shift;
        if (k != 0) {
            in = spectral_shift(in, k);
            tg = spectral_shift(tg, k);
        }
    }
    if (rng.bernoulli(policy.p_spectral_flip)) {
        in = spectral_flip(in);
        tg = spectral_flip(tg);
    }
    return TrainingPair{std::move(in), std::move(tg)};
}

TrainingPair mixup(const TrainingPair& pair_a, const TrainingPair& pair_b,
                   double lambda) {
    if (pair_a.input.height() != pair_b.input.height() ||
        pair_a.input.width() != pair_b.input.width() ||
        pair_a.input.bands() != pair_b.input.bands() ||
        pair_a.target.height() != pair_b.target.height() ||
        pair_a.target.width() != pair_b.target.width() ||
        pair_a.target.bands() != pair_b.target.bands()) {
        throw ShapeError("mixup: pair dimensions differ");
    }
    auto blend = [lambda](const HyperCube& a, const HyperCube& b) {
        std::vector<double> data(a.data().size());
        for (size_t i = 0; i < data.size(); ++i) {
            data[i] = lambda * a.data()[i] + (1.0 - lambda) * b.data()[i];
        }
        return HyperCube(a.height(), a.width(), a.axis(), std::move(data), a.meta());
    };
    return TrainingPair{blend(pair_a.input, pair_b.input),
                        blend(pair_a.target, pair_b.target)};
}

HyperCube spectral_shift(const HyperCube& cube, int k) {
    const int b = cube.bands();
    if (std::abs(k) >= b) throw ParamError("spectral_shift: |k| must be < band count");
    std::vector<double> data(cube.data().size());
    const size_t pixels = static_cast<size_t>(cube.height()) * cube.width();
    for (size_t p = 0; p < pixels; ++p) {
        const double* src = cube.data().data() + p * b;
        double* dst = data.data() + p * b;
        for (int i = 0; i < b; ++i) {
            int j = i - k;
            if (j < 0) j = 0;
            if (j >= b) j = b - 1;
            dst[i] = src[j];
        }
    }
    return HyperCube(cube.height(), cube.width(), cube.axis(), std::move(data),
                     cube.meta());
}

HyperCube spectral_flip(const HyperCube& cube) {
    const int b = cube.bands();
    std::vector<double> data(cube.data().size());
    const size_t pixels = static_cast<size_t>(cube.height()) * cube.width();
    for (size_t p = 0; p < pixels; ++p) {
        const double* src = cube.data().data() + p * b;
        double* dst = data.data() + p * b;
        for (int i = 0; i < b; ++i) dst[i] = src[b - 1 - i];
    }
    return HyperCube(cube.height(), cube.width(), cube.axis(), std::move(data),
                     cube.meta());
}

}  // namespace raman::augment
