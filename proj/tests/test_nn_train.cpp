#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "raman/errors.hpp"
#include "raman/nn/infer.hpp"
#include "raman/nn/train.hpp"
#include "raman/resample.hpp"
#include "raman/synth.hpp"
#include "test_util.hpp"

using namespace raman;
using namespace raman::nn;
using augment::AugmentPolicy;
using augment::TrainingPair;

namespace {

// Small synthetic denoising dataset: a few cubes with noisy inputs.
std::vector<TrainingPair> denoise_dataset(int cubes, int size, int bands, uint64_t seed) {
    auto axis = testutil::linear_axis(bands);
    std::vector<TrainingPair> pairs;
    for (int i = 0; i < cubes; ++i) {
        auto comps = synth::component_library("cells");
        auto truth = synth::gen_phantom(comps, size, size, axis,
                                        Rng::derive_seed(seed, i));
        HyperCube noisy = synth::apply_noise(truth.clean, {0.1, 100.0, 1.0},
                                             Rng::derive_seed(seed, 100 + i));
        pairs.push_back({noisy, truth.clean});
    }
    return pairs;
}

std::vector<TrainingPair> sr_dataset(int cubes, int size, int bands, int scale,
                                     uint64_t seed) {
    auto axis = testutil::linear_axis(bands);
    std::vector<TrainingPair> pairs;
    for (int i = 0; i < cubes; ++i) {
        auto comps = synth::component_library("cells");
        auto truth = synth::gen_phantom(comps, size, size, axis,
                                        Rng::derive_seed(seed, i));
        pairs.push_back({resample::decimate(truth.clean, scale), truth.clean});
    }
    return pairs;
}

bool arrays_equal(const std::vector<NamedArray>& a, const std::vector<NamedArray>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].name != b[i].name || a[i].values != b[i].values) return false;
    }
    return true;
}

AugmentPolicy no_augment() {
    AugmentPolicy p;
    p.p_flip_h = p.p_flip_v = p.p_rot90 = 0.0;
    p.p_mixup = 0.0;
    p.max_spectral_shift = 0;
    p.p_spectral_flip = 0.0;
    return p;
}

ResUNet1dConfig tiny_denoiser(int bands) {
    ResUNet1dConfig cfg;
    cfg.in_len = bands;
    cfg.depth = 2;
    cfg.base_channels = 4;
    cfg.kernel = 5;
    return cfg;
}

HyrisrConfig tiny_sr(int bands, int scale) {
    HyrisrConfig cfg;
    cfg.bands = bands;
    cfg.feature_channels = 8;
    cfg.n_residual_groups = 1;
    cfg.n_rcab_per_group = 1;
    cfg.attention_reduction = 4;
    cfg.scale = scale;
    return cfg;
}

}  // namespace

TEST_CASE("one_cycle_lr schedule") {
    const int total = 1000;
    const double max_lr = 5e-4;
    const int peak = static_cast<int>(std::llround(0.3 * (total - 1)));

    CHECK(one_cycle_lr(0, total, max_lr) == doctest::Approx(max_lr / 25.0).epsilon(1e-12));
    CHECK(one_cycle_lr(peak, total, max_lr) == max_lr);
    CHECK(one_cycle_lr(total - 1, total, max_lr) ==
          doctest::Approx(max_lr / 1e4).epsilon(1e-9));

    double prev = 0.0;
    for (int s = 0; s <= peak; ++s) {
        const double lr = one_cycle_lr(s, total, max_lr);
        CHECK(lr >= prev);
        prev = lr;
    }
    for (int s = peak + 1; s < total; ++s) {
        const double lr = one_cycle_lr(s, total, max_lr);
        CHECK(lr <= prev);
        prev = lr;
    }
    CHECK_THROWS_AS(one_cycle_lr(-1, total, max_lr), RangeError);
    CHECK_THROWS_AS(one_cycle_lr(total, total, max_lr), RangeError);
}

TEST_CASE("adam_step") {
    SUBCASE("zero gradient leaves parameters unchanged") {
        std::vector<double> p{1.0, -2.0}, g{0.0, 0.0}, m{0.0, 0.0}, v{0.0, 0.0};
        adam_step(p, g, m, v, 0.1, 1);
        CHECK(p == std::vector<double>{1.0, -2.0});
    }
    SUBCASE("first step moves by about -lr * sign(g)") {
        std::vector<double> p{0.0}, g{0.37}, m{0.0}, v{0.0};
        adam_step(p, g, m, v, 1e-3, 1);
        CHECK(p[0] == doctest::Approx(-1e-3).epsilon(1e-4));
        std::vector<double> p2{0.0}, g2{-42.0}, m2{0.0}, v2{0.0};
        adam_step(p2, g2, m2, v2, 1e-3, 1);
        CHECK(p2[0] == doctest::Approx(1e-3).epsilon(1e-4));
    }
    SUBCASE("three-step trajectory matches a hand-rolled reference") {
        // Reference: textbook update sequence on f(x) = x^2, written out in
        // full, independent of the library implementation.
        const double lr = 0.1, b1 = 0.9, b2 = 0.999, eps = 1e-8;
        double x_ref = 1.0, m_ref = 0.0, v_ref = 0.0;
        for (int t = 1; t <= 3; ++t) {
            const double g = 2.0 * x_ref;
            m_ref = b1 * m_ref + (1 - b1) * g;
            v_ref = b2 * v_ref + (1 - b2) * g * g;
            const double mhat = m_ref / (1 - std::pow(b1, t));
            const double vhat = v_ref / (1 - std::pow(b2, t));
            x_ref -= lr * mhat / (std::sqrt(vhat) + eps);
        }
        std::vector<double> p{1.0}, m{0.0}, v{0.0};
        for (int t = 1; t <= 3; ++t) {
            std::vector<double> g{2.0 * p[0]};
            adam_step(p, g, m, v, lr, t, b1, b2, eps);
        }
        CHECK(std::abs(p[0] - x_ref) < 1e-12);
    }
    SUBCASE("guards") {
        std::vector<double> p{1.0}, g{1.0, 2.0}, m{0.0}, v{0.0};
        CHECK_THROWS_AS(adam_step(p, g, m, v, 0.1, 1), ShapeError);
        std::vector<double> g1{1.0};
        CHECK_THROWS_AS(adam_step(p, g1, m, v, 0.1, 0), ValueError);
    }
}

TEST_CASE("train with zero epochs returns the initialization") {
    auto pairs = denoise_dataset(2, 4, 32, 50);
    TrainConfig cfg;
    cfg.epochs = 0;
    cfg.batch_size = 4;
    cfg.seed = 17;
    TrainResult result = train_denoiser(tiny_denoiser(32), pairs, cfg, no_augment());
    CHECK(result.history.empty());
    CHECK(result.checkpoint.epoch == 0);

    ResUNet1d fresh(tiny_denoiser(32), Rng::derive_seed(cfg.seed, 0x1217));
    auto init_arrays = collect_arrays(fresh.registry());
    for (const auto& a : init_arrays) {
        const NamedArray* found = result.checkpoint.find(a.name);
        REQUIRE(found != nullptr);
        CHECK(found->values == a.values);
    }
}

TEST_CASE("training is bit-reproducible under a fixed seed") {
    auto pairs = denoise_dataset(2, 4, 32, 51);
    TrainConfig cfg;
    cfg.epochs = 2;
    cfg.batch_size = 8;
    cfg.max_lr = 1e-3;
    cfg.seed = 5;
    cfg.max_spectra_per_epoch = 16;
    AugmentPolicy policy = no_augment();
    policy.max_spectral_shift = 1;
    policy.p_spectral_flip = 0.5;

    TrainResult a = train_denoiser(tiny_denoiser(32), pairs, cfg, policy);
    TrainResult b = train_denoiser(tiny_denoiser(32), pairs, cfg, policy);
    CHECK(arrays_equal(a.checkpoint.arrays, b.checkpoint.arrays));
    REQUIRE(a.history.size() == b.history.size());
    for (size_t i = 0; i < a.history.size(); ++i) {
        CHECK(a.history[i].train_l1 == b.history[i].train_l1);
        CHECK(a.history[i].val_l1 == b.history[i].val_l1);
    }

    // Serialized form is byte-identical too.
    testutil::TempDir dir("train_repro");
    save_checkpoint(a.checkpoint, dir.file("a.dprc"));
    save_checkpoint(b.checkpoint, dir.file("b.dprc"));
    CHECK(testutil::read_file_bytes(dir.file("a.dprc")) ==
          testutil::read_file_bytes(dir.file("b.dprc")));
}

TEST_CASE("a short run on a fixed pair reduces the training loss") {
    auto pairs = denoise_dataset(1, 4, 32, 52);
    TrainConfig cfg;
    cfg.epochs = 10;
    cfg.batch_size = 16;
    cfg.max_lr = 2e-3;
    cfg.scheduler = TrainConfig::Scheduler::Constant;
    cfg.seed = 3;
    cfg.max_spectra_per_epoch = 0;
    TrainResult result = train_denoiser(tiny_denoiser(32), pairs, cfg, no_augment());
    REQUIRE(result.history.size() == 10);
    CHECK(result.history.back().train_l1 < result.history.front().train_l1);
}

TEST_CASE("super-resolution training runs and improves") {
    auto pairs = sr_dataset(3, 8, 16, 2, 53);
    TrainConfig cfg;
    cfg.epochs = 6;
    cfg.batch_size = 2;
    cfg.max_lr = 2e-3;
    cfg.scheduler = TrainConfig::Scheduler::Constant;
    cfg.seed = 9;
    TrainResult result = train_superres(tiny_sr(16, 2), pairs, cfg, no_augment());
    REQUIRE(result.history.size() == 6);
    CHECK(result.history.back().train_l1 < result.history.front().train_l1);

    SUBCASE("scale mismatch is rejected") {
        CHECK_THROWS_AS(train_superres(tiny_sr(16, 3), pairs, cfg, no_augment()),
                        ConfigError);
    }
}

TEST_CASE("fine_tune") {
    auto pairs = sr_dataset(2, 8, 16, 2, 54);
    TrainConfig cfg;
    cfg.epochs = 1;
    cfg.batch_size = 1;
    cfg.seed = 4;
    TrainResult parent = train_superres(tiny_sr(16, 2), pairs, cfg, no_augment());

    SUBCASE("zero epochs keeps the parent weights") {
        TrainConfig ft = cfg;
        ft.epochs = 0;
        TrainResult child = fine_tune(parent.checkpoint, pairs, ft, no_augment());
        for (const auto& a : child.checkpoint.arrays) {
            if (a.name.rfind("adam.", 0) == 0) continue;  // moments reset
            const NamedArray* p = parent.checkpoint.find(a.name);
            REQUIRE(p != nullptr);
            CHECK(p->values == a.values);
        }
        CHECK(child.checkpoint.adam_step == 0);
        // Provenance records the parent weight hash.
        CHECK(child.checkpoint.provenance.find(parent.checkpoint.weight_sha256()) !=
              std::string::npos);
    }
    SUBCASE("band mismatch is rejected") {
        auto other = sr_dataset(2, 8, 12, 2, 55);
        CHECK_THROWS_AS(fine_tune(parent.checkpoint, other, cfg, no_augment()),
                        ConfigError);
    }
    SUBCASE("empty dataset is rejected") {
        CHECK_THROWS_AS(fine_tune(parent.checkpoint, {}, cfg, no_augment()), DataError);
    }
}

TEST_CASE("infer_denoise") {
    auto pairs = denoise_dataset(1, 4, 32, 56);
    TrainConfig cfg;
    cfg.epochs = 1;
    cfg.batch_size = 8;
    cfg.seed = 2;
    cfg.max_spectra_per_epoch = 8;
    TrainResult r = train_denoiser(tiny_denoiser(32), pairs, cfg, no_augment());

    HyperCube cube = pairs[0].input;
    HyperCube out = infer_denoise(r.checkpoint, cube);
    CHECK(out.height() == cube.height());
    CHECK(out.width() == cube.width());
    CHECK(out.bands() == cube.bands());
    CHECK(out.axis() == cube.axis());

    SUBCASE("batched inference equals per-spectrum inference") {
        for (int p : {0, 5, 15}) {
            const int i = p / cube.width(), j = p % cube.width();
            auto spec = cube.spectrum_at(i, j);
            // A full-cube pass normalizes by the cube max; mimic that on the
            // single spectrum by reusing the same scale through a 1x1 cube
            // carrying the cube maximum in-band.
            HyperCube single(1, 1, cube.axis(),
                             std::vector<double>(spec.begin(), spec.end()), cube.meta());
            // Scales differ between cube and single-pixel runs, so compare
            // through the model directly at matched normalization instead.
            (void)single;
            ResUNet1d model = build_resunet(r.checkpoint);
            NoGradGuard guard;
            double scale = 0.0;
            for (double v : cube.data()) scale = std::max(scale, v);
            const double inv = 1.0 / scale;
            std::vector<double> in(spec.begin(), spec.end());
            for (double& v : in) v *= inv;
            Tensor y = model.forward(Tensor::from_values({1, 1, 32}, in), false);
            for (int k = 0; k < 32; ++k) {
                CHECK(out.at(i, j, k) == y.values()[k] * scale);
            }
        }
    }
    SUBCASE("band mismatch is rejected") {
        auto other = testutil::random_cube(2, 2, 16, 1);
        CHECK_THROWS_AS(infer_denoise(r.checkpoint, other), ConfigError);
    }
}

TEST_CASE("infer_superres") {
    for (int s : {2, 3, 4}) {
        auto pairs = sr_dataset(2, 4 * s, 12, s, 60 + s);
        TrainConfig cfg;
        cfg.epochs = 1;
        cfg.batch_size = 1;
        cfg.seed = 8;
        TrainResult r = train_superres(tiny_sr(12, s), pairs, cfg, no_augment());
        HyperCube lr = pairs[0].input;
        HyperCube up = infer_superres(r.checkpoint, lr, lr.height() * s, lr.width() * s);
        CHECK(up.height() == lr.height() * s);
        CHECK(up.width() == lr.width() * s);
        CHECK(up.bands() == 12);
        CHECK(up.meta().pixel_pitch ==
              doctest::Approx(lr.meta().pixel_pitch / s).epsilon(1e-12));

        HyperCube again = infer_superres(r.checkpoint, lr, lr.height() * s, lr.width() * s);
        CHECK(up.data() == again.data());

        // Odd output dims round-trip: 5x5 -> 3x3 -> 5x5 for s = 2.
        if (s == 2) {
            HyperCube small = testutil::random_cube(3, 3, 12, 99);
            HyperCube odd = infer_superres(r.checkpoint, small, 5, 5);
            CHECK(odd.height() == 5);
            CHECK(odd.width() == 5);
            CHECK_THROWS_AS(infer_superres(r.checkpoint, small, 7, 7), ConfigError);
        }
    }
}
