#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>

#include "raman/augment.hpp"
#include "raman/errors.hpp"
#include "raman/resample.hpp"
#include "raman/synth.hpp"
#include "raman/unmix.hpp"
#include "test_util.hpp"

using namespace raman;
using namespace raman::synth;

TEST_CASE("component_spectrum lorentzian line values") {
    ComponentSpec spec{"one", {{1000.0, 20.0, 3.0}}, {}};
    std::vector<double> axis{980.0, 990.0, 1000.0, 1010.0, 1020.0};
    Spectrum s = component_spectrum(spec, axis);
    CHECK(s.values[2] == doctest::Approx(3.0));              // peak center
    CHECK(s.values[1] == doctest::Approx(1.5));              // center - width/2
    CHECK(s.values[3] == doctest::Approx(1.5));              // center + width/2

    SUBCASE("two peaks add") {
        ComponentSpec two{"two", {{1000.0, 20.0, 3.0}, {1020.0, 10.0, 1.0}}, {}};
        Spectrum s2 = component_spectrum(two, axis);
        ComponentSpec other{"o", {{1020.0, 10.0, 1.0}}, {}};
        Spectrum s1 = component_spectrum(other, axis);
        for (int i = 0; i < 5; ++i) {
            CHECK(s2.values[i] == doctest::Approx(s.values[i] + s1.values[i]));
        }
    }
    SUBCASE("validation") {
        CHECK_THROWS_AS(component_spectrum({"bad", {}, {}}, axis), ParamError);
        CHECK_THROWS_AS(component_spectrum({"bad", {{1000.0, 0.0, 1.0}}, {}}, axis),
                        ParamError);
    }
}

TEST_CASE("gen_phantom") {
    auto axis = testutil::linear_axis(100);

    SUBCASE("single full-field component fills every pixel with its spectrum") {
        ComponentSpec bg{"bg", {{1000.0, 200.0, 1.0}}, {LayoutKind::Full}};
        auto truth = gen_phantom({bg}, 4, 4, axis, 1);
        Spectrum s = component_spectrum(bg, axis);
        for (int p = 0; p < 16; ++p) {
            for (int k = 0; k < 100; ++k) {
                CHECK(truth.clean.data()[p * 100 + k] == doctest::Approx(s.values[k]));
            }
        }
    }
    SUBCASE("abundances reproduce the mixture exactly and pure pixels exist") {
        auto comps = component_library("cells");
        auto truth = gen_phantom(comps, 12, 12, axis, 5);
        const int k = static_cast<int>(comps.size());
        // Mixture identity.
        for (int p = 0; p < 144; ++p) {
            for (int b = 0; b < 100; ++b) {
                double acc = 0.0;
                for (int c = 0; c < k; ++c) {
                    acc += truth.abundances.values[p * k + c] *
                           truth.endmembers.spectra(b, c);
                }
                CHECK(acc == doctest::Approx(truth.clean.data()[p * 100 + b])
                                 .epsilon(1e-12));
            }
        }
        // At least one pure pixel per component.
        for (int c = 0; c < k; ++c) {
            bool found = false;
            for (int p = 0; p < 144 && !found; ++p) {
                bool pure = truth.abundances.values[p * k + c] == 1.0;
                for (int cc = 0; cc < k && pure; ++cc) {
                    if (cc != c && truth.abundances.values[p * k + cc] != 0.0) pure = false;
                }
                found = pure;
            }
            CHECK(found);
        }
    }
    SUBCASE("abundance_map on the clean cube recovers ground truth") {
        auto comps = component_library("cells");
        auto truth = gen_phantom(comps, 8, 8, axis, 6);
        auto recovered = unmix::abundance_map(truth.clean, truth.endmembers);
        double worst = 0.0;
        for (size_t i = 0; i < recovered.values.size(); ++i) {
            worst = std::max(worst,
                             std::abs(recovered.values[i] - truth.abundances.values[i]));
        }
        CHECK(worst < 1e-8);
    }
    SUBCASE("deterministic given seed") {
        auto comps = component_library("cells");
        auto a = gen_phantom(comps, 8, 8, axis, 11);
        auto b = gen_phantom(comps, 8, 8, axis, 11);
        CHECK(a.clean == b.clean);
        CHECK(a.abundances.values == b.abundances.values);
    }
    SUBCASE("layout bounds are validated") {
        ComponentSpec bad{"d", {{1000.0, 20.0, 1.0}}, {LayoutKind::Disk, 0.05, 0.5, 0.2}};
        CHECK_THROWS_AS(gen_phantom({bad}, 8, 8, axis, 1), ParamError);
    }
}

TEST_CASE("apply_noise") {
    auto axis = testutil::linear_axis(8);
    std::vector<double> clean_data = {1.0, 2.0, 0.5, 4.0, 0.2, 1.5, 3.0, 0.8};
    HyperCube clean(1, 1, axis, clean_data, AcquisitionMeta{1.0, 0.5, ""});

    SUBCASE("huge integration time converges to the clean cube") {
        NoiseModel model{1e9, 100.0, 1.0};
        HyperCube out = apply_noise(clean, model, 3);
        for (int k = 0; k < 8; ++k) {
            CHECK(std::abs(out.data()[k] - clean_data[k]) / clean_data[k] < 1e-3);
        }
    }
    SUBCASE("unbiased: sample mean within 3 standard errors") {
        NoiseModel model{0.5, 40.0, 1.0};
        const int draws = 10000;
        std::vector<double> mean(8, 0.0);
        for (int d = 0; d < draws; ++d) {
            HyperCube out = apply_noise(clean, model, 1000 + d);
            for (int k = 0; k < 8; ++k) mean[k] += out.data()[k];
        }
        const double gain = model.photon_rate_scale * model.integration_time;
        for (int k = 0; k < 8; ++k) {
            mean[k] /= draws;
            const double var =
                (clean_data[k] * gain + model.read_noise_sigma * model.read_noise_sigma) /
                (gain * gain);
            const double se = std::sqrt(var / draws);
            CHECK(std::abs(mean[k] - clean_data[k]) < 3.5 * se);
        }
    }
    SUBCASE("snr scales like sqrt of integration time") {
        // Per-band SNR estimated over repeated draws; read noise kept small.
        NoiseModel low{0.1, 200.0, 0.5};
        NoiseModel high{1.0, 200.0, 0.5};
        const int draws = 4000;
        double err2_low = 0.0, err2_high = 0.0;
        for (int d = 0; d < draws; ++d) {
            HyperCube nl = apply_noise(clean, low, 50000 + d);
            HyperCube nh = apply_noise(clean, high, 90000 + d);
            for (int k = 0; k < 8; ++k) {
                err2_low += (nl.data()[k] - clean_data[k]) * (nl.data()[k] - clean_data[k]);
                err2_high +=
                    (nh.data()[k] - clean_data[k]) * (nh.data()[k] - clean_data[k]);
            }
        }
        const double snr_ratio = std::sqrt(err2_low / err2_high);
        CHECK(snr_ratio == doctest::Approx(std::sqrt(10.0)).epsilon(0.10));
    }
    SUBCASE("deterministic given seed") {
        NoiseModel model{0.1, 100.0, 1.0};
        HyperCube a = apply_noise(clean, model, 7);
        HyperCube b = apply_noise(clean, model, 7);
        CHECK(a.data() == b.data());
    }
}

TEST_CASE("gen_dataset") {
    auto axis = testutil::linear_axis(48);
    auto samples = gen_dataset(6, 12, 12, axis, 2, 0.1, 1.0, 99, "cells");
    REQUIRE(samples.size() == 6);

    SUBCASE("pairs satisfy training-pair invariants") {
        for (const auto& s : samples) {
            CHECK(augment::pair_scale({s.noisy_lr, s.clean_hr}) == 2);
            CHECK(augment::pair_scale({s.noisy_hr, s.clean_hr}) == 1);
            CHECK(augment::pair_scale({s.clean_lr, s.clean_hr}) == 2);
        }
    }
    SUBCASE("decimated members equal decimate of the full members") {
        for (const auto& s : samples) {
            CHECK(resample::decimate(s.clean_hr, 2).data() == s.clean_lr.data());
            CHECK(resample::decimate(s.noisy_hr, 2).data() == s.noisy_lr.data());
            CHECK(resample::decimate(s.noisyhigh_hr, 2).data() == s.noisyhigh_lr.data());
        }
    }
    SUBCASE("roles cover train, val and test") {
        int train = 0, val = 0, test = 0;
        for (const auto& s : samples) {
            train += s.role == "train";
            val += s.role == "val";
            test += s.role == "test";
        }
        CHECK(train >= 1);
        CHECK(val >= 1);
        CHECK(test >= 1);
        CHECK(train + val + test == 6);
    }
    SUBCASE("regeneration is byte identical") {
        auto again = gen_dataset(6, 12, 12, axis, 2, 0.1, 1.0, 99, "cells");
        for (size_t i = 0; i < samples.size(); ++i) {
            CHECK(samples[i].clean_hr == again[i].clean_hr);
            CHECK(samples[i].noisy_hr == again[i].noisy_hr);
            CHECK(samples[i].noisy_lr == again[i].noisy_lr);
        }
    }
    SUBCASE("different cubes have different scenes") {
        CHECK(samples[0].clean_hr.data() != samples[1].clean_hr.data());
    }
}

TEST_CASE("write_dataset emits HRC1 files and a manifest") {
    testutil::TempDir dir("synth_ds");
    auto axis = testutil::linear_axis(32);
    auto samples = gen_dataset(3, 8, 8, axis, 2, 0.1, 1.0, 5, "cartilage");
    const std::string manifest_path = write_dataset(samples, axis, 2, dir.path.string());

    std::ifstream is(manifest_path);
    REQUIRE(is.good());
    nlohmann::json manifest;
    is >> manifest;
    CHECK(manifest["scale"] == 2);
    CHECK(manifest["pairs"].size() == 3);
    for (const auto& entry : manifest["pairs"]) {
        for (const char* key : {"clean_hr", "noisy_hr", "noisy_lr", "clean_lr"}) {
            REQUIRE(entry.contains(key));
            HyperCube cube =
                load_cube((dir.path / entry[key].get<std::string>()).string());
            CHECK(cube.bands() == 32);
        }
        CHECK(entry.contains("role"));
        CHECK(entry.contains("seed"));
    }
}

TEST_CASE("component libraries") {
    CHECK(component_library("cells").size() == 5);
    CHECK(component_library("cartilage").size() == 4);
    CHECK_THROWS_AS(component_library("unknown"), ParamError);
}
