#include "raman/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "raman/errors.hpp"
#include "raman/resample.hpp"
#include "raman/rng.hpp"

namespace raman::synth {

namespace {

void check_component(const ComponentSpec& c) {
    if (c.peaks.empty()) throw ParamError("synth: component needs at least one peak");
    for (const auto& p : c.peaks) {
        if (!(p.width > 0.0)) throw ParamError("synth: peak width must be > 0");
        if (p.amplitude < 0.0) throw ParamError("synth: peak amplitude must be >= 0");
    }
}

void check_layout(const Layout& l) {
    auto inside = [](double v) { return v >= 0.0 && v <= 1.0; };
    switch (l.kind) {
        case LayoutKind::Full:
            return;
        case LayoutKind::Disk:
            if (!(l.r1 > 0.0) || !inside(l.cx - l.r1) || !inside(l.cx + l.r1) ||
                !inside(l.cy - l.r1) || !inside(l.cy + l.r1)) {
                throw ParamError("synth: disk layout out of bounds");
            }
            return;
        case LayoutKind::Annulus:
            if (!(l.r1 > 0.0) || !(l.r2 > l.r1) || !inside(l.cx - l.r2) ||
                !inside(l.cx + l.r2) || !inside(l.cy - l.r2) || !inside(l.cy + l.r2)) {
                throw ParamError("synth: annulus layout out of bounds");
            }
            return;
        case LayoutKind::Blob: {
            const double rmax = std::max(l.r1, l.r2);
            if (!(l.r1 > 0.0) || !(l.r2 > 0.0) || !inside(l.cx - rmax) ||
                !inside(l.cx + rmax) || !inside(l.cy - rmax) || !inside(l.cy + rmax)) {
                throw ParamError("synth: blob layout out of bounds");
            }
            return;
        }
    }
}

// Soft-edged footprint value in [0, 1] at normalized coordinates (u, v).
double layout_value(const Layout& l, double u, double v) {
    constexpr double kEdge = 0.25;  // fraction of the radius used as soft edge
    switch (l.kind) {
        case LayoutKind::Full:
            return 1.0;
        case LayoutKind::Disk: {
            const double d = std::hypot(u - l.cx, v - l.cy);
            return std::clamp((l.r1 - d) / (kEdge * l.r1), 0.0, 1.0);
        }
        case LayoutKind::Annulus: {
            const double d = std::hypot(u - l.cx, v - l.cy);
            const double mid = 0.5 * (l.r1 + l.r2);
            const double half = 0.5 * (l.r2 - l.r1);
            return std::clamp((half - std::abs(d - mid)) / (kEdge * half), 0.0, 1.0);
        }
        case LayoutKind::Blob: {
            const double du = u - l.cx;
            const double dv = v - l.cy;
            const double ca = std::cos(l.angle);
            const double sa = std::sin(l.angle);
            const double a = (du * ca + dv * sa) / l.r1;
            const double b = (-du * sa + dv * ca) / l.r2;
            const double d = std::sqrt(a * a + b * b);  // 1 on the ellipse edge
            return std::clamp((1.0 - d) / kEdge, 0.0, 1.0);
        }
    }
    return 0.0;
}

}  // namespace

Spectrum component_spectrum(const ComponentSpec& spec, const std::vector<double>& axis) {
    check_component(spec);
    Spectrum s;
    s.axis = axis;
    s.values.assign(axis.size(), 0.0);
    for (const auto& p : spec.peaks) {
        const double hw = 0.5 * p.width;
        const double hw2 = hw * hw;
        for (size_t i = 0; i < axis.size(); ++i) {
            const double d = axis[i] - p.center;
            s.values[i] += p.amplitude * hw2 / (d * d + hw2);
        }
    }
    return s;
}

PhantomTruth gen_phantom(const std::vector<ComponentSpec>& components, int height,
                         int width, const std::vector<double>& axis, uint64_t seed) {
    if (components.empty()) throw ParamError("gen_phantom: need >= 1 component");
    for (const auto& c : components) {
        check_component(c);
        check_layout(c.layout);
    }
    const int k = static_cast<int>(components.size());
    const int b = static_cast<int>(axis.size());

    unmix::EndmemberSet ems;
    ems.spectra.resize(b, k);
    for (int j = 0; j < k; ++j) {
        Spectrum s = component_spectrum(components[j], axis);
        for (int i = 0; i < b; ++i) ems.spectra(i, j) = s.values[i];
        ems.names.push_back(components[j].name);
    }

    // Per-pixel abundances from the layouts: a Full layout acts as the
    // residual background, weighted by 1 - coverage of the shaped components.
    Rng rng(seed);
    unmix::AbundanceCube ab;
    ab.height = height;
    ab.width = width;
    ab.planes = k;
    ab.values.assign(static_cast<size_t>(height) * width * k, 0.0);
    for (int i = 0; i < height; ++i) {
        for (int j = 0; j < width; ++j) {
            const double u = (j + 0.5) / width;
            const double v = (i + 0.5) / height;
            double* a = ab.values.data() + (static_cast<size_t>(i) * width + j) * k;
            double coverage = 0.0;
            for (int c = 0; c < k; ++c) {
                if (components[c].layout.kind == LayoutKind::Full) continue;
                const double base = layout_value(components[c].layout, u, v);
                a[c] = base * rng.uniform(0.9, 1.1);  // per-pixel concentration texture
                coverage += base;
            }
            for (int c = 0; c < k; ++c) {
                if (components[c].layout.kind == LayoutKind::Full) {
                    a[c] = std::max(0.0, 1.0 - coverage);
                }
            }
        }
    }

    // Force one pure pixel per component: take its argmax pixel, skipping
    // pixels already claimed by earlier components.
    std::vector<size_t> claimed;
    const size_t pixels = static_cast<size_t>(height) * width;
    for (int c = 0; c < k; ++c) {
        size_t best = pixels;
        double best_v = -1.0;
        for (size_t p = 0; p < pixels; ++p) {
            if (std::find(claimed.begin(), claimed.end(), p) != claimed.end()) continue;
            const double v = ab.values[p * k + c];
            if (v > best_v) {
                best_v = v;
                best = p;
            }
        }
        if (best == pixels) throw ParamError("gen_phantom: grid too small for pure pixels");
        claimed.push_back(best);
        for (int cc = 0; cc < k; ++cc) ab.values[best * k + cc] = (cc == c) ? 1.0 : 0.0;
    }

    std::vector<double> data(pixels * b, 0.0);
    for (size_t p = 0; p < pixels; ++p) {
        double* out = data.data() + p * b;
        for (int c = 0; c < k; ++c) {
            const double a = ab.values[p * k + c];
            if (a == 0.0) continue;
            for (int i = 0; i < b; ++i) out[i] += a * ems.spectra(i, c);
        }
    }

    PhantomTruth truth{
        HyperCube(height, width, axis, std::move(data), AcquisitionMeta{1.0, 0.5, "phantom"}),
        std::move(ems), std::move(ab), unmix::LabelMap{}};
    truth.labels = unmix::classify_pixels(truth.abundances);
    return truth;
}

HyperCube apply_noise(const HyperCube& clean, const NoiseModel& model, uint64_t seed) {
    if (!(model.integration_time > 0.0) || !(model.photon_rate_scale > 0.0) ||
        !(model.read_noise_sigma > 0.0)) {
        throw ParamError("apply_noise: model parameters must be positive");
    }
    Rng rng(seed);
    const double gain = model.photon_rate_scale * model.integration_time;
    std::vector<double> data(clean.data().size());
    for (size_t i = 0; i < data.size(); ++i) {
        const double mean = std::max(0.0, clean.data()[i]) * gain;
        const double counts = static_cast<double>(rng.poisson(mean)) +
                              rng.normal(0.0, model.read_noise_sigma);
        data[i] = counts / gain;
    }
    AcquisitionMeta meta = clean.meta();
    meta.integration_time = model.integration_time;
    return HyperCube(clean.height(), clean.width(), clean.axis(), std::move(data),
                     std::move(meta));
}

std::vector<ComponentSpec> component_library(const std::string& name) {
    // Peak positions follow standard biological Raman band assignments;
    // amplitudes and widths are free parameters of the phantom.
    if (name == "cells") {
        return {
            {"background", {{900.0, 400.0, 0.12}, {1350.0, 500.0, 0.10}}, {LayoutKind::Full}},
            {"nucleic_acids",
             {{795.0, 18.0, 1.0}, {1095.0, 20.0, 0.45}, {1578.0, 18.0, 0.55}},
             {LayoutKind::Disk, 0.35, 0.4, 0.18}},
            {"proteins",
             {{1004.0, 10.0, 1.0}, {1230.0, 30.0, 0.4}, {1660.0, 24.0, 0.8}},
             {LayoutKind::Blob, 0.6, 0.55, 0.3, 0.2, 0.5}},
            {"lipids",
             {{1300.0, 20.0, 0.8}, {1440.0, 22.0, 1.0}, {1740.0, 18.0, 0.35}},
             {LayoutKind::Annulus, 0.5, 0.5, 0.28, 0.42}},
            {"proteins_lipids",
             {{1004.0, 10.0, 0.5}, {1440.0, 22.0, 0.55}, {1660.0, 26.0, 0.65}},
             {LayoutKind::Disk, 0.72, 0.3, 0.14}},
        };
    }
    if (name == "cartilage") {
        return {
            {"background", {{800.0, 450.0, 0.10}, {1500.0, 400.0, 0.08}}, {LayoutKind::Full}},
            {"collagen",
             {{856.0, 16.0, 0.9}, {937.0, 14.0, 0.8}, {1245.0, 28.0, 0.5}, {1665.0, 22.0, 0.7}},
             {LayoutKind::Blob, 0.45, 0.5, 0.32, 0.22, 0.3}},
            {"proteoglycan",
             {{1063.0, 16.0, 1.0}, {1375.0, 20.0, 0.6}},
             {LayoutKind::Annulus, 0.5, 0.5, 0.25, 0.4}},
            {"chondrocytes",
             {{785.0, 18.0, 0.7}, {1004.0, 10.0, 0.9}, {1450.0, 22.0, 0.6}},
             {LayoutKind::Disk, 0.62, 0.38, 0.15}},
        };
    }
    throw ParamError("component_library: unknown library '" + name + "'");
}

std::vector<double> default_axis(int bands, double lo, double hi) {
    if (bands < 2) throw ParamError("default_axis: need >= 2 bands");
    std::vector<double> axis(bands);
    for (int i = 0; i < bands; ++i) {
        axis[i] = lo + (hi - lo) * static_cast<double>(i) / (bands - 1);
    }
    return axis;
}

namespace {

// Randomizes the library's spatial layouts (positions and sizes) and jitters
// peak amplitudes so every cube is a distinct scene of the same chemistry.
std::vector<ComponentSpec> randomized_components(const std::string& library, Rng& rng) {
    auto comps = component_library(library);
    for (auto& c : comps) {
        if (c.layout.kind == LayoutKind::Full) continue;
        double rmax = 0.0;
        switch (c.layout.kind) {
            case LayoutKind::Disk:
                c.layout.r1 = rng.uniform(0.10, 0.22);
                rmax = c.layout.r1;
                break;
            case LayoutKind::Annulus:
                c.layout.r1 = rng.uniform(0.15, 0.25);
                c.layout.r2 = c.layout.r1 + rng.uniform(0.08, 0.16);
                rmax = c.layout.r2;
                break;
            case LayoutKind::Blob:
                c.layout.r1 = rng.uniform(0.12, 0.3);
                c.layout.r2 = rng.uniform(0.10, 0.22);
                c.layout.angle = rng.uniform(0.0, M_PI);
                rmax = std::max(c.layout.r1, c.layout.r2);
                break;
            default:
                break;
        }
        c.layout.cx = rng.uniform(rmax, 1.0 - rmax);
        c.layout.cy = rng.uniform(rmax, 1.0 - rmax);
        for (auto& p : c.peaks) p.amplitude *= rng.uniform(0.8, 1.2);
    }
    return comps;
}

}  // namespace

std::vector<DatasetSample> gen_dataset(int n_cubes, int height, int width,
                                       const std::vector<double>& axis, int scale,
                                       double t_low, double t_high, uint64_t seed,
                                       const std::string& library) {
    if (n_cubes < 1) throw ParamError("gen_dataset: need >= 1 cube");
    if (!resample::valid_scale(scale)) throw ParamError("gen_dataset: scale must be 2, 3 or 4");
    if (!(t_low > 0.0) || !(t_high > 0.0) || t_low > t_high) {
        throw ParamError("gen_dataset: need 0 < t_low <= t_high");
    }
    std::vector<DatasetSample> out;
    out.reserve(n_cubes);
    for (int i = 0; i < n_cubes; ++i) {
        const uint64_t cube_seed = Rng::derive_seed(seed, static_cast<uint64_t>(i));
        Rng rng(cube_seed);
        auto comps = randomized_components(library, rng);
        PhantomTruth truth = gen_phantom(comps, height, width, axis, rng.next_u64());

        NoiseModel low{t_low, 100.0, 1.0};
        NoiseModel high{t_high, 100.0, 1.0};
        HyperCube noisy_hr = apply_noise(truth.clean, low, rng.next_u64());
        HyperCube noisyhigh_hr = apply_noise(truth.clean, high, rng.next_u64());

        std::string role = "train";
        if (n_cubes >= 4) {
            // Tail of the index range: ~15% val, ~15% test, at least one each.
            const int n_test = std::max(1, n_cubes * 15 / 100);
            const int n_val = std::max(1, n_cubes * 15 / 100);
            if (i >= n_cubes - n_test) {
                role = "test";
            } else if (i >= n_cubes - n_test - n_val) {
                role = "val";
            }
        } else if (n_cubes >= 2 && i == n_cubes - 1) {
            role = "test";
        }

        out.push_back(DatasetSample{
            truth.clean,
            noisy_hr,
            noisyhigh_hr,
            resample::decimate(truth.clean, scale),
            resample::decimate(noisy_hr, scale),
            resample::decimate(noisyhigh_hr, scale),
            role,
            cube_seed,
        });
    }
    return out;
}

std::string write_dataset(const std::vector<DatasetSample>& samples,
                          const std::vector<double>& axis, int scale,
                          const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);

    // Shared axis sidecar: one HRC1 header is self-describing, but the axis
    // file lets spectra-level tools read the grid without a cube.
    const std::string axis_path = (fs::path(dir) / "axis.csv").string();
    {
        std::ofstream os(axis_path);
        if (!os) throw IoError("write_dataset: cannot write " + axis_path);
        os << "wavenumber_cm1\n";
        for (double v : axis) os << v << "\n";
    }

    nlohmann::json manifest;
    manifest["axis_file"] = "axis.csv";
    manifest["scale"] = scale;
    manifest["pairs"] = nlohmann::json::array();
    for (size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        auto name = [&](const char* tag) {
            return "cube" + std::to_string(i) + "_" + tag + ".hrc1";
        };
        save_cube(s.clean_hr, (fs::path(dir) / name("clean_hr")).string());
        save_cube(s.noisy_hr, (fs::path(dir) / name("noisy_hr")).string());
        save_cube(s.noisyhigh_hr, (fs::path(dir) / name("noisyhigh_hr")).string());
        save_cube(s.clean_lr, (fs::path(dir) / name("clean_lr")).string());
        save_cube(s.noisy_lr, (fs::path(dir) / name("noisy_lr")).string());
        save_cube(s.noisyhigh_lr, (fs::path(dir) / name("noisyhigh_lr")).string());
        nlohmann::json entry;
        entry["clean_hr"] = name("clean_hr");
        entry["noisy_hr"] = name("noisy_hr");
        entry["noisyhigh_hr"] = name("noisyhigh_hr");
        entry["clean_lr"] = name("clean_lr");
        entry["noisy_lr"] = name("noisy_lr");
        entry["noisyhigh_lr"] = name("noisyhigh_lr");
        entry["role"] = s.role;
        entry["seed"] = s.seed;
        manifest["pairs"].push_back(entry);
    }
    const std::string manifest_path = (fs::path(dir) / "manifest.json").string();
    std::ofstream os(manifest_path);
    if (!os) throw IoError("write_dataset: cannot write " + manifest_path);
    os << manifest.dump(2) << "\n";
    return manifest_path;
}

}  // namespace raman::synth
