#include "raman/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "raman/dsp.hpp"
#include "raman/errors.hpp"
#include "raman/hypercube.hpp"
#include "raman/io/png.hpp"
#include "raman/io/toml.hpp"
#include "raman/metrics.hpp"
#include "raman/nn/infer.hpp"
#include "raman/nn/train.hpp"
#include "raman/resample.hpp"
#include "raman/synth.hpp"
#include "raman/unmix.hpp"

namespace raman::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void echo_config(const std::string& command,
                 const std::vector<std::pair<std::string, std::string>>& kv) {
    std::cout << "[config] command=" << command << "\n";
    for (const auto& [k, v] : kv) std::cout << "[config] " << k << "=" << v << "\n";
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

struct ManifestEntry {
    std::map<std::string, std::string> cubes;  // key -> path (absolute)
    std::string role;
    uint64_t seed = 0;
};

struct Manifest {
    std::vector<ManifestEntry> entries;
    int scale = 2;
    std::string dir;
};

Manifest load_manifest(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("manifest: cannot open: " + path);
    json j;
    try {
        is >> j;
    } catch (const json::exception& e) {
        throw FormatError(std::string("manifest: bad json: ") + e.what());
    }
    Manifest m;
    m.dir = fs::path(path).parent_path().string();
    m.scale = j.at("scale").get<int>();
    for (const auto& entry : j.at("pairs")) {
        ManifestEntry e;
        e.role = entry.at("role").get<std::string>();
        e.seed = entry.value("seed", 0ULL);
        for (auto it = entry.begin(); it != entry.end(); ++it) {
            if (it.key() == "role" || it.key() == "seed") continue;
            e.cubes[it.key()] = (fs::path(m.dir) / it.value().get<std::string>()).string();
        }
        m.entries.push_back(std::move(e));
    }
    return m;
}

std::vector<augment::TrainingPair> load_pairs(const Manifest& m,
                                              const std::string& input_key,
                                              const std::string& target_key,
                                              bool include_test) {
    std::vector<augment::TrainingPair> pairs;
    for (const auto& e : m.entries) {
        if (!include_test && e.role == "test") continue;
        auto in_it = e.cubes.find(input_key);
        auto tg_it = e.cubes.find(target_key);
        if (in_it == e.cubes.end() || tg_it == e.cubes.end()) {
            throw DataError("manifest: missing cube key '" + input_key + "' or '" +
                            target_key + "'");
        }
        pairs.push_back({load_cube(in_it->second), load_cube(tg_it->second)});
    }
    if (pairs.empty()) throw DataError("manifest: no usable pairs");
    return pairs;
}

void write_loss_csv(const std::string& path, const std::vector<nn::EpochStats>& history) {
    std::ofstream os(path);
    if (!os) throw IoError("train: cannot write loss csv: " + path);
    os << "epoch,train_l1,val_l1,lr\n";
    for (const auto& h : history) {
        os << h.epoch << "," << num(h.train_l1) << "," << num(h.val_l1) << ","
           << num(h.lr) << "\n";
    }
}

// ---- synth ----------------------------------------------------------------

struct SynthOpts {
    std::string out = "dataset";
    int cubes = 8;
    int size = 32;
    int bands = 200;
    int scale = 2;
    double t_low = 0.1;
    double t_high = 1.0;
    uint64_t seed = 7;
    std::string library = "cells";
};

int cmd_synth(const SynthOpts& o) {
    if (!resample::valid_scale(o.scale)) {
        std::cerr << "synth: --scale must be 2, 3 or 4\n";
        return 2;
    }
    echo_config("synth", {{"out", o.out},
                          {"cubes", std::to_string(o.cubes)},
                          {"size", std::to_string(o.size)},
                          {"bands", std::to_string(o.bands)},
                          {"scale", std::to_string(o.scale)},
                          {"t_low", num(o.t_low)},
                          {"t_high", num(o.t_high)},
                          {"seed", std::to_string(o.seed)},
                          {"library", o.library}});
    auto axis = synth::default_axis(o.bands);
    auto samples = synth::gen_dataset(o.cubes, o.size, o.size, axis, o.scale, o.t_low,
                                      o.t_high, o.seed, o.library);
    const std::string manifest = synth::write_dataset(samples, axis, o.scale, o.out);
    std::cout << "wrote " << samples.size() << " cube sets, manifest " << manifest << "\n";
    return 0;
}

// ---- train ----------------------------------------------------------------

struct TrainOpts {
    std::string task;  // denoise | sr
    std::string manifest_path;
    std::string out = "model.dprc";
    std::string loss_csv;
    std::string from_checkpoint;
    std::string config_file;
    std::string input_key, target_key;
    int epochs = -1;
    int batch_size = -1;
    double max_lr = -1.0;
    uint64_t seed = 0;
    bool seed_set = false;
    int scale = 2;
    // denoiser architecture
    int depth = -1, base_channels = -1, kernel = -1;
    // sr architecture
    int feature_channels = -1, groups = -1, blocks = -1, reduction = -1;
    int max_spectra = -1;
};

nn::TrainConfig resolve_train_config(const TrainOpts& o, const io::TomlFile& toml,
                                     bool one_cycle_default) {
    nn::TrainConfig cfg;
    cfg.epochs = o.epochs >= 0 ? o.epochs
                               : static_cast<int>(toml.get_int("train.epochs", 10));
    cfg.batch_size = o.batch_size > 0
                         ? o.batch_size
                         : static_cast<int>(toml.get_int("train.batch_size", 16));
    cfg.max_lr = o.max_lr > 0.0 ? o.max_lr
                                : toml.get_double("train.max_lr", one_cycle_default
                                                                      ? 5e-4
                                                                      : 1e-5);
    const std::string sched = toml.get_string(
        "train.scheduler", one_cycle_default ? "one_cycle" : "constant");
    if (sched == "one_cycle") {
        cfg.scheduler = nn::TrainConfig::Scheduler::OneCycle;
    } else if (sched == "constant") {
        cfg.scheduler = nn::TrainConfig::Scheduler::Constant;
    } else {
        throw ConfigError("train: unknown scheduler '" + sched + "'");
    }
    cfg.seed = o.seed_set ? o.seed
                          : static_cast<uint64_t>(toml.get_int("train.seed", 0));
    if (o.max_spectra >= 0) {
        cfg.max_spectra_per_epoch = o.max_spectra;
    } else {
        cfg.max_spectra_per_epoch =
            static_cast<int>(toml.get_int("train.max_spectra_per_epoch", 4096));
    }
    return cfg;
}

augment::AugmentPolicy resolve_policy(const io::TomlFile& toml) {
    augment::AugmentPolicy p;
    p.crop_size = static_cast<int>(toml.get_int("augment.crop_size", 0));
    p.p_flip_h = toml.get_double("augment.p_flip_h", 0.5);
    p.p_flip_v = toml.get_double("augment.p_flip_v", 0.5);
    p.p_rot90 = toml.get_double("augment.p_rot90", 0.5);
    p.mixup_alpha = toml.get_double("augment.mixup_alpha", 0.2);
    p.p_mixup = toml.get_double("augment.p_mixup", 0.0);
    p.max_spectral_shift = static_cast<int>(toml.get_int("augment.max_spectral_shift", 0));
    p.p_spectral_flip = toml.get_double("augment.p_spectral_flip", 0.0);
    return p;
}

int cmd_train(const TrainOpts& o) {
    io::TomlFile toml;
    if (!o.config_file.empty()) toml = io::TomlFile::parse_file(o.config_file);
    const bool denoise = o.task == "denoise";
    nn::TrainConfig cfg = resolve_train_config(o, toml, denoise);
    augment::AugmentPolicy policy = resolve_policy(toml);

    const std::string input_key =
        !o.input_key.empty()
            ? o.input_key
            : toml.get_string("data.input_key", denoise ? "noisy_hr" : "clean_lr");
    const std::string target_key =
        !o.target_key.empty()
            ? o.target_key
            : toml.get_string("data.target_key", "clean_hr");

    Manifest manifest = load_manifest(o.manifest_path);
    auto pairs = load_pairs(manifest, input_key, target_key, false);

    echo_config("train " + o.task,
                {{"manifest", o.manifest_path},
                 {"out", o.out},
                 {"input_key", input_key},
                 {"target_key", target_key},
                 {"epochs", std::to_string(cfg.epochs)},
                 {"batch_size", std::to_string(cfg.batch_size)},
                 {"max_lr", num(cfg.max_lr)},
                 {"scheduler", cfg.scheduler == nn::TrainConfig::Scheduler::OneCycle
                                   ? "one_cycle"
                                   : "constant"},
                 {"seed", std::to_string(cfg.seed)},
                 {"from_checkpoint", o.from_checkpoint.empty() ? "-" : o.from_checkpoint}});

    nn::TrainResult result;
    if (!o.from_checkpoint.empty()) {
        nn::Checkpoint parent = nn::load_checkpoint(o.from_checkpoint);
        result = nn::fine_tune(parent, pairs, cfg, policy);
    } else if (denoise) {
        nn::ResUNet1dConfig arch;
        arch.in_len = pairs.front().input.bands();
        arch.depth = o.depth > 0 ? o.depth : static_cast<int>(toml.get_int("model.depth", 4));
        arch.base_channels = o.base_channels > 0
                                 ? o.base_channels
                                 : static_cast<int>(toml.get_int("model.base_channels", 64));
        arch.kernel = o.kernel > 0 ? o.kernel
                                   : static_cast<int>(toml.get_int("model.kernel", 5));
        arch.use_batch_norm = toml.get_bool("model.use_batch_norm", true);
        result = nn::train_denoiser(arch, pairs, cfg, policy);
    } else if (o.task == "sr") {
        nn::HyrisrConfig arch;
        arch.bands = pairs.front().input.bands();
        arch.scale = o.scale;
        arch.feature_channels =
            o.feature_channels > 0
                ? o.feature_channels
                : static_cast<int>(toml.get_int("model.feature_channels", 64));
        arch.n_residual_groups =
            o.groups > 0 ? o.groups : static_cast<int>(toml.get_int("model.groups", 3));
        arch.n_rcab_per_group =
            o.blocks > 0 ? o.blocks : static_cast<int>(toml.get_int("model.blocks", 4));
        arch.attention_reduction =
            o.reduction > 0 ? o.reduction
                            : static_cast<int>(toml.get_int("model.reduction", 16));
        result = nn::train_superres(arch, pairs, cfg, policy);
    } else {
        std::cerr << "train: task must be 'denoise' or 'sr'\n";
        return 2;
    }

    nn::save_checkpoint(result.checkpoint, o.out);
    if (!o.loss_csv.empty()) write_loss_csv(o.loss_csv, result.history);
    std::cout << "checkpoint " << o.out << " best_epoch=" << result.checkpoint.epoch
              << " best_val_l1=" << num(result.checkpoint.best_val_l1) << "\n";
    return 0;
}

// ---- pipeline ---------------------------------------------------------------

struct PipelineOpts {
    std::string input_path;
    std::string reference_path;
    std::string denoise_ckpt;
    std::string sr_ckpt;
    std::string out = "pipeline_out";
    int endmembers = 0;
    uint64_t vca_seed = 1;
    double t_low = 0.1;
    double t_high = 1.0;
    double peak_center = 1450.0;
    double peak_half_width = 25.0;
    bool self_test = false;
};

json metrics_report(const HyperCube& reference, const HyperCube& output) {
    json j;
    j["mse"] = metrics::mse(reference, output);
    const double p = metrics::psnr(reference, output);
    j["psnr"] = std::isinf(p) ? 1e9 : p;
    j["psnr_infinite"] = std::isinf(p);
    j["ssim"] = metrics::ssim(reference, output);
    return j;
}

int cmd_pipeline(const PipelineOpts& o) {
    echo_config("pipeline",
                {{"input", o.input_path},
                 {"reference", o.reference_path.empty() ? "-" : o.reference_path},
                 {"denoise_checkpoint", o.denoise_ckpt.empty() ? "-" : o.denoise_ckpt},
                 {"sr_checkpoint", o.sr_ckpt.empty() ? "-" : o.sr_ckpt},
                 {"out", o.out},
                 {"endmembers", std::to_string(o.endmembers)},
                 {"vca_seed", std::to_string(o.vca_seed)},
                 {"t_low", num(o.t_low)},
                 {"t_high", num(o.t_high)},
                 {"self_test", o.self_test ? "true" : "false"}});

    fs::create_directories(o.out);
    HyperCube input = load_cube(o.input_path);
    HyperCube output = input;
    int scale = 1;

    if (!o.self_test) {
        if (!o.denoise_ckpt.empty()) {
            nn::Checkpoint ck = nn::load_checkpoint(o.denoise_ckpt);
            output = nn::infer_denoise(ck, output);
        }
        if (!o.sr_ckpt.empty()) {
            nn::Checkpoint ck = nn::load_checkpoint(o.sr_ckpt);
            scale = ck.hyrisr.scale;
            int out_h = output.height() * scale;
            int out_w = output.width() * scale;
            if (!o.reference_path.empty()) {
                HyperCube ref_probe = load_cube(o.reference_path);
                out_h = ref_probe.height();
                out_w = ref_probe.width();
            }
            output = nn::infer_superres(ck, output, out_h, out_w);
        }
    }
    save_cube(output, (fs::path(o.out) / "output.hrc1").string());

    json report;
    report["speedup"] = {{"2", metrics::speedup(o.t_low, o.t_high, 2)},
                         {"3", metrics::speedup(o.t_low, o.t_high, 3)},
                         {"4", metrics::speedup(o.t_low, o.t_high, 4)}};

    HyperCube reference = o.self_test ? output
                          : o.reference_path.empty()
                              ? output
                              : load_cube(o.reference_path);
    const bool have_reference = o.self_test || !o.reference_path.empty();
    if (have_reference) {
        report["metrics"] = metrics_report(reference, output);
    }

    if (o.endmembers >= 2 && have_reference) {
        auto ems = unmix::vca(reference, o.endmembers, o.vca_seed);
        auto ab_ref = unmix::abundance_map(reference, ems);
        auto ab_out = unmix::abundance_map(output, ems);
        auto labels_ref = unmix::classify_pixels(ab_ref);
        auto labels_out = unmix::classify_pixels(ab_out);
        report["classification_accuracy"] =
            unmix::classification_accuracy(labels_out, labels_ref);

        // Abundances as HRC1 (plane index axis) plus per-plane grayscale.
        std::vector<double> plane_axis(o.endmembers);
        for (int k = 0; k < o.endmembers; ++k) plane_axis[k] = k;
        HyperCube ab_cube(ab_out.height, ab_out.width, plane_axis,
                          std::vector<double>(ab_out.values), output.meta());
        save_cube(ab_cube, (fs::path(o.out) / "abundances.hrc1").string());
        for (int k = 0; k < o.endmembers; ++k) {
            std::vector<double> plane(static_cast<size_t>(ab_out.height) * ab_out.width);
            for (size_t p = 0; p < plane.size(); ++p) {
                plane[p] = ab_out.values[p * ab_out.planes + k];
            }
            io::write_heatmap_png(
                (fs::path(o.out) / ("abundance_" + std::to_string(k) + ".png")).string(),
                plane, ab_out.width, ab_out.height);
        }
        std::vector<double> label_img(labels_out.labels.begin(), labels_out.labels.end());
        io::write_heatmap_png((fs::path(o.out) / "labels.png").string(), label_img,
                              labels_out.width, labels_out.height);
    }

    for (const auto& [name, cube] : {std::pair<const char*, const HyperCube*>{
                                         "input", &input},
                                     {"output", &output}}) {
        try {
            auto map = peak_intensity_map(*cube, o.peak_center, o.peak_half_width);
            io::write_heatmap_png(
                (fs::path(o.out) / (std::string(name) + "_peakmap.png")).string(), map,
                cube->width(), cube->height());
        } catch (const RangeError&) {
            // Peak window outside the axis: skip the heatmap, keep the report.
        }
    }

    report["acquisition"] = {
        {"input_seconds", input.acquisition_seconds()},
        {"input_min_sec", format_min_sec(input.acquisition_seconds())}};

    std::ofstream js((fs::path(o.out) / "report.json").string());
    js << report.dump(2) << "\n";

    // Line-oriented echo of the same numbers.
    if (have_reference) {
        std::cout << "mse=" << num(report["metrics"]["mse"].get<double>()) << "\n";
        std::cout << "psnr=" << num(report["metrics"]["psnr"].get<double>()) << "\n";
        std::cout << "ssim=" << num(report["metrics"]["ssim"].get<double>()) << "\n";
    }
    if (report.contains("classification_accuracy")) {
        std::cout << "classification_accuracy="
                  << num(report["classification_accuracy"].get<double>()) << "\n";
    }
    std::cout << "speedup_2x=" << num(report["speedup"]["2"].get<double>()) << "\n";
    std::cout << "speedup_3x=" << num(report["speedup"]["3"].get<double>()) << "\n";
    std::cout << "speedup_4x=" << num(report["speedup"]["4"].get<double>()) << "\n";
    return 0;
}

// ---- baseline ---------------------------------------------------------------

struct BaselineOpts {
    std::string manifest_path;
    std::string mode = "both";  // denoise | sr | both
    std::string out = "baseline_report.json";
    std::string input_key, target_key;
};

json sg_grid_report(const Manifest& m, const std::string& input_key,
                    const std::string& target_key) {
    auto pairs = load_pairs(m, input_key, target_key, true);
    json rows = json::array();
    double best_mse = std::numeric_limits<double>::infinity();
    int best_row = -1;
    for (const auto& params : dsp::sg_benchmark_grid()) {
        double total = 0.0;
        int64_t count = 0;
        for (const auto& pair : pairs) {
            const int pixels = pair.input.height() * pair.input.width();
            const int bands = pair.input.bands();
            for (int p = 0; p < pixels; ++p) {
                Spectrum s{pair.input.axis(),
                           {pair.input.data().begin() + static_cast<size_t>(p) * bands,
                            pair.input.data().begin() + static_cast<size_t>(p + 1) * bands}};
                Spectrum filtered = dsp::sg_filter(s, params);
                const double* target =
                    pair.target.data().data() + static_cast<size_t>(p) * bands;
                for (int k = 0; k < bands; ++k) {
                    const double d = filtered.values[k] - target[k];
                    total += d * d;
                }
                count += bands;
            }
        }
        json row;
        row["order"] = params.order;
        row["frame"] = params.frame;
        row["mse"] = total / static_cast<double>(count);
        if (row["mse"].get<double>() < best_mse) {
            best_mse = row["mse"].get<double>();
            best_row = static_cast<int>(rows.size());
        }
        rows.push_back(row);
    }
    for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
        rows[i]["best"] = i == best_row;
    }
    json out;
    out["rows"] = rows;
    out["best_mse"] = best_mse;
    return out;
}

json sr_baseline_report(const Manifest& m, const std::string& input_key,
                        const std::string& target_key) {
    auto pairs = load_pairs(m, input_key, target_key, true);
    double mse_n = 0.0, mse_b = 0.0, psnr_n = 0.0, psnr_b = 0.0, ssim_n = 0.0,
           ssim_b = 0.0;
    for (const auto& pair : pairs) {
        HyperCube nearest = resample::upsample_nearest(pair.input, m.scale,
                                                       pair.target.height(),
                                                       pair.target.width());
        HyperCube bicubic = resample::upsample_bicubic(pair.input, m.scale,
                                                       pair.target.height(),
                                                       pair.target.width());
        mse_n += metrics::mse(pair.target, nearest);
        mse_b += metrics::mse(pair.target, bicubic);
        psnr_n += metrics::psnr(pair.target, nearest);
        psnr_b += metrics::psnr(pair.target, bicubic);
        ssim_n += metrics::ssim(pair.target, nearest);
        ssim_b += metrics::ssim(pair.target, bicubic);
    }
    const double n = static_cast<double>(pairs.size());
    json out;
    out["nearest"] = {{"mse", mse_n / n}, {"psnr", psnr_n / n}, {"ssim", ssim_n / n}};
    out["bicubic"] = {{"mse", mse_b / n}, {"psnr", psnr_b / n}, {"ssim", ssim_b / n}};
    out["scale"] = m.scale;
    return out;
}

int cmd_baseline(const BaselineOpts& o) {
    echo_config("baseline", {{"manifest", o.manifest_path},
                             {"mode", o.mode},
                             {"out", o.out}});
    Manifest manifest = load_manifest(o.manifest_path);
    json report;
    if (o.mode == "denoise" || o.mode == "both") {
        const std::string in = o.input_key.empty() ? "noisy_hr" : o.input_key;
        const std::string tg = o.target_key.empty() ? "clean_hr" : o.target_key;
        report["sg_grid"] = sg_grid_report(manifest, in, tg);
        std::cout << "sg_best_mse=" << num(report["sg_grid"]["best_mse"].get<double>())
                  << "\n";
    }
    if (o.mode == "sr" || o.mode == "both") {
        const std::string in = o.input_key.empty() ? "clean_lr" : o.input_key;
        const std::string tg = o.target_key.empty() ? "clean_hr" : o.target_key;
        report["sr"] = sr_baseline_report(manifest, in, tg);
        std::cout << "nearest_psnr=" << num(report["sr"]["nearest"]["psnr"].get<double>())
                  << "\n";
        std::cout << "bicubic_psnr=" << num(report["sr"]["bicubic"]["psnr"].get<double>())
                  << "\n";
    }
    std::ofstream os(o.out);
    if (!os) throw IoError("baseline: cannot write " + o.out);
    os << report.dump(2) << "\n";
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"Hyperspectral Raman processing toolkit"};
    app.require_subcommand(1);

    SynthOpts synth_opts;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic phantom dataset");
    synth_cmd->add_option("--out", synth_opts.out, "Output directory");
    synth_cmd->add_option("--cubes", synth_opts.cubes, "Number of cubes");
    synth_cmd->add_option("--size", synth_opts.size, "Cube height and width");
    synth_cmd->add_option("--bands", synth_opts.bands, "Spectral bands");
    synth_cmd->add_option("--scale", synth_opts.scale, "Decimation scale (2, 3 or 4)");
    synth_cmd->add_option("--t-low", synth_opts.t_low, "Low integration time (s)");
    synth_cmd->add_option("--t-high", synth_opts.t_high, "High integration time (s)");
    synth_cmd->add_option("--seed", synth_opts.seed, "RNG seed");
    synth_cmd->add_option("--library", synth_opts.library, "Component library");

    TrainOpts train_opts;
    auto* train_cmd = app.add_subcommand("train", "Train a model");
    train_cmd->add_option("task", train_opts.task, "denoise or sr")->required();
    train_cmd->add_option("--manifest", train_opts.manifest_path, "Dataset manifest")
        ->required();
    train_cmd->add_option("--out", train_opts.out, "Checkpoint path");
    train_cmd->add_option("--loss-csv", train_opts.loss_csv, "Per-epoch loss CSV");
    train_cmd->add_option("--from-checkpoint", train_opts.from_checkpoint,
                          "Parent checkpoint for transfer learning");
    train_cmd->add_option("--config", train_opts.config_file, "TOML config file");
    train_cmd->add_option("--input-key", train_opts.input_key, "Manifest cube key (input)");
    train_cmd->add_option("--target-key", train_opts.target_key,
                          "Manifest cube key (target)");
    train_cmd->add_option("--epochs", train_opts.epochs, "Training epochs");
    train_cmd->add_option("--batch-size", train_opts.batch_size, "Batch size");
    train_cmd->add_option("--max-lr", train_opts.max_lr, "Peak learning rate");
    auto* seed_opt = train_cmd->add_option("--seed", train_opts.seed, "RNG seed");
    train_cmd->add_option("--scale", train_opts.scale, "Super-resolution scale");
    train_cmd->add_option("--depth", train_opts.depth, "Denoiser depth");
    train_cmd->add_option("--base-channels", train_opts.base_channels,
                          "Denoiser base channels");
    train_cmd->add_option("--kernel", train_opts.kernel, "Denoiser kernel width");
    train_cmd->add_option("--feature-channels", train_opts.feature_channels,
                          "SR feature channels");
    train_cmd->add_option("--groups", train_opts.groups, "SR residual groups");
    train_cmd->add_option("--blocks", train_opts.blocks, "SR blocks per group");
    train_cmd->add_option("--reduction", train_opts.reduction, "SR attention reduction");
    train_cmd->add_option("--max-spectra-per-epoch", train_opts.max_spectra,
                          "Denoiser spectra per epoch (0 = all)");

    PipelineOpts pipe_opts;
    auto* pipe_cmd = app.add_subcommand("pipeline", "Denoise, super-resolve and score");
    pipe_cmd->add_option("--input", pipe_opts.input_path, "Input HRC1 cube")->required();
    pipe_cmd->add_option("--reference", pipe_opts.reference_path, "Reference HRC1 cube");
    pipe_cmd->add_option("--denoise-checkpoint", pipe_opts.denoise_ckpt,
                         "Denoiser checkpoint");
    pipe_cmd->add_option("--sr-checkpoint", pipe_opts.sr_ckpt, "SR checkpoint");
    pipe_cmd->add_option("--out", pipe_opts.out, "Output directory");
    pipe_cmd->add_option("--endmembers", pipe_opts.endmembers,
                         "VCA endmember count (0 to skip unmixing)");
    pipe_cmd->add_option("--vca-seed", pipe_opts.vca_seed, "VCA seed");
    pipe_cmd->add_option("--t-low", pipe_opts.t_low, "Low integration time (s)");
    pipe_cmd->add_option("--t-high", pipe_opts.t_high, "High integration time (s)");
    pipe_cmd->add_option("--peak", pipe_opts.peak_center, "Heatmap peak center (cm^-1)");
    pipe_cmd->add_option("--half-width", pipe_opts.peak_half_width,
                         "Heatmap window half width (cm^-1)");
    pipe_cmd->add_flag("--self-test", pipe_opts.self_test,
                       "Bypass models and score the input against itself");

    BaselineOpts base_opts;
    auto* base_cmd = app.add_subcommand("baseline", "Classical baselines report");
    base_cmd->add_option("--manifest", base_opts.manifest_path, "Dataset manifest")
        ->required();
    base_cmd->add_option("--mode", base_opts.mode, "denoise, sr or both");
    base_cmd->add_option("--out", base_opts.out, "Report JSON path");
    base_cmd->add_option("--input-key", base_opts.input_key, "Manifest cube key (input)");
    base_cmd->add_option("--target-key", base_opts.target_key,
                         "Manifest cube key (target)");

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n" << app.help();
        return 2;
    }

    try {
        if (synth_cmd->parsed()) return cmd_synth(synth_opts);
        if (train_cmd->parsed()) {
            train_opts.seed_set = seed_opt->count() > 0;
            if (train_opts.task != "denoise" && train_opts.task != "sr") {
                std::cerr << "train: task must be 'denoise' or 'sr'\n";
                return 2;
            }
            return cmd_train(train_opts);
        }
        if (pipe_cmd->parsed()) return cmd_pipeline(pipe_opts);
        if (base_cmd->parsed()) return cmd_baseline(base_opts);
    } catch (const ParamError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace raman::cli
