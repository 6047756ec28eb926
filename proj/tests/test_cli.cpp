#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <nlohmann/json.hpp>

#include "raman/cli.hpp"
#include "raman/nn/checkpoint.hpp"
#include "test_util.hpp"

using raman::cli::run;
using testutil::TempDir;
using json = nlohmann::json;

namespace {

json read_json(const std::string& path) {
    std::ifstream is(path);
    REQUIRE(is.good());
    json j;
    is >> j;
    return j;
}

int count_lines(const std::string& path) {
    std::ifstream is(path);
    int n = 0;
    std::string line;
    while (std::getline(is, line)) ++n;
    return n;
}

// Tiny dataset shared by the training-path tests.
void make_dataset(const TempDir& dir, const std::string& name, int cubes = 4,
                  int size = 8, int bands = 24, int seed = 11) {
    REQUIRE(run({"synth", "--out", dir.file(name), "--cubes", std::to_string(cubes),
                 "--size", std::to_string(size), "--bands", std::to_string(bands),
                 "--scale", "2", "--seed", std::to_string(seed)}) == 0);
}

}  // namespace

TEST_CASE("synth command") {
    TempDir dir("cli_synth");

    SUBCASE("writes the dataset and manifest") {
        REQUIRE(run({"synth", "--out", dir.file("ds"), "--cubes", "3", "--size", "8",
                     "--bands", "16", "--scale", "2", "--seed", "7"}) == 0);
        json manifest = read_json(dir.file("ds/manifest.json"));
        CHECK(manifest["pairs"].size() == 3);
        CHECK(manifest["scale"] == 2);
    }
    SUBCASE("same invocation twice is byte-identical") {
        REQUIRE(run({"synth", "--out", dir.file("a"), "--cubes", "2", "--size", "8",
                     "--bands", "16", "--scale", "2", "--seed", "9"}) == 0);
        REQUIRE(run({"synth", "--out", dir.file("b"), "--cubes", "2", "--size", "8",
                     "--bands", "16", "--scale", "2", "--seed", "9"}) == 0);
        CHECK(testutil::read_file_bytes(dir.file("a/manifest.json")) ==
              testutil::read_file_bytes(dir.file("b/manifest.json")));
        CHECK(testutil::read_file_bytes(dir.file("a/cube0_clean_hr.hrc1")) ==
              testutil::read_file_bytes(dir.file("b/cube0_clean_hr.hrc1")));
    }
    SUBCASE("invalid scale exits with usage code 2") {
        CHECK(run({"synth", "--out", dir.file("x"), "--scale", "5"}) == 2);
    }
    SUBCASE("unknown flag exits with usage code 2") {
        CHECK(run({"synth", "--nope", "1"}) == 2);
    }
}

TEST_CASE("train command") {
    TempDir dir("cli_train");
    make_dataset(dir, "ds");

    SUBCASE("denoise training writes a checkpoint and loss csv") {
        REQUIRE(run({"train", "denoise", "--manifest", dir.file("ds/manifest.json"),
                     "--out", dir.file("d.dprc"), "--loss-csv", dir.file("loss.csv"),
                     "--epochs", "2", "--batch-size", "8", "--depth", "2",
                     "--base-channels", "4", "--max-spectra-per-epoch", "16", "--seed",
                     "1"}) == 0);
        CHECK(count_lines(dir.file("loss.csv")) == 3);  // header + 2 epochs
        auto ckpt = raman::nn::load_checkpoint(dir.file("d.dprc"));
        CHECK(ckpt.arch == "resunet1d");
        CHECK(ckpt.resunet.depth == 2);
    }
    SUBCASE("sr fine-tune with zero epochs equals the parent") {
        REQUIRE(run({"train", "sr", "--manifest", dir.file("ds/manifest.json"), "--out",
                     dir.file("parent.dprc"), "--epochs", "1", "--batch-size", "1",
                     "--scale", "2", "--feature-channels", "8", "--groups", "1",
                     "--blocks", "1", "--reduction", "4", "--seed", "2"}) == 0);
        REQUIRE(run({"train", "sr", "--manifest", dir.file("ds/manifest.json"), "--out",
                     dir.file("child.dprc"), "--epochs", "0", "--batch-size", "1",
                     "--from-checkpoint", dir.file("parent.dprc"), "--seed", "3"}) == 0);
        auto parent = raman::nn::load_checkpoint(dir.file("parent.dprc"));
        auto child = raman::nn::load_checkpoint(dir.file("child.dprc"));
        for (const auto& a : child.arrays) {
            if (a.name.rfind("adam.", 0) == 0) continue;
            const auto* p = parent.find(a.name);
            REQUIRE(p != nullptr);
            CHECK(p->values == a.values);
        }
    }
    SUBCASE("training loss decreases on the smoke dataset") {
        REQUIRE(run({"train", "denoise", "--manifest", dir.file("ds/manifest.json"),
                     "--out", dir.file("d2.dprc"), "--loss-csv", dir.file("loss2.csv"),
                     "--epochs", "6", "--batch-size", "16", "--depth", "2",
                     "--base-channels", "4", "--max-spectra-per-epoch", "64",
                     "--max-lr", "2e-3", "--seed", "4"}) == 0);
        std::ifstream is(dir.file("loss2.csv"));
        std::string line;
        std::getline(is, line);  // header
        double first = -1.0, last = -1.0;
        while (std::getline(is, line)) {
            const auto c1 = line.find(',');
            const auto c2 = line.find(',', c1 + 1);
            const double v = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
            if (first < 0) first = v;
            last = v;
        }
        CHECK(last < first);
    }
    SUBCASE("missing manifest exits with runtime code 1") {
        CHECK(run({"train", "denoise", "--manifest", dir.file("missing.json"), "--out",
                  dir.file("x.dprc")}) == 1);
    }
    SUBCASE("config file values are overridden by flags") {
        std::ofstream(dir.file("cfg.toml")) << "[train]\nepochs = 1\nbatch_size = 8\n"
                                            << "[model]\ndepth = 2\nbase_channels = 4\n"
                                            << "[augment]\np_spectral_flip = 0.5\n";
        REQUIRE(run({"train", "denoise", "--manifest", dir.file("ds/manifest.json"),
                     "--out", dir.file("cfg.dprc"), "--config", dir.file("cfg.toml"),
                     "--loss-csv", dir.file("cfg_loss.csv"), "--epochs", "2",
                     "--max-spectra-per-epoch", "16", "--seed", "5"}) == 0);
        CHECK(count_lines(dir.file("cfg_loss.csv")) == 3);  // flag epochs=2 wins
        auto ckpt = raman::nn::load_checkpoint(dir.file("cfg.dprc"));
        CHECK(ckpt.resunet.depth == 2);
    }
}

TEST_CASE("pipeline command") {
    TempDir dir("cli_pipeline");
    make_dataset(dir, "ds", 3, 8, 24, 13);

    SUBCASE("self-test reports SSIM exactly 1 and the speedup trio") {
        REQUIRE(run({"pipeline", "--input", dir.file("ds/cube0_noisy_lr.hrc1"),
                     "--self-test", "--out", dir.file("self"), "--t-low", "0.1",
                     "--t-high", "1.0"}) == 0);
        json report = read_json(dir.file("self/report.json"));
        CHECK(report["metrics"]["ssim"].get<double>() == 1.0);
        CHECK(report["speedup"]["2"].get<double>() == 40.0);
        CHECK(report["speedup"]["3"].get<double>() == 90.0);
        CHECK(report["speedup"]["4"].get<double>() == 160.0);
    }
    SUBCASE("unmixing path emits accuracy and artifacts") {
        REQUIRE(run({"pipeline", "--input", dir.file("ds/cube0_clean_hr.hrc1"),
                     "--reference", dir.file("ds/cube0_clean_hr.hrc1"), "--out",
                     dir.file("um"), "--endmembers", "5", "--vca-seed", "3"}) == 0);
        json report = read_json(dir.file("um/report.json"));
        CHECK(report["classification_accuracy"].get<double>() == 1.0);
        CHECK(std::ifstream(dir.file("um/abundances.hrc1")).good());
        CHECK(std::ifstream(dir.file("um/abundance_0.png")).good());
        CHECK(std::ifstream(dir.file("um/labels.png")).good());
        CHECK(std::ifstream(dir.file("um/output.hrc1")).good());
    }
    SUBCASE("mismatched checkpoint exits with runtime code 1") {
        CHECK(run({"pipeline", "--input", dir.file("ds/cube0_noisy_lr.hrc1"),
                  "--denoise-checkpoint", dir.file("missing.dprc"), "--out",
                  dir.file("x")}) == 1);
    }
}

TEST_CASE("baseline command") {
    TempDir dir("cli_baseline");
    make_dataset(dir, "ds", 2, 8, 24, 17);

    REQUIRE(run({"baseline", "--manifest", dir.file("ds/manifest.json"), "--mode",
                 "both", "--out", dir.file("report.json")}) == 0);
    json report = read_json(dir.file("report.json"));

    SUBCASE("sg grid has one row per parametrization and flags the best") {
        REQUIRE(report.contains("sg_grid"));
        CHECK(report["sg_grid"]["rows"].size() == 24);
        int best_count = 0;
        double best_mse = 1e18;
        for (const auto& row : report["sg_grid"]["rows"]) {
            best_count += row["best"].get<bool>() ? 1 : 0;
            best_mse = std::min(best_mse, row["mse"].get<double>());
        }
        CHECK(best_count == 1);
        CHECK(best_mse == doctest::Approx(report["sg_grid"]["best_mse"].get<double>()));
        for (const auto& row : report["sg_grid"]["rows"]) {
            if (row["best"].get<bool>()) {
                CHECK(row["mse"].get<double>() == doctest::Approx(best_mse));
            }
        }
    }
    SUBCASE("sr section carries nearest and bicubic stats") {
        REQUIRE(report.contains("sr"));
        CHECK(report["sr"]["nearest"].contains("psnr"));
        CHECK(report["sr"]["bicubic"].contains("ssim"));
        CHECK(report["sr"]["scale"] == 2);
    }
}
