#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "raman/hypercube.hpp"
#include "raman/rng.hpp"

namespace testutil {

// Fresh scratch directory under the build tree, wiped per construction.
struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& name) {
        path = std::filesystem::temp_directory_path() / ("ramantk_" + name);
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

inline std::vector<double> linear_axis(int bands, double lo = 600.0, double hi = 1800.0) {
    std::vector<double> axis(bands);
    for (int i = 0; i < bands; ++i) {
        axis[i] = lo + (hi - lo) * static_cast<double>(i) / (bands - 1);
    }
    return axis;
}

// Cube with f32-representable pseudo-random content.
inline raman::HyperCube random_cube(int h, int w, int b, uint64_t seed,
                                    double amplitude = 1.0) {
    raman::Rng rng(seed);
    std::vector<double> data(static_cast<size_t>(h) * w * b);
    for (double& v : data) {
        v = static_cast<double>(static_cast<float>(amplitude * rng.uniform()));
    }
    return raman::HyperCube(h, w, linear_axis(b), std::move(data),
                            raman::AcquisitionMeta{1.0, 0.5, "test"});
}

inline std::string read_file_bytes(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(is),
                       std::istreambuf_iterator<char>());
}

}  // namespace testutil
