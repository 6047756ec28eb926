#pragma once

#include <string>
#include <vector>

#include "raman/nn/models.hpp"

namespace raman::nn {

struct NamedArray {
    std::string name;
    std::vector<int> shape;
    std::vector<double> values;  // always exactly representable in f32
};

// Serialized model state: architecture config, weights and buffers, optimizer
// moments and training provenance. The on-disk DPRC layout is documented in
// the README; arrays are stored f32 little-endian in header-declared order.
struct Checkpoint {
    std::string arch;  // "resunet1d" | "hyrisr"
    ResUNet1dConfig resunet;
    HyrisrConfig hyrisr;
    int epoch = 0;
    int64_t adam_step = 0;
    double best_val_l1 = -1.0;  // negative when never evaluated
    std::string provenance;
    std::string normalization = "cube_max";
    std::vector<NamedArray> arrays;

    const NamedArray* find(const std::string& name) const;
    // Hex SHA-256 of the f32 weight payload.
    std::string weight_sha256() const;
};

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

// Model reconstruction; throws ConfigError when arch or array names/shapes
// do not line up.
ResUNet1d build_resunet(const Checkpoint& ckpt);
Hyrisr build_hyrisr(const Checkpoint& ckpt);

// Copies registry parameters/buffers into named arrays (and back).
std::vector<NamedArray> collect_arrays(const ParamRegistry& reg);
void restore_arrays(ParamRegistry& reg, const std::vector<NamedArray>& arrays);

}  // namespace raman::nn
