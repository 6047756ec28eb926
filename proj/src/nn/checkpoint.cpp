#include "raman/nn/checkpoint.hpp"

#include <openssl/evp.h>

#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "raman/errors.hpp"

namespace raman::nn {

namespace {

constexpr char kMagic[4] = {'D', 'P', 'R', 'C'};
constexpr uint32_t kVersion = 1;

std::vector<float> payload_of(const std::vector<NamedArray>& arrays) {
    size_t total = 0;
    for (const auto& a : arrays) total += a.values.size();
    std::vector<float> payload;
    payload.reserve(total);
    for (const auto& a : arrays) {
        for (double v : a.values) payload.push_back(static_cast<float>(v));
    }
    return payload;
}

std::string sha256_hex(const void* data, size_t len) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int digest_len = 0;
    EVP_Digest(data, len, digest, &digest_len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(digest_len * 2);
    for (unsigned int i = 0; i < digest_len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

nlohmann::json config_json(const Checkpoint& c) {
    nlohmann::json j;
    if (c.arch == "resunet1d") {
        j["in_len"] = c.resunet.in_len;
        j["depth"] = c.resunet.depth;
        j["base_channels"] = c.resunet.base_channels;
        j["kernel"] = c.resunet.kernel;
        j["use_batch_norm"] = c.resunet.use_batch_norm;
    } else if (c.arch == "hyrisr") {
        j["bands"] = c.hyrisr.bands;
        j["feature_channels"] = c.hyrisr.feature_channels;
        j["n_residual_groups"] = c.hyrisr.n_residual_groups;
        j["n_rcab_per_group"] = c.hyrisr.n_rcab_per_group;
        j["attention_reduction"] = c.hyrisr.attention_reduction;
        j["scale"] = c.hyrisr.scale;
    } else {
        throw ConfigError("checkpoint: unknown architecture '" + c.arch + "'");
    }
    return j;
}

void config_from_json(Checkpoint& c, const nlohmann::json& j) {
    if (c.arch == "resunet1d") {
        c.resunet.in_len = j.at("in_len").get<int>();
        c.resunet.depth = j.at("depth").get<int>();
        c.resunet.base_channels = j.at("base_channels").get<int>();
        c.resunet.kernel = j.at("kernel").get<int>();
        c.resunet.use_batch_norm = j.at("use_batch_norm").get<bool>();
    } else if (c.arch == "hyrisr") {
        c.hyrisr.bands = j.at("bands").get<int>();
        c.hyrisr.feature_channels = j.at("feature_channels").get<int>();
        c.hyrisr.n_residual_groups = j.at("n_residual_groups").get<int>();
        c.hyrisr.n_rcab_per_group = j.at("n_rcab_per_group").get<int>();
        c.hyrisr.attention_reduction = j.at("attention_reduction").get<int>();
        c.hyrisr.scale = j.at("scale").get<int>();
    } else {
        throw FormatError("checkpoint: unknown architecture '" + c.arch + "'");
    }
}

}  // namespace

const NamedArray* Checkpoint::find(const std::string& name) const {
    for (const auto& a : arrays) {
        if (a.name == name) return &a;
    }
    return nullptr;
}

std::string Checkpoint::weight_sha256() const {
    std::vector<float> payload = payload_of(arrays);
    return sha256_hex(payload.data(), payload.size() * sizeof(float));
}

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
    std::vector<float> payload = payload_of(ckpt.arrays);

    nlohmann::json header;
    header["arch"] = ckpt.arch;
    header["config"] = config_json(ckpt);
    header["epoch"] = ckpt.epoch;
    header["adam_step"] = ckpt.adam_step;
    header["best_val_l1"] = ckpt.best_val_l1;
    header["provenance"] = ckpt.provenance;
    header["normalization"] = ckpt.normalization;
    header["sha256"] = sha256_hex(payload.data(), payload.size() * sizeof(float));
    header["arrays"] = nlohmann::json::array();
    for (const auto& a : ckpt.arrays) {
        header["arrays"].push_back({{"name", a.name}, {"shape", a.shape}});
    }
    const std::string json_text = header.dump();

    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("checkpoint: cannot open for writing: " + path);
    os.write(kMagic, 4);
    os.write(reinterpret_cast<const char*>(&kVersion), sizeof(kVersion));
    const uint64_t json_len = json_text.size();
    os.write(reinterpret_cast<const char*>(&json_len), sizeof(json_len));
    os.write(json_text.data(), static_cast<std::streamsize>(json_text.size()));
    os.write(reinterpret_cast<const char*>(payload.data()),
             static_cast<std::streamsize>(payload.size() * sizeof(float)));
    if (!os) throw IoError("checkpoint: short write: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("checkpoint: cannot open: " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0) {
        throw FormatError("checkpoint: bad magic in " + path);
    }
    uint32_t version = 0;
    is.read(reinterpret_cast<char*>(&version), sizeof(version));
    if (!is || version != kVersion) throw FormatError("checkpoint: unsupported version");
    uint64_t json_len = 0;
    is.read(reinterpret_cast<char*>(&json_len), sizeof(json_len));
    if (!is) throw FormatError("checkpoint: truncated header");
    std::string json_text(json_len, '\0');
    is.read(json_text.data(), static_cast<std::streamsize>(json_len));
    if (!is) throw FormatError("checkpoint: truncated header");

    nlohmann::json header;
    try {
        header = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("checkpoint: bad header json: ") + e.what());
    }

    Checkpoint ckpt;
    ckpt.arch = header.at("arch").get<std::string>();
    config_from_json(ckpt, header.at("config"));
    ckpt.epoch = header.at("epoch").get<int>();
    ckpt.adam_step = header.at("adam_step").get<int64_t>();
    ckpt.best_val_l1 = header.at("best_val_l1").get<double>();
    ckpt.provenance = header.at("provenance").get<std::string>();
    ckpt.normalization = header.at("normalization").get<std::string>();

    size_t total = 0;
    for (const auto& meta : header.at("arrays")) {
        NamedArray a;
        a.name = meta.at("name").get<std::string>();
        a.shape = meta.at("shape").get<std::vector<int>>();
        size_t n = 1;
        for (int d : a.shape) n *= static_cast<size_t>(d);
        a.values.resize(n);
        total += n;
        ckpt.arrays.push_back(std::move(a));
    }
    std::vector<float> payload(total);
    is.read(reinterpret_cast<char*>(payload.data()),
            static_cast<std::streamsize>(total * sizeof(float)));
    if (is.gcount() != static_cast<std::streamsize>(total * sizeof(float))) {
        throw FormatError("checkpoint: truncated weight payload");
    }
    const std::string digest = sha256_hex(payload.data(), payload.size() * sizeof(float));
    if (digest != header.at("sha256").get<std::string>()) {
        throw FormatError("checkpoint: weight payload hash mismatch");
    }
    size_t off = 0;
    for (auto& a : ckpt.arrays) {
        for (double& v : a.values) v = static_cast<double>(payload[off++]);
    }
    return ckpt;
}

std::vector<NamedArray> collect_arrays(const ParamRegistry& reg) {
    std::vector<NamedArray> out;
    out.reserve(reg.params.size() + reg.buffers.size());
    for (const auto& p : reg.params) {
        out.push_back({p.name, p.tensor.shape(), p.tensor.values()});
    }
    for (const auto& b : reg.buffers) {
        out.push_back({b.name, {static_cast<int>(b.values->size())}, *b.values});
    }
    return out;
}

void restore_arrays(ParamRegistry& reg, const std::vector<NamedArray>& arrays) {
    auto lookup = [&](const std::string& name) -> const NamedArray& {
        for (const auto& a : arrays) {
            if (a.name == name) return a;
        }
        throw ConfigError("checkpoint: missing array '" + name + "'");
    };
    for (auto& p : reg.params) {
        const NamedArray& a = lookup(p.name);
        if (a.values.size() != p.tensor.values().size()) {
            throw ConfigError("checkpoint: shape mismatch for '" + p.name + "'");
        }
        p.tensor.values() = a.values;
    }
    for (auto& b : reg.buffers) {
        const NamedArray& a = lookup(b.name);
        if (a.values.size() != b.values->size()) {
            throw ConfigError("checkpoint: shape mismatch for '" + b.name + "'");
        }
        *b.values = a.values;
    }
}

ResUNet1d build_resunet(const Checkpoint& ckpt) {
    if (ckpt.arch != "resunet1d") {
        throw ConfigError("checkpoint: expected a resunet1d checkpoint");
    }
    ResUNet1d model(ckpt.resunet);
    restore_arrays(model.registry(), ckpt.arrays);
    return model;
}

Hyrisr build_hyrisr(const Checkpoint& ckpt) {
    if (ckpt.arch != "hyrisr") {
        throw ConfigError("checkpoint: expected a hyrisr checkpoint");
    }
    Hyrisr model(ckpt.hyrisr);
    restore_arrays(model.registry(), ckpt.arrays);
    return model;
}

}  // namespace raman::nn
