#include "raman/hypercube.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "raman/errors.hpp"

namespace raman {

namespace {

constexpr char kMagic[4] = {'H', 'R', 'C', '1'};
constexpr uint32_t kVersion = 1;

void validate(int height, int width, const std::vector<double>& axis,
              const std::vector<double>& data, const AcquisitionMeta& meta) {
    if (height < 1 || width < 1) {
        throw ValidationError("hypercube: H and W must be >= 1");
    }
    if (axis.size() < 2) {
        throw ValidationError("hypercube: need at least 2 bands");
    }
    for (size_t i = 0; i + 1 < axis.size(); ++i) {
        if (!(axis[i] < axis[i + 1])) {
            throw ValidationError("hypercube: axis must be strictly increasing");
        }
    }
    for (double v : axis) {
        if (!std::isfinite(v)) throw ValidationError("hypercube: non-finite axis value");
    }
    if (data.size() != static_cast<size_t>(height) * width * axis.size()) {
        throw ValidationError("hypercube: data length != H*W*B");
    }
    for (double v : data) {
        if (!std::isfinite(v)) throw ValidationError("hypercube: non-finite intensity");
    }
    if (!(meta.integration_time > 0.0)) {
        throw ValidationError("hypercube: integration_time must be > 0");
    }
    if (!(meta.pixel_pitch > 0.0)) {
        throw ValidationError("hypercube: pixel_pitch must be > 0");
    }
}

template <typename T>
void write_le(std::ostream& os, T value) {
    static_assert(std::endian::native == std::endian::little);
    os.write(reinterpret_cast<const char*>(&value), sizeof(value));
}

template <typename T>
T read_le(std::istream& is) {
    T value{};
    is.read(reinterpret_cast<char*>(&value), sizeof(value));
    if (!is) throw FormatError("hrc1: truncated file");
    return value;
}

}  // namespace

HyperCube::HyperCube(int height, int width, std::vector<double> axis,
                     std::vector<double> data, AcquisitionMeta meta)
    : height_(height),
      width_(width),
      axis_(std::move(axis)),
      data_(std::move(data)),
      meta_(std::move(meta)) {
    validate(height_, width_, axis_, data_, meta_);
}

Spectrum HyperCube::spectrum(int row, int col) const {
    auto s = spectrum_at(row, col);
    return Spectrum{axis_, std::vector<double>(s.begin(), s.end())};
}

void save_cube(const HyperCube& cube, const std::string& path) {
    // Construction already validated the cube; the invariant cannot have been
    // broken since (immutability), so no bytes can be written for a bad cube.
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("hrc1: cannot open for writing: " + path);
    os.write(kMagic, 4);
    write_le<uint32_t>(os, kVersion);
    write_le<uint32_t>(os, static_cast<uint32_t>(cube.height()));
    write_le<uint32_t>(os, static_cast<uint32_t>(cube.width()));
    write_le<uint32_t>(os, static_cast<uint32_t>(cube.bands()));
    write_le<double>(os, cube.meta().integration_time);
    write_le<double>(os, cube.meta().pixel_pitch);
    const std::string& label = cube.meta().label;
    write_le<uint32_t>(os, static_cast<uint32_t>(label.size()));
    os.write(label.data(), static_cast<std::streamsize>(label.size()));
    for (double v : cube.axis()) write_le<double>(os, v);
    std::vector<float> payload(cube.data().size());
    for (size_t i = 0; i < payload.size(); ++i) {
        payload[i] = static_cast<float>(cube.data()[i]);
    }
    os.write(reinterpret_cast<const char*>(payload.data()),
             static_cast<std::streamsize>(payload.size() * sizeof(float)));
    if (!os) throw IoError("hrc1: short write: " + path);
}

HyperCube load_cube(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("hrc1: cannot open: " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0) {
        throw FormatError("hrc1: bad magic in " + path);
    }
    uint32_t version = read_le<uint32_t>(is);
    if (version != kVersion) {
        throw FormatError("hrc1: unsupported version " + std::to_string(version));
    }
    uint32_t h = read_le<uint32_t>(is);
    uint32_t w = read_le<uint32_t>(is);
    uint32_t b = read_le<uint32_t>(is);
    AcquisitionMeta meta;
    meta.integration_time = read_le<double>(is);
    meta.pixel_pitch = read_le<double>(is);
    uint32_t label_len = read_le<uint32_t>(is);
    meta.label.resize(label_len);
    if (label_len > 0) {
        is.read(meta.label.data(), label_len);
        if (!is) throw FormatError("hrc1: truncated label");
    }
    std::vector<double> axis(b);
    for (uint32_t i = 0; i < b; ++i) axis[i] = read_le<double>(is);
    std::vector<float> payload(static_cast<size_t>(h) * w * b);
    is.read(reinterpret_cast<char*>(payload.data()),
            static_cast<std::streamsize>(payload.size() * sizeof(float)));
    if (is.gcount() != static_cast<std::streamsize>(payload.size() * sizeof(float))) {
        throw FormatError("hrc1: truncated payload");
    }
    std::vector<double> data(payload.begin(), payload.end());
    try {
        return HyperCube(static_cast<int>(h), static_cast<int>(w), std::move(axis),
                         std::move(data), std::move(meta));
    } catch (const ValidationError&) {
        throw;
    }
}

HyperCube crop_spectral(const HyperCube& cube, double lo, double hi) {
    if (!(lo < hi)) throw RangeError("crop_spectral: lo must be < hi");
    const auto& axis = cube.axis();
    int first = -1, last = -1;
    for (int k = 0; k < cube.bands(); ++k) {
        if (axis[k] >= lo && axis[k] <= hi) {
            if (first < 0) first = k;
            last = k;
        }
    }
    if (first < 0) throw RangeError("crop_spectral: no bands in [lo, hi]");
    int nb = last - first + 1;
    if (nb < 2) throw RangeError("crop_spectral: fewer than 2 bands in [lo, hi]");

    std::vector<double> new_axis(axis.begin() + first, axis.begin() + last + 1);
    std::vector<double> data(static_cast<size_t>(cube.height()) * cube.width() * nb);
    const int b = cube.bands();
    size_t out = 0;
    for (int p = 0; p < cube.height() * cube.width(); ++p) {
        const double* src = cube.data().data() + static_cast<size_t>(p) * b + first;
        std::memcpy(data.data() + out, src, nb * sizeof(double));
        out += nb;
    }
    return HyperCube(cube.height(), cube.width(), std::move(new_axis), std::move(data),
                     cube.meta());
}

std::vector<double> peak_intensity_map(const HyperCube& cube, double center,
                                       double half_width) {
    const auto& axis = cube.axis();
    int first = -1, last = -1;
    for (int k = 0; k < cube.bands(); ++k) {
        if (axis[k] >= center - half_width && axis[k] <= center + half_width) {
            if (first < 0) first = k;
            last = k;
        }
    }
    if (first < 0) throw RangeError("peak_intensity_map: window misses the axis");
    const int nb = last - first + 1;
    const int b = cube.bands();
    std::vector<double> map(static_cast<size_t>(cube.height()) * cube.width());
    for (size_t p = 0; p < map.size(); ++p) {
        const double* src = cube.data().data() + p * b + first;
        double sum = 0.0;
        for (int k = 0; k < nb; ++k) sum += src[k];
        map[p] = sum / nb;
    }
    return map;
}

Spectrum load_spectrum_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("csv: cannot open: " + path);
    Spectrum s;
    std::string line;
    bool first_line = true;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        for (char& c : line) {
            if (c == ',' || c == ';' || c == '\t') c = ' ';
        }
        std::istringstream ls(line);
        double wn, intensity;
        if (!(ls >> wn >> intensity)) {
            if (first_line) {  // header
                first_line = false;
                continue;
            }
            throw FormatError("csv: malformed line: " + line);
        }
        first_line = false;
        s.axis.push_back(wn);
        s.values.push_back(intensity);
    }
    if (s.axis.size() < 2) throw FormatError("csv: need at least 2 rows");
    for (size_t i = 0; i + 1 < s.axis.size(); ++i) {
        if (!(s.axis[i] < s.axis[i + 1])) {
            throw ValidationError("csv: wavenumbers must be strictly increasing");
        }
    }
    return s;
}

std::string format_min_sec(double seconds) {
    auto total = static_cast<long long>(seconds);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%02lld:%02lld", total / 60, total % 60);
    return buf;
}

}  // namespace raman
