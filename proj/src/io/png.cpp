#include "raman/io/png.hpp"

#include <zlib.h>

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>

#include "raman/errors.hpp"

namespace raman::io {

namespace {

void put_u32(std::vector<unsigned char>& out, uint32_t v) {
    out.push_back(static_cast<unsigned char>(v >> 24));
    out.push_back(static_cast<unsigned char>(v >> 16));
    out.push_back(static_cast<unsigned char>(v >> 8));
    out.push_back(static_cast<unsigned char>(v));
}

void put_chunk(std::vector<unsigned char>& out, const char type[4],
               const std::vector<unsigned char>& data) {
    put_u32(out, static_cast<uint32_t>(data.size()));
    const size_t start = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), data.begin(), data.end());
    const uint32_t crc = crc32(0, out.data() + start, static_cast<uInt>(out.size() - start));
    put_u32(out, crc);
}

}  // namespace

void write_png_gray(const std::string& path, const std::vector<unsigned char>& pixels,
                    int width, int height) {
    if (width < 1 || height < 1 ||
        pixels.size() != static_cast<size_t>(width) * height) {
        throw ValueError("png: pixel buffer does not match dims");
    }
    // Raw scanlines, filter byte 0 per row.
    std::vector<unsigned char> raw;
    raw.reserve(static_cast<size_t>(height) * (width + 1));
    for (int y = 0; y < height; ++y) {
        raw.push_back(0);
        raw.insert(raw.end(), pixels.begin() + static_cast<size_t>(y) * width,
                   pixels.begin() + static_cast<size_t>(y + 1) * width);
    }
    uLongf bound = compressBound(static_cast<uLong>(raw.size()));
    std::vector<unsigned char> compressed(bound);
    if (compress2(compressed.data(), &bound, raw.data(), static_cast<uLong>(raw.size()),
                  9) != Z_OK) {
        throw IoError("png: deflate failed");
    }
    compressed.resize(bound);

    std::vector<unsigned char> file = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
    std::vector<unsigned char> ihdr;
    put_u32(ihdr, static_cast<uint32_t>(width));
    put_u32(ihdr, static_cast<uint32_t>(height));
    ihdr.push_back(8);  // bit depth
    ihdr.push_back(0);  // grayscale
    ihdr.push_back(0);  // compression
    ihdr.push_back(0);  // filter
    ihdr.push_back(0);  // interlace
    put_chunk(file, "IHDR", ihdr);
    put_chunk(file, "IDAT", compressed);
    put_chunk(file, "IEND", {});

    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("png: cannot open for writing: " + path);
    os.write(reinterpret_cast<const char*>(file.data()),
             static_cast<std::streamsize>(file.size()));
    if (!os) throw IoError("png: short write: " + path);
}

void write_heatmap_png(const std::string& path, const std::vector<double>& image,
                       int width, int height) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (double v : image) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = hi > lo ? hi - lo : 1.0;
    std::vector<unsigned char> pixels(image.size());
    for (size_t i = 0; i < image.size(); ++i) {
        const double t = (image[i] - lo) / span;
        pixels[i] = static_cast<unsigned char>(std::clamp(t * 255.0 + 0.5, 0.0, 255.0));
    }
    write_png_gray(path, pixels, width, height);
    std::ofstream side(path + ".scale.txt");
    if (!side) throw IoError("png: cannot write sidecar for " + path);
    side << "min=" << lo << "\nmax=" << hi << "\nmapping=linear 0..255\n";
}

}  // namespace raman::io
