#pragma once

#include <string>
#include <vector>

namespace raman::io {

// 8-bit grayscale PNG. `pixels` is row-major H x W in [0, 255].
void write_png_gray(const std::string& path, const std::vector<unsigned char>& pixels,
                    int width, int height);

// Min-max scales a double image to 8 bits, writes the PNG plus a sidecar
// text file (<path>.scale.txt) recording the mapping.
void write_heatmap_png(const std::string& path, const std::vector<double>& image,
                       int width, int height);

}  // namespace raman::io
