#pragma once

#include <span>
#include <string>
#include <vector>

namespace raman {

struct AcquisitionMeta {
    double integration_time = 1.0;  // seconds per spectrum
    double pixel_pitch = 1.0;       // micrometers per pixel
    std::string label;

    bool operator==(const AcquisitionMeta&) const = default;
};

// 1-D intensity trace aligned to a wavenumber axis (cm^-1).
struct Spectrum {
    std::vector<double> axis;
    std::vector<double> values;
};

// H x W x B block of Raman intensities, row-major (row, col, band), with a
// strictly increasing wavenumber axis. Immutable after construction; all
// operations below are pure and return new cubes.
class HyperCube {
  public:
    HyperCube(int height, int width, std::vector<double> axis,
              std::vector<double> data, AcquisitionMeta meta);

    int height() const { return height_; }
    int width() const { return width_; }
    int bands() const { return static_cast<int>(axis_.size()); }
    const std::vector<double>& axis() const { return axis_; }
    const std::vector<double>& data() const { return data_; }
    const AcquisitionMeta& meta() const { return meta_; }

    double at(int row, int col, int band) const {
        return data_[(static_cast<size_t>(row) * width_ + col) * axis_.size() + band];
    }
    std::span<const double> spectrum_at(int row, int col) const {
        return {data_.data() + (static_cast<size_t>(row) * width_ + col) * axis_.size(),
                axis_.size()};
    }
    Spectrum spectrum(int row, int col) const;

    // Total acquisition time in seconds: one spectrum per pixel.
    double acquisition_seconds() const {
        return static_cast<double>(height_) * width_ * meta_.integration_time;
    }

    bool operator==(const HyperCube&) const = default;

  private:
    int height_;
    int width_;
    std::vector<double> axis_;
    std::vector<double> data_;
    AcquisitionMeta meta_;
};

// HRC1 container: see README for the byte layout. Round-trips bit-exactly.
HyperCube load_cube(const std::string& path);
void save_cube(const HyperCube& cube, const std::string& path);

// Keeps exactly the bands with lo <= axis[k] <= hi (closed interval).
HyperCube crop_spectral(const HyperCube& cube, double lo, double hi);

// Mean intensity over bands within [center - half_width, center + half_width],
// one value per pixel, row-major H x W.
std::vector<double> peak_intensity_map(const HyperCube& cube, double center,
                                       double half_width);

// Two-column CSV (wavenumber, intensity), optional header line.
Spectrum load_spectrum_csv(const std::string& path);

// "mm:ss" rendering of a duration, truncating fractional seconds.
std::string format_min_sec(double seconds);

}  // namespace raman
