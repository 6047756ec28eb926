#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "raman/hypercube.hpp"
#include "raman/unmix.hpp"

namespace raman::synth {

struct Peak {
    double center = 0.0;     // cm^-1
    double width = 15.0;     // full width at half maximum, cm^-1
    double amplitude = 1.0;
};

// Spatial footprint of a component on the unit square (fractions of the
// grid). Disk uses r1; annulus the ring [r1, r2]; blob is a rotated ellipse
// with semi-axes r1, r2 and rotation `angle` radians. Full covers the field.
enum class LayoutKind { Full, Disk, Annulus, Blob };

struct Layout {
    LayoutKind kind = LayoutKind::Full;
    double cx = 0.5;
    double cy = 0.5;
    double r1 = 0.25;
    double r2 = 0.0;
    double angle = 0.0;
};

struct ComponentSpec {
    std::string name;
    std::vector<Peak> peaks;
    Layout layout;
};

// Shot-noise acquisition model: counts ~ Poisson(rate * t * intensity) plus
// Gaussian read noise, rescaled back to intensity units.
struct NoiseModel {
    double integration_time = 1.0;     // seconds
    double photon_rate_scale = 100.0;  // counts per unit intensity per second
    double read_noise_sigma = 1.0;     // counts
};

struct PhantomTruth {
    HyperCube clean;
    unmix::EndmemberSet endmembers;
    unmix::AbundanceCube abundances;
    unmix::LabelMap labels;
};

struct DatasetSample {
    HyperCube clean_hr;
    HyperCube noisy_hr;       // t_low noise at full resolution
    HyperCube noisyhigh_hr;   // t_high noise at full resolution
    HyperCube clean_lr;       // decimated clean
    HyperCube noisy_lr;       // decimated t_low
    HyperCube noisyhigh_lr;   // decimated t_high
    std::string role;         // train | val | test
    uint64_t seed = 0;
};

// Sum of Lorentzian lines evaluated on the axis.
Spectrum component_spectrum(const ComponentSpec& spec, const std::vector<double>& axis);

// Mixture phantom with per-component abundance fields; guarantees at least
// one pure pixel per component and returns exact ground truth.
PhantomTruth gen_phantom(const std::vector<ComponentSpec>& components, int height,
                         int width, const std::vector<double>& axis, uint64_t seed);

HyperCube apply_noise(const HyperCube& clean, const NoiseModel& model, uint64_t seed);

// Paired phantom dataset: per cube, clean/noisy at both resolutions plus a
// train/val/test role. Layouts are randomized per cube from the library.
std::vector<DatasetSample> gen_dataset(int n_cubes, int height, int width,
                                       const std::vector<double>& axis, int scale,
                                       double t_low, double t_high, uint64_t seed,
                                       const std::string& library = "cells");

// Component libraries with canonical peak sets; "cells" and "cartilage".
std::vector<ComponentSpec> component_library(const std::string& name);

// Evenly spaced fingerprint axis, 600..1800 cm^-1 by default.
std::vector<double> default_axis(int bands = 500, double lo = 600.0, double hi = 1800.0);

// Writes HRC1 files plus manifest.json into `dir`; returns the manifest path.
std::string write_dataset(const std::vector<DatasetSample>& samples,
                          const std::vector<double>& axis, int scale,
                          const std::string& dir);

}  // namespace raman::synth
