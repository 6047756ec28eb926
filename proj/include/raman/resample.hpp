#pragma once

#include "raman/hypercube.hpp"

namespace raman::resample {

// Raster decimation: keep every s-th pixel in both axes starting at (0, 0),
// mirroring a sparse raster scan. Output dims ceil(H/s) x ceil(W/s); spectra
// are copied unmodified; pixel_pitch is multiplied by s. s must be 2, 3 or 4.
HyperCube decimate(const HyperCube& cube, int s);

// Nearest-neighbour upsampling: out(i, j) = in(floor(i/s), floor(j/s)).
// Exact inverse of decimate on kept grid positions.
HyperCube upsample_nearest(const HyperCube& cube, int s, int out_h, int out_w);

// Per-band cubic convolution (Keys kernel, a = -0.5), top-left aligned so
// x_src = x_out / s and kept grid positions reproduce the input exactly.
// Edge samples are clamped; overshoot is not clamped.
HyperCube upsample_bicubic(const HyperCube& cube, int s, int out_h, int out_w);

// Keys cubic kernel weights for fractional offset t in [0, 1), taps at
// offsets {-1, 0, 1, 2} around the base sample. Weights sum to 1.
void bicubic_weights(double t, double w[4]);

bool valid_scale(int s);

}  // namespace raman::resample
