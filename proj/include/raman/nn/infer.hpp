#pragma once

#include "raman/hypercube.hpp"
#include "raman/nn/checkpoint.hpp"

namespace raman::nn {

// Runs the denoiser over every pixel spectrum; dims, axis and metadata are
// unchanged. Intensities are normalized by the cube maximum on the way in
// and denormalized on the way out.
HyperCube infer_denoise(const Checkpoint& ckpt, const HyperCube& cube);

// Super-resolves to (out_h, out_w), which must be consistent with the
// checkpoint scale up to remainder; pixel_pitch is divided by the scale.
HyperCube infer_superres(const Checkpoint& ckpt, const HyperCube& cube, int out_h,
                         int out_w);

}  // namespace raman::nn
