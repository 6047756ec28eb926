#pragma once

#include "raman/hypercube.hpp"
#include "raman/rng.hpp"

namespace raman::augment {

struct AugmentPolicy {
    int crop_size = 0;          // input-member pixels per side; >= 1 at use
    double p_flip_h = 0.5;
    double p_flip_v = 0.5;
    double p_rot90 = 0.5;
    double mixup_alpha = 0.2;   // Beta(alpha, alpha) parameter
    double p_mixup = 0.0;
    int max_spectral_shift = 0; // bands
    double p_spectral_flip = 0.0;
};

// Input/target pair: equal spatial dims for denoising, target = s x input
// (s in {2, 3, 4}) for super-resolution. Band counts always match.
struct TrainingPair {
    HyperCube input;
    HyperCube target;
};

// Returns 1 for same-dims pairs, the scale factor for super-resolution
// pairs; throws ShapeError otherwise.
int pair_scale(const TrainingPair& pair);

// Applies crop, flip-h, flip-v, rot90, spectral-shift, spectral-flip in that
// fixed order, drawing from the generator deterministically. Spatial
// transforms act at input-pixel granularity: on the target member they
// permute s x s pixel blocks so that a pair satisfying
// input == decimate(target, s) keeps satisfying it exactly.
TrainingPair augment_pair(const TrainingPair& pair, const AugmentPolicy& policy,
                          Rng& rng);

// lambda * a + (1 - lambda) * b on both members.
TrainingPair mixup(const TrainingPair& pair_a, const TrainingPair& pair_b,
                   double lambda);

// Shifts every spectrum by k bands (band b of the output reads band b - k of
// the input), replicating the edge band into vacated positions. The axis is
// unchanged: the shift is a perturbation, not a recalibration.
HyperCube spectral_shift(const HyperCube& cube, int k);

// Reverses the band order of every spectrum, axis unchanged.
HyperCube spectral_flip(const HyperCube& cube);

}  // namespace raman::augment
