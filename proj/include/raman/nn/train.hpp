#pragma once

#include "raman/augment.hpp"
#include "raman/nn/checkpoint.hpp"

namespace raman::nn {

struct TrainConfig {
    int epochs = 10;
    int batch_size = 16;
    double max_lr = 5e-4;
    enum class Scheduler { OneCycle, Constant } scheduler = Scheduler::OneCycle;
    uint64_t seed = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double val_fraction = 0.1;       // automatic split when the caller gives none
    int max_spectra_per_epoch = 4096;  // denoising task; 0 means every pixel

    void validate() const;
};

struct EpochStats {
    int epoch = 0;
    double train_l1 = 0.0;
    double val_l1 = 0.0;
    double lr = 0.0;
};

struct TrainResult {
    Checkpoint checkpoint;  // best-validation state
    std::vector<EpochStats> history;
};

// Cosine one-cycle schedule: warmup from max_lr/25 to the peak at 30% of the
// step budget, anneal to max_lr/1e4 by the final step.
double one_cycle_lr(int step, int total_steps, double max_lr);

// One bias-corrected Adam update, t counts from 1.
void adam_step(std::vector<double>& param, const std::vector<double>& grad,
               std::vector<double>& m, std::vector<double>& v, double lr, int64_t t,
               double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

// Denoising: pairs with equal dims, trained per spectrum.
TrainResult train_denoiser(const ResUNet1dConfig& cfg,
                           const std::vector<augment::TrainingPair>& dataset,
                           const TrainConfig& train_cfg,
                           const augment::AugmentPolicy& policy);

// Super-resolution: pairs with target = scale x input, trained per cube.
TrainResult train_superres(const HyrisrConfig& cfg,
                           const std::vector<augment::TrainingPair>& dataset,
                           const TrainConfig& train_cfg,
                           const augment::AugmentPolicy& policy);

// Continues training from a parent checkpoint: weights are kept, optimizer
// moments are reset, provenance records the parent weight hash.
TrainResult fine_tune(const Checkpoint& parent,
                      const std::vector<augment::TrainingPair>& dataset,
                      const TrainConfig& train_cfg, const augment::AugmentPolicy& policy);

}  // namespace raman::nn
