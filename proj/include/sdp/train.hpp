#ifndef SDP_TRAIN_HPP
#define SDP_TRAIN_HPP

#include <cstdint>
#include <vector>

#include "sdp/adam.hpp"
#include "sdp/cube.hpp"
#include "sdp/denoiser.hpp"
#include "sdp/rng.hpp"
#include "sdp/schedule.hpp"

namespace sdp {

struct TrainConfig {
    int batch_size = 512;
    long steps = 30000; // optimizer steps, one batch each
    double base_lr = 0.01;
    bool scheduled_lr = true;
    bool sample_with_replacement = false;
    AdamConfig adam;
};

// base_lr * 0.001 * max(1000 - step/10, 1): starts at base_lr, ramps linearly
// down and floors at base_lr/1000 from step 10000 on.
double scheduled_learning_rate(double base_lr, long step);

struct TrainStepInfo {
    long step = 0;
    int t = 0;
    double lr = 0.0;
    double loss = 0.0;
};

struct TrainResult {
    DenoiserParams params;
    std::vector<TrainStepInfo> trace;
};

// Denoising objective: per step, draw a batch, a uniform t, and eps; form
// x_t with q_sample and take one Adam step on the mean squared noise
// prediction error. Loss is averaged over batch rows and bands.
TrainResult train_denoiser(const SpectrumBatch& spectra, const DenoiserConfig& net_cfg,
                           const TrainConfig& cfg, const VarianceSchedule& sched, RngStream& rng);

// Continue training from existing weights; steps_trained on the params keeps
// counting so the learning-rate rule resumes where it left off.
TrainResult resume_denoiser(DenoiserParams params, const SpectrumBatch& spectra,
                            const TrainConfig& cfg, const VarianceSchedule& sched, RngStream& rng);

} // namespace sdp

#endif
