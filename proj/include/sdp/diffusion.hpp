#ifndef SDP_DIFFUSION_HPP
#define SDP_DIFFUSION_HPP

#include <map>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "sdp/cube.hpp"
#include "sdp/denoiser.hpp"
#include "sdp/rng.hpp"
#include "sdp/schedule.hpp"

namespace sdp {

enum class SigmaKind {
    Beta,      // sigma_t^2 = beta_t
    BetaTilde, // sigma_t^2 = (1 - abar_{t-1})/(1 - abar_t) * beta_t
};

double reverse_sigma(const VarianceSchedule& sched, int t, SigmaKind kind = SigmaKind::Beta);

// Closed-form forward sample: sqrt(abar_t)*x0 + sqrt(1-abar_t)*eps.
SpectrumBatch q_sample(const SpectrumBatch& x0, int t, const Eigen::MatrixXd& eps,
                       const VarianceSchedule& sched);

// Learned reverse mean: (x_t - beta_t/sqrt(1-abar_t) * eps_pred) / sqrt(alpha_t).
SpectrumBatch posterior_mean(const SpectrumBatch& x_t, int t, const Eigen::MatrixXd& eps_pred,
                             const VarianceSchedule& sched);

// One ancestral step: posterior_mean + sigma_t * noise. noise must be all
// zero when t == 1.
SpectrumBatch ddpm_step(const SpectrumBatch& x_t, int t, const Eigen::MatrixXd& eps_pred,
                        const Eigen::MatrixXd& noise, const VarianceSchedule& sched,
                        SigmaKind sigma = SigmaKind::Beta);

// Full reverse chain from x_T ~ N(0, I). The checkpoint map stores the state
// x_t as the chain reaches level t (so checkpoint T is the initial draw).
std::pair<SpectrumBatch, std::map<int, SpectrumBatch>> generate_spectra(
    const DenoiserParams& denoiser, int n, const VarianceSchedule& sched, RngStream& rng,
    const std::vector<int>& checkpoints = {}, SigmaKind sigma = SigmaKind::Beta);

} // namespace sdp

#endif
