#include "sdp/diffusion.hpp"

#include <algorithm>
#include <cmath>

#include "sdp/error.hpp"

namespace sdp {

namespace {

void check_t(const VarianceSchedule& sched, int t) {
    require(t >= 1 && t <= sched.t_steps, "bad_argument",
            "diffusion: t=" + std::to_string(t) + " outside [1, " +
                std::to_string(sched.t_steps) + "]");
}

void check_congruent(const SpectrumBatch& x, const Eigen::MatrixXd& m, const char* what) {
    require(x.data.rows() == m.rows() && x.data.cols() == m.cols(), "shape_mismatch",
            std::string("diffusion: ") + what + " not shape-congruent with the batch");
}

} // namespace

double reverse_sigma(const VarianceSchedule& sched, int t, SigmaKind kind) {
    check_t(sched, t);
    const double beta = sched.beta_at(t);
    if (kind == SigmaKind::Beta) return std::sqrt(beta);
    const double abar_prev = t > 1 ? sched.alpha_bar_at(t - 1) : 1.0;
    return std::sqrt((1.0 - abar_prev) / (1.0 - sched.alpha_bar_at(t)) * beta);
}

SpectrumBatch q_sample(const SpectrumBatch& x0, int t, const Eigen::MatrixXd& eps,
                       const VarianceSchedule& sched) {
    check_t(sched, t);
    check_congruent(x0, eps, "eps");
    const double abar = sched.alpha_bar_at(t);
    SpectrumBatch out(x0.count, x0.bands);
    out.data = std::sqrt(abar) * x0.data + std::sqrt(1.0 - abar) * eps;
    return out;
}

SpectrumBatch posterior_mean(const SpectrumBatch& x_t, int t, const Eigen::MatrixXd& eps_pred,
                             const VarianceSchedule& sched) {
    check_t(sched, t);
    check_congruent(x_t, eps_pred, "eps_pred");
    const double beta = sched.beta_at(t);
    const double alpha = sched.alpha_at(t);
    const double abar = sched.alpha_bar_at(t);
    SpectrumBatch out(x_t.count, x_t.bands);
    out.data = (x_t.data - (beta / std::sqrt(1.0 - abar)) * eps_pred) / std::sqrt(alpha);
    return out;
}

SpectrumBatch ddpm_step(const SpectrumBatch& x_t, int t, const Eigen::MatrixXd& eps_pred,
                        const Eigen::MatrixXd& noise, const VarianceSchedule& sched,
                        SigmaKind sigma) {
    check_t(sched, t);
    check_congruent(x_t, noise, "noise");
    if (t == 1)
        require(noise.isZero(0.0), "bad_argument", "ddpm_step: noise must be zero at t=1");
    SpectrumBatch out = posterior_mean(x_t, t, eps_pred, sched);
    if (t > 1) out.data += reverse_sigma(sched, t, sigma) * noise;
    return out;
}

std::pair<SpectrumBatch, std::map<int, SpectrumBatch>> generate_spectra(
    const DenoiserParams& denoiser, int n, const VarianceSchedule& sched, RngStream& rng,
    const std::vector<int>& checkpoints, SigmaKind sigma) {
    require(n >= 1, "bad_argument", "generate_spectra: n must be >= 1");
    for (int t : checkpoints) check_t(sched, t);

    const int bands = denoiser.config().bands;
    RngStream rng_init = rng.split("x_T");
    RngStream rng_noise = rng.split("step_noise");

    SpectrumBatch x(n, bands);
    x.data = gaussian_matrix(rng_init, n, bands);

    std::map<int, SpectrumBatch> snaps;
    for (int t = sched.t_steps; t >= 1; --t) {
        if (std::find(checkpoints.begin(), checkpoints.end(), t) != checkpoints.end())
            snaps.emplace(t, x);
        const SpectrumBatch eps_pred = denoiser_forward(denoiser, x, t, false, nullptr);
        const Eigen::MatrixXd noise = t > 1 ? gaussian_matrix(rng_noise, n, bands)
                                            : Eigen::MatrixXd::Zero(n, bands);
        x = ddpm_step(x, t, eps_pred.data, noise, sched, sigma);
    }
    return {std::move(x), std::move(snaps)};
}

} // namespace sdp
