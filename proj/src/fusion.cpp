#include "sdp/fusion.hpp"

#include <cmath>
#include <string>

#include "sdp/error.hpp"

namespace sdp {

HyperCube init_estimate(const HyperCube& lr_hsi, int factor) {
    require(factor >= 1, "bad_argument", "init_estimate: factor must be >= 1");
    if (factor == 1) return lr_hsi;
    const int h = lr_hsi.height, w = lr_hsi.width;
    const int oh = h * factor, ow = w * factor;
    HyperCube out(lr_hsi.bands, oh, ow);

    auto src_coord = [](int dst, int out_dim, int in_dim) {
        if (in_dim == 1) return 0.0;
        return static_cast<double>(dst) * (in_dim - 1) / (out_dim - 1);
    };

    for (int b = 0; b < lr_hsi.bands; ++b)
        for (int r = 0; r < oh; ++r) {
            const double sr = src_coord(r, oh, h);
            const int r0 = static_cast<int>(sr);
            const int r1 = std::min(r0 + 1, h - 1);
            const double fr = sr - r0;
            for (int c = 0; c < ow; ++c) {
                const double sc = src_coord(c, ow, w);
                const int c0 = static_cast<int>(sc);
                const int c1 = std::min(c0 + 1, w - 1);
                const double fc = sc - c0;
                out.at(b, r, c) = (1.0 - fr) * ((1.0 - fc) * lr_hsi.at(b, r0, c0) +
                                                fc * lr_hsi.at(b, r0, c1)) +
                                  fr * ((1.0 - fc) * lr_hsi.at(b, r1, c0) +
                                        fc * lr_hsi.at(b, r1, c1));
            }
        }
    return out;
}

LossGrad fidelity_grad(const HyperCube& x, const HyperCube& lr_hsi, const HyperCube& hr_msi,
                       const DegradationModel& deg, double lambda) {
    deg.validate();
    require(x.bands == lr_hsi.bands && x.bands == deg.srf.cols(), "shape_mismatch",
            "fidelity_grad: band counts inconsistent");
    require(x.height == lr_hsi.height * deg.factor && x.width == lr_hsi.width * deg.factor,
            "shape_mismatch", "fidelity_grad: estimate/LR grid mismatch");
    require(hr_msi.bands == deg.srf.rows() && hr_msi.height == x.height &&
                hr_msi.width == x.width,
            "shape_mismatch", "fidelity_grad: MSI shape mismatch");

    // LR-HSI residual: down(blur(X)) - Y.
    HyperCube ry = downsample(blur(x, deg.psf), deg.factor);
    double loss_y = 0.0;
    for (std::size_t i = 0; i < ry.data.size(); ++i) {
        ry.data[i] -= lr_hsi.data[i];
        loss_y += ry.data[i] * ry.data[i];
    }

    // MSI residual: RX - Z.
    HyperCube rz = apply_srf(x, deg.srf);
    double loss_z = 0.0;
    for (std::size_t i = 0; i < rz.data.size(); ++i) {
        rz.data[i] -= hr_msi.data[i];
        loss_z += rz.data[i] * rz.data[i];
    }

    LossGrad out;
    out.loss = lambda * loss_y + loss_z;
    out.grad = blur(upsample_zero_fill(ry, deg.factor), deg.psf, true);
    const HyperCube g_msi = apply_srf(rz, deg.srf, true);
    for (std::size_t i = 0; i < out.grad.data.size(); ++i)
        out.grad.data[i] = 2.0 * lambda * out.grad.data[i] + 2.0 * g_msi.data[i];
    return out;
}

LossGrad prior_grad_with_eps(const HyperCube& x, int t, const DenoiserParams& denoiser,
                             const VarianceSchedule& sched, double gamma,
                             const Eigen::MatrixXd& eps, PriorReduction reduction) {
    require(t >= 1 && t <= sched.t_steps, "bad_argument", "prior_grad: t out of range");
    require(x.bands == denoiser.config().bands, "shape_mismatch",
            "prior_grad: cube bands do not match the denoiser");

    const SpectrumBatch spectra = cube_to_spectra(x);
    require(eps.rows() == spectra.count && eps.cols() == spectra.bands, "shape_mismatch",
            "prior_grad: eps not shape-congruent with the pixel set");

    const double abar = sched.alpha_bar_at(t);
    const double sqrt_abar = std::sqrt(abar);

    SpectrumBatch x_t(spectra.count, spectra.bands);
    x_t.data = sqrt_abar * spectra.data + std::sqrt(1.0 - abar) * eps;

    ForwardTape tape;
    const SpectrumBatch pred = denoiser_forward(denoiser, x_t, t, false, nullptr, &tape);
    const Eigen::MatrixXd resid = eps - pred.data;

    const double scale =
        reduction == PriorReduction::MeanPixels ? 1.0 / static_cast<double>(spectra.count) : 1.0;

    LossGrad out;
    out.loss = gamma * scale * resid.squaredNorm();

    // d loss / d x_t flows only through eps_pred; chain through x = x_t / sqrt(abar).
    const Eigen::MatrixXd upstream = (-2.0 * gamma * scale) * resid;
    const BackwardResult back = denoiser_backward(denoiser, tape, upstream);
    SpectrumBatch grad_spectra(spectra.count, spectra.bands);
    grad_spectra.data = sqrt_abar * back.input_grads;
    out.grad = spectra_to_cube(grad_spectra, x.height, x.width);
    return out;
}

LossGrad prior_grad(const HyperCube& x, int t, const DenoiserParams& denoiser,
                    const VarianceSchedule& sched, double gamma, RngStream& rng,
                    PriorReduction reduction) {
    if (gamma == 0.0) {
        LossGrad out;
        out.grad = HyperCube(x.bands, x.height, x.width, 0.0);
        return out;
    }
    const Eigen::MatrixXd eps =
        gaussian_matrix(rng, static_cast<int>(x.pixels()), x.bands);
    return prior_grad_with_eps(x, t, denoiser, sched, gamma, eps, reduction);
}

namespace {

FusionResult fuse_loop(const HyperCube& lr_hsi, const HyperCube& hr_msi,
                       const DegradationModel& deg, const DenoiserParams* denoiser,
                       const VarianceSchedule& sched, const FusionConfig& cfg,
                       bool use_prior) {
    deg.validate();
    require(cfg.lambda > 0.0, "bad_argument", "fusion: lambda must be positive");
    require(cfg.gamma >= 0.0, "bad_argument", "fusion: gamma must be non-negative");
    require(cfg.k_inner >= 1, "bad_argument", "fusion: K must be >= 1");
    if (use_prior) {
        require(denoiser != nullptr, "bad_argument", "fusion: gamma > 0 needs a denoiser");
        require(denoiser->config().bands == lr_hsi.bands, "shape_mismatch",
                "fusion: denoiser bands do not match the LR-HSI");
        require(denoiser->config().t_steps == sched.t_steps, "bad_argument",
                "fusion: schedule length does not match the denoiser");
    }

    HyperCube x = init_estimate(lr_hsi, deg.factor);
    AdamState adam(x.data.size(), cfg.adam);
    RngStream root(cfg.seed);
    RngStream prior_root = root.split("prior_eps");

    FusionResult result;
    result.trace.reserve(static_cast<std::size_t>(sched.t_steps) * cfg.k_inner);

    std::vector<double> total(x.data.size());
    for (int t = sched.t_steps; t >= 1; --t) {
        if (cfg.reset_adam_per_t) adam.reset_moments();
        for (int k = 1; k <= cfg.k_inner; ++k) {
            const LossGrad fid = fidelity_grad(x, lr_hsi, hr_msi, deg, cfg.lambda);

            FusionTraceRow row;
            row.t = t;
            row.k = k;
            row.fidelity_loss = fid.loss;

            if (use_prior) {
                RngStream rng_tk = prior_root.split(static_cast<std::uint64_t>(t))
                                       .split(static_cast<std::uint64_t>(k));
                const LossGrad pri =
                    prior_grad(x, t, *denoiser, sched, cfg.gamma, rng_tk, cfg.reduction);
                row.prior_loss = pri.loss;
                for (std::size_t i = 0; i < total.size(); ++i)
                    total[i] = fid.grad.data[i] + pri.grad.data[i];
            } else {
                for (std::size_t i = 0; i < total.size(); ++i) total[i] = fid.grad.data[i];
            }

            row.total_loss = row.fidelity_loss + row.prior_loss;
            if (!std::isfinite(row.total_loss))
                fail("non_finite",
                     "fusion: loss became non-finite at t=" + std::to_string(t) +
                         " k=" + std::to_string(k) +
                         " (fidelity=" + std::to_string(row.fidelity_loss) +
                         ", prior=" + std::to_string(row.prior_loss) + ")");

            adam.step(x.data, total, cfg.mu);
            result.trace.push_back(row);
        }
    }

    result.estimate = std::move(x);
    return result;
}

} // namespace

FusionResult sdp_fuse(const HyperCube& lr_hsi, const HyperCube& hr_msi,
                      const DegradationModel& deg, const DenoiserParams* denoiser,
                      const VarianceSchedule& sched, const FusionConfig& cfg) {
    return fuse_loop(lr_hsi, hr_msi, deg, denoiser, sched, cfg, cfg.gamma > 0.0);
}

FusionResult baseline_fuse(const HyperCube& lr_hsi, const HyperCube& hr_msi,
                           const DegradationModel& deg, const VarianceSchedule& sched,
                           const FusionConfig& cfg) {
    deg.validate();
    require(cfg.lambda > 0.0, "bad_argument", "fusion: lambda must be positive");
    require(cfg.k_inner >= 1, "bad_argument", "fusion: K must be >= 1");

    HyperCube x = init_estimate(lr_hsi, deg.factor);
    AdamState adam(x.data.size(), cfg.adam);

    FusionResult result;
    result.trace.reserve(static_cast<std::size_t>(sched.t_steps) * cfg.k_inner);
    for (int t = sched.t_steps; t >= 1; --t) {
        if (cfg.reset_adam_per_t) adam.reset_moments();
        for (int k = 1; k <= cfg.k_inner; ++k) {
            const LossGrad fid = fidelity_grad(x, lr_hsi, hr_msi, deg, cfg.lambda);
            if (!std::isfinite(fid.loss))
                fail("non_finite", "baseline: loss became non-finite at t=" + std::to_string(t));
            adam.step(x.data, fid.grad.data, cfg.mu);
            result.trace.push_back({t, k, fid.loss, 0.0, fid.loss});
        }
    }
    result.estimate = std::move(x);
    return result;
}

} // namespace sdp
