#include "sdp/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sdp/diffusion.hpp"
#include "sdp/error.hpp"

namespace sdp {

double scheduled_learning_rate(double base_lr, long step) {
    return base_lr * 0.001 * std::max(1000.0 - static_cast<double>(step) / 10.0, 1.0);
}

namespace {

TrainResult train_loop(DenoiserParams params, const SpectrumBatch& spectra,
                       const TrainConfig& cfg, const VarianceSchedule& sched, RngStream& rng) {
    require(spectra.bands == params.config().bands, "shape_mismatch",
            "train_denoiser: spectra bands do not match the network");
    require(cfg.batch_size >= 1 && cfg.steps >= 1, "bad_argument",
            "train_denoiser: batch_size and steps must be >= 1");
    require(sched.t_steps == params.config().t_steps, "bad_argument",
            "train_denoiser: schedule length does not match the network");
    require(cfg.sample_with_replacement || spectra.count >= cfg.batch_size, "bad_argument",
            "train_denoiser: need count >= batch_size unless sampling with replacement");

    const int nb = spectra.bands;
    const int bs = cfg.batch_size;
    AdamState adam(params.flat().size(), cfg.adam);
    RngStream step_root = rng.split("step");

    TrainResult result;
    result.trace.reserve(static_cast<std::size_t>(cfg.steps));

    std::vector<int> order(static_cast<std::size_t>(spectra.count));
    SpectrumBatch x0(bs, nb);

    const long first = params.steps_trained;
    for (long step = first; step < first + cfg.steps; ++step) {
        // Step-keyed substreams; resuming at a step index replays it exactly.
        RngStream st = step_root.split(static_cast<std::uint64_t>(step));
        RngStream rng_batch = st.split("batch");
        RngStream rng_t = st.split("t");
        RngStream rng_eps = st.split("eps");
        RngStream rng_drop = st.split("dropout");

        if (cfg.sample_with_replacement) {
            for (int i = 0; i < bs; ++i)
                x0.data.row(i) =
                    spectra.data.row(static_cast<int>(rng_batch.next_u64() %
                                                      static_cast<std::uint64_t>(spectra.count)));
        } else {
            std::iota(order.begin(), order.end(), 0);
            for (int i = 0; i < bs; ++i) {
                const std::uint64_t span = static_cast<std::uint64_t>(spectra.count - i);
                const int j = i + static_cast<int>(rng_batch.next_u64() % span);
                std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
                x0.data.row(i) = spectra.data.row(order[static_cast<std::size_t>(i)]);
            }
        }

        const int t = 1 + static_cast<int>(rng_t.next_u64() %
                                           static_cast<std::uint64_t>(sched.t_steps));
        const Eigen::MatrixXd eps = gaussian_matrix(rng_eps, bs, nb);
        const SpectrumBatch x_t = q_sample(x0, t, eps, sched);

        ForwardTape tape;
        const SpectrumBatch pred = denoiser_forward(params, x_t, t, true, &rng_drop, &tape);
        const Eigen::MatrixXd resid = pred.data - eps;
        // Mean over batch rows of the per-spectrum squared error norm.
        const double loss = resid.squaredNorm() / static_cast<double>(bs);
        if (!std::isfinite(loss))
            fail("non_finite", "train_denoiser: loss became non-finite at step " +
                                   std::to_string(step) + " (t=" + std::to_string(t) + ")");

        const Eigen::MatrixXd upstream = (2.0 / static_cast<double>(bs)) * resid;
        const BackwardResult back = denoiser_backward(params, tape, upstream);

        const double lr = cfg.scheduled_lr ? scheduled_learning_rate(cfg.base_lr, step)
                                           : cfg.base_lr;
        adam.step(params.flat(),
                  std::span<const double>(back.param_grads.data(),
                                          static_cast<std::size_t>(back.param_grads.size())),
                  lr);
        ++params.version;
        params.steps_trained = step + 1;
        result.trace.push_back({step, t, lr, loss});
    }

    result.params = std::move(params);
    return result;
}

} // namespace

TrainResult train_denoiser(const SpectrumBatch& spectra, const DenoiserConfig& net_cfg,
                           const TrainConfig& cfg, const VarianceSchedule& sched,
                           RngStream& rng) {
    RngStream rng_init = rng.split("init");
    DenoiserParams params = init_denoiser(net_cfg, rng_init);
    return train_loop(std::move(params), spectra, cfg, sched, rng);
}

TrainResult resume_denoiser(DenoiserParams params, const SpectrumBatch& spectra,
                            const TrainConfig& cfg, const VarianceSchedule& sched,
                            RngStream& rng) {
    return train_loop(std::move(params), spectra, cfg, sched, rng);
}

} // namespace sdp
