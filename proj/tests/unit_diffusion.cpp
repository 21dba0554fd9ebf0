#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sdp/diffusion.hpp"
#include "sdp/error.hpp"
#include "sdp/schedule.hpp"

using namespace sdp;

TEST_CASE("linear schedule matches Table-style endpoints") {
    const VarianceSchedule s = make_schedule(1000, 1e-4, 0.02);
    CHECK(s.beta_at(1) == doctest::Approx(1e-4).epsilon(1e-12));
    CHECK(s.beta_at(1000) == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(s.beta_at(500) == doctest::Approx(1e-4 + 499.0 / 999.0 * (0.02 - 1e-4)).epsilon(1e-12));

    // Strictly increasing betas, strictly decreasing cumulative products.
    for (int t = 2; t <= 1000; ++t) {
        CHECK(s.beta_at(t) > s.beta_at(t - 1));
        CHECK(s.alpha_bar_at(t) < s.alpha_bar_at(t - 1));
    }
    const double log_abar = std::log(s.alpha_bar_at(1000));
    CHECK(log_abar > -11.0);
    CHECK(log_abar < -9.0);

    const VarianceSchedule one = make_schedule(1, 0.01, 0.01);
    CHECK(one.beta_at(1) == 0.01);
    CHECK(one.alpha_bar_at(1) == doctest::Approx(0.99));

    CHECK_THROWS_AS(make_schedule(0, 1e-4, 0.02), Error);
    CHECK_THROWS_AS(make_schedule(10, 0.02, 1e-4), Error);
    CHECK_THROWS_AS(make_schedule(10, 0.0, 0.02), Error);
}

TEST_CASE("q_sample closed form") {
    const VarianceSchedule s = make_schedule(100, 1e-4, 0.02);
    RngStream rng(31);
    SpectrumBatch x0(4, 3);
    x0.data = gaussian_matrix(rng, 4, 3);

    const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(4, 3);
    const SpectrumBatch pure = q_sample(x0, 40, zero, s);
    CHECK((pure.data - std::sqrt(s.alpha_bar_at(40)) * x0.data).cwiseAbs().maxCoeff() < 1e-15);

    SpectrumBatch zeros(4, 3);
    const Eigen::MatrixXd eps = gaussian_matrix(rng, 4, 3);
    const SpectrumBatch noise_only = q_sample(zeros, 40, eps, s);
    CHECK((noise_only.data - std::sqrt(1.0 - s.alpha_bar_at(40)) * eps).cwiseAbs().maxCoeff() <
          1e-15);

    CHECK_THROWS_AS(q_sample(x0, 0, zero, s), Error);
    CHECK_THROWS_AS(q_sample(x0, 101, zero, s), Error);
}

TEST_CASE("q_sample at t=T is close to pure noise for the paper schedule") {
    const VarianceSchedule s = make_schedule(1000, 1e-4, 0.02);
    RngStream rng(32);
    SpectrumBatch x0(1, 4);
    x0.data << 0.3, 0.9, 0.1, 0.6;

    const int n = 10000;
    double mean = 0.0, var = 0.0;
    std::vector<double> draws;
    draws.reserve(static_cast<std::size_t>(n) * 4);
    for (int i = 0; i < n; ++i) {
        const Eigen::MatrixXd eps = gaussian_matrix(rng, 1, 4);
        const SpectrumBatch xt = q_sample(x0, 1000, eps, s);
        for (int b = 0; b < 4; ++b) draws.push_back(xt.data(0, b));
    }
    for (double d : draws) mean += d;
    mean /= static_cast<double>(draws.size());
    for (double d : draws) var += (d - mean) * (d - mean);
    var /= static_cast<double>(draws.size() - 1);
    // sqrt(abar_T) ~ 0.006, so the batch is statistically N(0, 1).
    CHECK(std::abs(mean) < 0.02);
    CHECK(var == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("posterior_mean follows the rewritten reverse mean") {
    const VarianceSchedule s = make_schedule(50, 1e-3, 0.03);
    RngStream rng(33);
    SpectrumBatch x_t(3, 4);
    x_t.data = gaussian_matrix(rng, 3, 4);

    const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(3, 4);
    const SpectrumBatch mean0 = posterior_mean(x_t, 7, zero, s);
    CHECK((mean0.data - x_t.data / std::sqrt(s.alpha_at(7))).cwiseAbs().maxCoeff() < 1e-15);

    // t=1: sqrt(1-abar_1) = sqrt(beta_1).
    const Eigen::MatrixXd eps = gaussian_matrix(rng, 3, 4);
    const SpectrumBatch m1 = posterior_mean(x_t, 1, eps, s);
    const Eigen::MatrixXd want =
        (x_t.data - std::sqrt(s.beta_at(1)) * eps) / std::sqrt(s.alpha_at(1));
    CHECK((m1.data - want).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("posterior_mean agrees with the exact q(x_{t-1}|x_t,x_0) mean") {
    const VarianceSchedule s = make_schedule(200, 1e-4, 0.02);
    RngStream rng(34);
    for (int t : {2, 17, 100, 200}) {
        SpectrumBatch x0(2, 3);
        x0.data = gaussian_matrix(rng, 2, 3);
        const Eigen::MatrixXd eps = gaussian_matrix(rng, 2, 3);
        const SpectrumBatch x_t = q_sample(x0, t, eps, s);
        // Feeding the true eps as the prediction recovers the exact mean.
        const SpectrumBatch mu = posterior_mean(x_t, t, eps, s);
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 3; ++c) {
                const double want = oracle::ddpm_posterior_mean_ref(
                    x_t.data(r, c), x0.data(r, c), s.beta_at(t), s.alpha_bar_at(t),
                    s.alpha_bar_at(t - 1));
                CHECK(mu.data(r, c) == doctest::Approx(want).epsilon(1e-10));
            }
    }
}

TEST_CASE("ddpm_step applies the fixed sigma and guards t=1") {
    const VarianceSchedule s = make_schedule(1000, 1e-4, 0.02);
    RngStream rng(35);
    SpectrumBatch x_t(2, 2);
    x_t.data = gaussian_matrix(rng, 2, 2);
    const Eigen::MatrixXd eps = gaussian_matrix(rng, 2, 2);
    const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(2, 2);

    const SpectrumBatch quiet = ddpm_step(x_t, 10, eps, zero, s);
    CHECK(quiet.data == posterior_mean(x_t, 10, eps, s).data);

    CHECK(reverse_sigma(s, 1000) == doctest::Approx(std::sqrt(0.02)).epsilon(1e-12));
    CHECK(reverse_sigma(s, 1000) == doctest::Approx(0.1414).epsilon(1e-3));

    const Eigen::MatrixXd noise = gaussian_matrix(rng, 2, 2);
    const SpectrumBatch stepped = ddpm_step(x_t, 10, eps, noise, s);
    CHECK((stepped.data - quiet.data - std::sqrt(s.beta_at(10)) * noise).cwiseAbs().maxCoeff() <
          1e-15);

    CHECK_THROWS_AS(ddpm_step(x_t, 1, eps, noise, s), Error);
    CHECK_NOTHROW(ddpm_step(x_t, 1, eps, zero, s));

    // Variance-preserving alternative stays below the default sigma.
    CHECK(reverse_sigma(s, 10, SigmaKind::BetaTilde) < reverse_sigma(s, 10, SigmaKind::Beta));
}

TEST_CASE("full chain with a zero denoiser telescopes in closed form") {
    const VarianceSchedule s = make_schedule(30, 1e-3, 0.02);
    const DenoiserConfig cfg{.bands = 1, .layers = 1, .hidden = 4, .embed_dim = 4,
                             .t_steps = 30, .beta_1 = 1e-3, .beta_t_final = 0.02,
                             .dropout = 0.0};
    const DenoiserParams zero_net(cfg); // all weights zero => eps_pred == 0

    RngStream rng(36);
    const auto [x0, snaps] = generate_spectra(zero_net, 5, s, rng, {30});

    // Recover the initial draw from the checkpoint and telescope it down.
    const SpectrumBatch& x_top = snaps.at(30);
    double scale = 1.0;
    for (int t = 1; t <= 30; ++t) scale /= std::sqrt(s.alpha_at(t));

    // With eps_pred == 0 the chain is x_{t-1} = x_t/sqrt(alpha_t) + sigma_t*noise;
    // rerun with the same seed and strip the noise terms to isolate the product.
    RngStream rng2(36);
    const auto [x0_b, snaps_b] = generate_spectra(zero_net, 5, s, rng2, {30});
    CHECK(x0.data == x0_b.data);

    // Mean path: a noise-free chain equals x_T * prod(1/sqrt(alpha_t)).
    SpectrumBatch x = x_top;
    for (int t = 30; t >= 1; --t) {
        const Eigen::MatrixXd zero_mat = Eigen::MatrixXd::Zero(5, 1);
        x = ddpm_step(x, t, zero_mat, zero_mat, s);
    }
    CHECK((x.data - scale * x_top.data).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("generate_spectra checkpoints and determinism") {
    const DenoiserConfig cfg{.bands = 2, .layers = 1, .hidden = 4, .embed_dim = 4,
                             .t_steps = 20, .beta_1 = 1e-3, .beta_t_final = 0.02,
                             .dropout = 0.0};
    RngStream init(37);
    const DenoiserParams net = init_denoiser(cfg, init);
    const VarianceSchedule s = make_schedule(20, 1e-3, 0.02);

    RngStream a(38), b(38);
    const auto [xa, snap_a] = generate_spectra(net, 7, s, a, {1, 10, 20});
    const auto [xb, snap_b] = generate_spectra(net, 7, s, b, {1, 10, 20});
    CHECK(xa.data == xb.data);
    CHECK(snap_a.at(10).data == snap_b.at(10).data);

    // Checkpoint at T is the untouched initial draw.
    RngStream probe(38);
    RngStream draw = probe.split("x_T");
    const Eigen::MatrixXd x_t_expected = gaussian_matrix(draw, 7, 2);
    CHECK(snap_a.at(20).data == x_t_expected);
}
