// Command-line pipeline: synthesize observations, train the spectral
// denoiser, sample/score spectra, fuse, and evaluate.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sdp/cube.hpp"
#include "sdp/degradation.hpp"
#include "sdp/denoiser.hpp"
#include "sdp/diffusion.hpp"
#include "sdp/error.hpp"
#include "sdp/fusion.hpp"
#include "sdp/io.hpp"
#include "sdp/manifest.hpp"
#include "sdp/metrics.hpp"
#include "sdp/noref.hpp"
#include "sdp/rng.hpp"
#include "sdp/schedule.hpp"
#include "sdp/threads.hpp"
#include "sdp/toy.hpp"
#include "sdp/train.hpp"
#include "sdp/wald.hpp"

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

std::string num(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

struct Timer {
    Clock::time_point start = Clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    }
};

struct PsfArgs {
    std::string csv;
    int size = 15;
    double sigma = 3.40;

    Eigen::MatrixXd resolve() const {
        if (!csv.empty()) return sdp::load_matrix_csv(csv);
        return sdp::gaussian_kernel(size, sigma);
    }
    void add_to(CLI::App* cmd) {
        cmd->add_option("--psf", csv, "PSF kernel as headerless CSV (overrides size/sigma)");
        cmd->add_option("--psf-size", size, "Gaussian PSF size", true);
        cmd->add_option("--psf-sigma", sigma, "Gaussian PSF standard deviation", true);
    }
    void describe(sdp::RunManifest& m) const {
        if (!csv.empty()) {
            m.inputs.emplace_back("psf", csv);
        } else {
            m.params.emplace_back("psf_size", std::to_string(size));
            m.params.emplace_back("psf_sigma", num(sigma));
        }
    }
};

Eigen::MatrixXd resolve_srf(const std::string& csv, int bands) {
    if (!csv.empty()) return sdp::load_matrix_csv(csv);
    return sdp::make_ikonos_like_srf(bands);
}

void write_trace_csv(const std::vector<sdp::FusionTraceRow>& trace, const std::string& path) {
    std::ofstream os(path);
    sdp::require(os.good(), "io", "cannot open " + path);
    os.precision(17);
    os << "t,k,fidelity_loss,prior_loss,total_loss\n";
    for (const auto& row : trace)
        os << row.t << ',' << row.k << ',' << row.fidelity_loss << ',' << row.prior_loss << ','
           << row.total_loss << '\n';
}

void write_train_trace_csv(const std::vector<sdp::TrainStepInfo>& trace,
                           const std::string& path) {
    std::ofstream os(path);
    sdp::require(os.good(), "io", "cannot open " + path);
    os.precision(17);
    os << "step,t,lr,loss\n";
    for (const auto& row : trace)
        os << row.step << ',' << row.t << ',' << row.lr << ',' << row.loss << '\n';
}

int run_synth(const std::string& ref_path, const std::string& out_dir, const PsfArgs& psf_args,
              const std::string& srf_csv, int factor, double snr_hsi, double snr_msi,
              std::uint64_t seed, bool scale_minmax, bool no_split) {
    Timer timer;
    sdp::HyperCube scene = sdp::load_cube(ref_path);
    if (scale_minmax) sdp::scale_to_unit(scene);

    sdp::DegradationModel deg;
    deg.psf = psf_args.resolve();
    deg.factor = factor;
    deg.srf = resolve_srf(srf_csv, scene.bands);
    deg.hsi_snr_db = snr_hsi;
    deg.msi_snr_db = snr_msi;
    deg.validate();

    sdp::HyperCube reference = scene;
    sdp::SpectrumBatch clean;
    if (no_split) {
        clean = sdp::cube_to_spectra(scene);
    } else {
        auto [top, bottom] = sdp::split_top_bottom(scene);
        clean = sdp::cube_to_spectra(top);
        reference = std::move(bottom);
    }

    sdp::RngStream rng(seed);
    const auto [lr_hsi, hr_msi] = sdp::wald_synthesize(reference, deg, rng);

    fs::create_directories(out_dir);
    const std::string lr_path = (fs::path(out_dir) / "lr_hsi.hsc").string();
    const std::string msi_path = (fs::path(out_dir) / "hr_msi.hsc").string();
    const std::string spectra_path = (fs::path(out_dir) / "clean_spectra.csv").string();
    const std::string ref_out = (fs::path(out_dir) / "reference.hsc").string();
    sdp::save_cube(lr_hsi, lr_path);
    sdp::save_cube(hr_msi, msi_path);
    sdp::save_spectra_csv(clean, spectra_path);
    sdp::save_cube(reference, ref_out);

    sdp::RunManifest m;
    m.command = "synth";
    m.seed = seed;
    m.params = {{"factor", std::to_string(factor)},
                {"snr_hsi_db", num(snr_hsi)},
                {"snr_msi_db", num(snr_msi)},
                {"scale_minmax", scale_minmax ? "true" : "false"},
                {"split", no_split ? "none" : "top_bottom"}};
    psf_args.describe(m);
    if (!srf_csv.empty())
        m.inputs.emplace_back("srf", srf_csv);
    else
        m.params.emplace_back("srf", "ikonos_like_builtin");
    m.inputs.emplace_back("reference_scene", ref_path);
    m.outputs = {{"lr_hsi", lr_path},
                 {"hr_msi", msi_path},
                 {"clean_spectra", spectra_path},
                 {"reference", ref_out}};
    m.duration_ms = timer.ms();
    sdp::write_manifest(m, (fs::path(out_dir) / "synth.manifest").string());
    std::cout << "synth: wrote " << lr_path << ", " << msi_path << ", " << spectra_path << "\n";
    return 0;
}

int run_train(const std::string& spectra_path, const std::string& out_dir, int t_steps,
              double beta1, double beta_t, int layers, int hidden, int embed_dim,
              double dropout, const std::string& activation, const std::string& skip,
              int batch, long steps, double lr, bool no_schedule, bool replacement,
              std::uint64_t seed, const std::string& resume) {
    Timer timer;
    const sdp::SpectrumBatch spectra = sdp::load_spectra_csv(spectra_path);

    sdp::TrainConfig cfg;
    cfg.batch_size = batch;
    cfg.steps = steps;
    cfg.base_lr = lr;
    cfg.scheduled_lr = !no_schedule;
    cfg.sample_with_replacement = replacement;

    sdp::RngStream rng(seed);
    sdp::TrainResult result;
    if (!resume.empty()) {
        sdp::DenoiserParams params = sdp::load_denoiser(resume);
        const sdp::VarianceSchedule sched =
            sdp::make_schedule(params.config().t_steps, params.config().beta_1,
                               params.config().beta_t_final);
        result = sdp::resume_denoiser(std::move(params), spectra, cfg, sched, rng);
    } else {
        sdp::DenoiserConfig net;
        net.bands = spectra.bands;
        net.layers = layers;
        net.hidden = hidden;
        net.embed_dim = embed_dim;
        net.t_steps = t_steps;
        net.beta_1 = beta1;
        net.beta_t_final = beta_t;
        net.dropout = dropout;
        net.activation = sdp::activation_from_string(activation);
        net.skip = sdp::skip_mode_from_string(skip);
        const sdp::VarianceSchedule sched = sdp::make_schedule(t_steps, beta1, beta_t);
        result = sdp::train_denoiser(spectra, net, cfg, sched, rng);
    }

    fs::create_directories(out_dir);
    const std::string ckpt_path = (fs::path(out_dir) / "denoiser.sdm").string();
    const std::string trace_path = (fs::path(out_dir) / "train_trace.csv").string();
    sdp::save_denoiser(result.params, ckpt_path);
    write_train_trace_csv(result.trace, trace_path);

    sdp::RunManifest m;
    m.command = "train";
    m.seed = seed;
    m.params = {{"t_steps", std::to_string(result.params.config().t_steps)},
                {"beta_1", num(result.params.config().beta_1)},
                {"beta_T", num(result.params.config().beta_t_final)},
                {"layers", std::to_string(result.params.config().layers)},
                {"hidden", std::to_string(result.params.config().hidden)},
                {"embed_dim", std::to_string(result.params.config().embed_dim)},
                {"dropout", num(result.params.config().dropout)},
                {"activation", sdp::to_string(result.params.config().activation)},
                {"skip", sdp::to_string(result.params.config().skip)},
                {"batch_size", std::to_string(batch)},
                {"steps", std::to_string(steps)},
                {"base_lr", num(lr)},
                {"lr_schedule", no_schedule ? "constant" : "scaled_decay"},
                {"steps_trained_total", std::to_string(result.params.steps_trained)}};
    m.inputs.emplace_back("spectra", spectra_path);
    if (!resume.empty()) m.inputs.emplace_back("resume_checkpoint", resume);
    m.outputs = {{"checkpoint", ckpt_path}, {"train_trace", trace_path}};
    m.duration_ms = timer.ms();
    sdp::write_manifest(m, (fs::path(out_dir) / "train.manifest").string());

    const double first = result.trace.front().loss;
    const double last = result.trace.back().loss;
    std::cout << "train: " << result.trace.size() << " steps, loss " << first << " -> " << last
              << ", wrote " << ckpt_path << "\n";
    return 0;
}

int run_sample(const std::string& ckpt, const std::string& out_dir, int n,
               const std::vector<int>& checkpoints, std::uint64_t seed) {
    Timer timer;
    const sdp::DenoiserParams params = sdp::load_denoiser(ckpt);
    const sdp::VarianceSchedule sched = sdp::make_schedule(
        params.config().t_steps, params.config().beta_1, params.config().beta_t_final);

    sdp::RngStream rng(seed);
    const auto [batch, snaps] = sdp::generate_spectra(params, n, sched, rng, checkpoints);

    fs::create_directories(out_dir);
    const std::string samples_path = (fs::path(out_dir) / "samples.csv").string();
    sdp::save_spectra_csv(batch, samples_path);

    sdp::RunManifest m;
    m.command = "sample";
    m.seed = seed;
    m.params = {{"n", std::to_string(n)}};
    m.inputs = {{"checkpoint", ckpt}};
    m.outputs = {{"samples", samples_path}};
    for (const auto& [t, snap] : snaps) {
        const std::string p =
            (fs::path(out_dir) / ("sample_t" + std::to_string(t) + ".csv")).string();
        sdp::save_spectra_csv(snap, p);
        m.outputs.emplace_back("sample_t" + std::to_string(t), p);
    }
    m.duration_ms = timer.ms();
    sdp::write_manifest(m, (fs::path(out_dir) / "sample.manifest").string());
    std::cout << "sample: wrote " << samples_path << " (+" << snaps.size()
              << " checkpoints)\n";
    return 0;
}

int run_fid_curve(const std::string& ckpt, const std::string& real_path,
                  const std::string& out_dir, std::vector<int> checkpoints, int n,
                  std::uint64_t seed) {
    Timer timer;
    const sdp::DenoiserParams params = sdp::load_denoiser(ckpt);
    const sdp::VarianceSchedule sched = sdp::make_schedule(
        params.config().t_steps, params.config().beta_1, params.config().beta_t_final);
    const sdp::SpectrumBatch real = sdp::load_spectra_csv(real_path);

    if (checkpoints.empty()) {
        // Default: ten levels spread over the schedule.
        for (int i = 1; i <= 10; ++i)
            checkpoints.push_back(std::max(1, sched.t_steps * i / 10));
    }

    sdp::RngStream rng(seed);
    const auto curve = sdp::fid_curve(params, sched, real, checkpoints, n, rng);

    fs::create_directories(out_dir);
    const std::string curve_path = (fs::path(out_dir) / "fid_curve.csv").string();
    {
        std::ofstream os(curve_path);
        sdp::require(os.good(), "io", "cannot open " + curve_path);
        os.precision(17);
        os << "t,fid\n";
        for (const auto& [t, fid] : curve) os << t << ',' << fid << '\n';
    }

    sdp::RunManifest m;
    m.command = "fid-curve";
    m.seed = seed;
    m.params = {{"n", std::to_string(n)}};
    m.inputs = {{"checkpoint", ckpt}, {"real_spectra", real_path}};
    m.outputs = {{"fid_curve", curve_path}};
    m.duration_ms = timer.ms();
    sdp::write_manifest(m, (fs::path(out_dir) / "fid-curve.manifest").string());
    std::cout << "fid-curve: wrote " << curve_path << "\n";
    return 0;
}

int run_fuse(const std::string& lr_path, const std::string& msi_path, const std::string& ckpt,
             const std::string& out_dir, const PsfArgs& psf_args, const std::string& srf_csv,
             int factor, double lambda, double gamma, int k_inner, double mu, bool mu_explicit,
             int t_steps, std::uint64_t seed, const std::string& reduction, bool reset_adam,
             const std::string& profile) {
    Timer timer;
    const sdp::HyperCube lr_hsi = sdp::load_cube(lr_path);
    const sdp::HyperCube hr_msi = sdp::load_cube(msi_path);

    sdp::FusionConfig cfg;
    cfg.lambda = lambda;
    cfg.gamma = gamma;
    cfg.k_inner = k_inner;
    cfg.mu = mu;
    cfg.seed = seed;
    cfg.reduction = reduction == "mean" ? sdp::PriorReduction::MeanPixels
                                        : sdp::PriorReduction::SumPixels;
    cfg.reset_adam_per_t = reset_adam;
    // Profiles carry the per-dataset learning rates; an explicit --mu wins.
    if (!mu_explicit && profile == "dc") cfg.mu = 0.0025;

    sdp::DegradationModel deg;
    deg.psf = psf_args.resolve();
    deg.factor = factor;
    deg.srf = resolve_srf(srf_csv, lr_hsi.bands);
    deg.validate();

    sdp::FusionResult result;
    sdp::DenoiserParams params;
    if (cfg.gamma > 0.0) {
        sdp::require(!ckpt.empty(), "bad_argument",
                     "fuse: gamma > 0 requires --ckpt with a trained denoiser");
        params = sdp::load_denoiser(ckpt);
        const sdp::VarianceSchedule sched = sdp::make_schedule(
            params.config().t_steps, params.config().beta_1, params.config().beta_t_final);
        result = sdp::sdp_fuse(lr_hsi, hr_msi, deg, &params, sched, cfg);
    } else {
        const sdp::VarianceSchedule sched = sdp::make_schedule(t_steps, 1e-4, 0.02);
        result = sdp::sdp_fuse(lr_hsi, hr_msi, deg, nullptr, sched, cfg);
    }

    fs::create_directories(out_dir);
    const std::string fused_path = (fs::path(out_dir) / "fused.hsc").string();
    const std::string trace_path = (fs::path(out_dir) / "fuse_trace.csv").string();
    sdp::save_cube(result.estimate, fused_path);
    write_trace_csv(result.trace, trace_path);

    sdp::RunManifest m;
    m.command = "fuse";
    m.seed = seed;
    m.params = {{"lambda", num(lambda)},
                {"gamma", num(gamma)},
                {"k", std::to_string(k_inner)},
                {"mu", num(cfg.mu)},
                {"factor", std::to_string(factor)},
                {"reduction", reduction},
                {"reset_adam_per_t", reset_adam ? "true" : "false"},
                {"profile", profile.empty() ? "none" : profile}};
    if (cfg.gamma == 0.0) m.params.emplace_back("t_steps", std::to_string(t_steps));
    psf_args.describe(m);
    if (!srf_csv.empty())
        m.inputs.emplace_back("srf", srf_csv);
    else
        m.params.emplace_back("srf", "ikonos_like_builtin");
    m.inputs.emplace_back("lr_hsi", lr_path);
    m.inputs.emplace_back("hr_msi", msi_path);
    if (!ckpt.empty()) m.inputs.emplace_back("checkpoint", ckpt);
    m.outputs = {{"fused", fused_path}, {"fuse_trace", trace_path}};
    m.duration_ms = timer.ms();
    sdp::write_manifest(m, (fs::path(out_dir) / "fuse.manifest").string());

    std::cout << "fuse: " << result.trace.size() << " steps, fidelity "
              << result.trace.front().fidelity_loss << " -> "
              << result.trace.back().fidelity_loss << ", wrote " << fused_path << "\n";
    return 0;
}

int run_eval(const std::string& ref_path, const std::string& est_path, int ratio,
             const std::string& out_dir, bool no_ref, const std::string& lr_path,
             const std::string& msi_path, const PsfArgs& psf_args, const std::string& srf_csv,
             int factor) {
    Timer timer;
    fs::create_directories(out_dir);
    sdp::RunManifest m;
    m.duration_ms = 0;

    if (no_ref) {
        const sdp::HyperCube fused = sdp::load_cube(est_path);
        const sdp::HyperCube lr = sdp::load_cube(lr_path);
        const sdp::HyperCube msi = sdp::load_cube(msi_path);
        sdp::DegradationModel deg;
        deg.psf = psf_args.resolve();
        deg.factor = factor;
        deg.srf = resolve_srf(srf_csv, fused.bands);
        const sdp::NoRefReport rep = sdp::no_reference(fused, lr, msi, deg);

        const std::string report_path = (fs::path(out_dir) / "noref_report.txt").string();
        {
            std::ofstream os(report_path);
            os.precision(17);
            os << "d_lambda = " << rep.d_lambda << "\n"
               << "d_s = " << rep.d_s << "\n"
               << "qnr = " << rep.qnr << "\n";
        }
        std::cout << "d_lambda = " << rep.d_lambda << "\nd_s = " << rep.d_s
                  << "\nqnr = " << rep.qnr << "\n";

        m.command = "eval";
        m.params = {{"mode", "no_reference"}, {"factor", std::to_string(factor)}};
        psf_args.describe(m);
        m.inputs = {{"est", est_path}, {"lr_hsi", lr_path}, {"hr_msi", msi_path}};
        if (!srf_csv.empty()) m.inputs.emplace_back("srf", srf_csv);
        m.outputs = {{"report", report_path}};
        m.duration_ms = timer.ms();
        sdp::write_manifest(m, (fs::path(out_dir) / "eval.manifest").string());
        return 0;
    }

    const sdp::HyperCube ref = sdp::load_cube(ref_path);
    const sdp::HyperCube est = sdp::load_cube(est_path);
    const sdp::MetricsReport rep = sdp::full_reference(ref, est, ratio);

    const std::string report_path = (fs::path(out_dir) / "report.txt").string();
    const std::string band_path = (fs::path(out_dir) / "psnr_band.csv").string();
    const std::string sam_path = (fs::path(out_dir) / "sam_sorted.csv").string();
    {
        std::ofstream os(report_path);
        os.precision(17);
        os << "psnr_db = " << rep.psnr_db << "\n"
           << "sam_deg = " << rep.sam_deg << "\n"
           << "rmse = " << rep.rmse << "\n"
           << "ergas = " << rep.ergas << "\n"
           << "uiqi = " << rep.uiqi << "\n";
        os << "per_band_psnr = ";
        for (std::size_t i = 0; i < rep.per_band_psnr.size(); ++i)
            os << (i ? "," : "") << rep.per_band_psnr[i];
        os << "\nper_pixel_sam = ";
        for (std::size_t i = 0; i < rep.per_pixel_sam.size(); ++i)
            os << (i ? "," : "") << rep.per_pixel_sam[i];
        os << "\n";
    }
    {
        std::ofstream os(band_path);
        os.precision(17);
        os << "band,psnr_db\n";
        for (std::size_t i = 0; i < rep.per_band_psnr.size(); ++i)
            os << i << ',' << rep.per_band_psnr[i] << '\n';
    }
    {
        std::vector<double> sorted = rep.per_pixel_sam;
        std::sort(sorted.begin(), sorted.end());
        std::ofstream os(sam_path);
        os.precision(17);
        os << "rank,sam_deg\n";
        for (std::size_t i = 0; i < sorted.size(); ++i) os << i << ',' << sorted[i] << '\n';
    }

    std::cout << "psnr_db = " << rep.psnr_db << "\nsam_deg = " << rep.sam_deg
              << "\nrmse = " << rep.rmse << "\nergas = " << rep.ergas
              << "\nuiqi = " << rep.uiqi << "\n";

    m.command = "eval";
    m.params = {{"mode", "full_reference"}, {"ratio", std::to_string(ratio)}};
    m.inputs = {{"ref", ref_path}, {"est", est_path}};
    m.outputs = {{"report", report_path},
                 {"psnr_band", band_path},
                 {"sam_sorted", sam_path}};
    m.duration_ms = timer.ms();
    sdp::write_manifest(m, (fs::path(out_dir) / "eval.manifest").string());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral-diffusion-prior hyperspectral fusion pipeline"};
    app.require_subcommand(1);

    int threads = 1;
    app.add_option("--threads", threads, "Worker threads for band-parallel operators", true);

    // synth -------------------------------------------------------------
    auto* synth = app.add_subcommand("synth", "Degrade a reference cube into LR-HSI + HR-MSI");
    std::string sy_ref, sy_out, sy_srf;
    PsfArgs sy_psf;
    int sy_factor = 8;
    double sy_snr_hsi = 20.0, sy_snr_msi = 30.0;
    std::uint64_t sy_seed = 0;
    bool sy_scale = false, sy_nosplit = false;
    synth->add_option("--ref", sy_ref, "Reference scene (.hsc)")->required();
    synth->add_option("--out-dir", sy_out, "Output directory")->required();
    sy_psf.add_to(synth);
    synth->add_option("--srf", sy_srf, "SRF as headerless CSV (default: built-in IKONOS-like)");
    synth->add_option("--factor", sy_factor, "Spatial downsampling factor", true);
    synth->add_option("--snr-hsi", sy_snr_hsi, "LR-HSI noise level in dB (inf disables)", true);
    synth->add_option("--snr-msi", sy_snr_msi, "HR-MSI noise level in dB (inf disables)", true);
    synth->add_option("--seed", sy_seed, "RNG seed", true);
    synth->add_flag("--scale-minmax", sy_scale, "Min-max rescale the scene to [0,1] first");
    synth->add_flag("--no-split", sy_nosplit,
                    "Use the whole scene as reference (skip the top/bottom split)");

    // train -------------------------------------------------------------
    auto* train = app.add_subcommand("train", "Train the spectral diffusion denoiser");
    std::string tr_spectra, tr_out, tr_resume;
    int tr_t = 1000, tr_layers = 4, tr_hidden = 512, tr_embed = 64, tr_batch = 512;
    long tr_steps = 30000;
    double tr_beta1 = 1e-4, tr_betaT = 0.02, tr_dropout = 0.001, tr_lr = 0.01;
    std::string tr_act = "silu", tr_skip = "layer";
    bool tr_nosched = false, tr_repl = false;
    std::uint64_t tr_seed = 0;
    train->add_option("--spectra", tr_spectra, "Clean spectra CSV")->required();
    train->add_option("--out-dir", tr_out, "Output directory")->required();
    train->add_option("--t-steps", tr_t, "Diffusion steps T", true);
    train->add_option("--beta1", tr_beta1, "Schedule start beta_1", true);
    train->add_option("--betaT", tr_betaT, "Schedule end beta_T", true);
    train->add_option("--layers", tr_layers, "Hidden MLP layers L", true);
    train->add_option("--hidden", tr_hidden, "Hidden width N_out", true);
    train->add_option("--embed-dim", tr_embed, "Time embedding dimension", true);
    train->add_option("--dropout", tr_dropout, "Dropout rate", true);
    train->add_option("--activation", tr_act, "Hidden nonlinearity: silu|relu", true);
    train->add_option("--skip", tr_skip, "Skip concat source: layer|input", true);
    train->add_option("--batch", tr_batch, "Batch size", true);
    train->add_option("--steps", tr_steps, "Optimizer steps", true);
    train->add_option("--lr", tr_lr, "Base learning rate", true);
    train->add_flag("--no-lr-schedule", tr_nosched, "Use a constant learning rate");
    train->add_flag("--replacement", tr_repl, "Sample batches with replacement");
    train->add_option("--seed", tr_seed, "RNG seed", true);
    train->add_option("--resume", tr_resume, "Continue from an existing checkpoint");

    // sample ------------------------------------------------------------
    auto* sample = app.add_subcommand("sample", "Generate spectra from a trained denoiser");
    std::string sa_ckpt, sa_out;
    int sa_n = 512;
    std::vector<int> sa_checkpoints;
    std::uint64_t sa_seed = 0;
    sample->add_option("--ckpt", sa_ckpt, "Denoiser checkpoint (.sdm)")->required();
    sample->add_option("--out-dir", sa_out, "Output directory")->required();
    sample->add_option("--n", sa_n, "Number of spectra", true);
    sample->add_option("--checkpoints", sa_checkpoints, "Comma-separated t levels to dump")
        ->delimiter(',');
    sample->add_option("--seed", sa_seed, "RNG seed", true);

    // fid-curve ---------------------------------------------------------
    auto* fidc = app.add_subcommand("fid-curve", "FID of partial generations vs real spectra");
    std::string fc_ckpt, fc_real, fc_out;
    std::vector<int> fc_checkpoints;
    int fc_n = 512;
    std::uint64_t fc_seed = 0;
    fidc->add_option("--ckpt", fc_ckpt, "Denoiser checkpoint (.sdm)")->required();
    fidc->add_option("--real", fc_real, "Real spectra CSV")->required();
    fidc->add_option("--out-dir", fc_out, "Output directory")->required();
    fidc->add_option("--checkpoints", fc_checkpoints, "Comma-separated t levels")
        ->delimiter(',');
    fidc->add_option("--n", fc_n, "Number of generated spectra", true);
    fidc->add_option("--seed", fc_seed, "RNG seed", true);

    // fuse ----------------------------------------------------------------
    auto* fuse = app.add_subcommand("fuse", "Fuse LR-HSI + HR-MSI into an HR-HSI");
    std::string fu_lr, fu_msi, fu_ckpt, fu_out, fu_srf, fu_reduction = "sum", fu_profile;
    PsfArgs fu_psf;
    int fu_factor = 8, fu_k = 3, fu_t = 1000;
    double fu_lambda = 0.1, fu_gamma = 1e-3, fu_mu = 0.001;
    std::uint64_t fu_seed = 0;
    bool fu_reset = false;
    fuse->add_option("--lr-hsi", fu_lr, "LR-HSI observation (.hsc)")->required();
    fuse->add_option("--hr-msi", fu_msi, "HR-MSI observation (.hsc)")->required();
    fuse->add_option("--out-dir", fu_out, "Output directory")->required();
    fuse->add_option("--ckpt", fu_ckpt, "Denoiser checkpoint (needed when gamma > 0)");
    fu_psf.add_to(fuse);
    fuse->add_option("--srf", fu_srf, "SRF CSV (default: built-in IKONOS-like)");
    fuse->add_option("--factor", fu_factor, "Spatial downsampling factor", true);
    fuse->add_option("--lambda", fu_lambda, "Fidelity balance parameter", true);
    fuse->add_option("--gamma", fu_gamma, "Prior weight (0 runs the baseline)", true);
    fuse->add_option("--k", fu_k, "Inner gradient steps per t-subproblem", true);
    auto* fu_mu_opt = fuse->add_option("--mu", fu_mu, "Adam learning rate", true);
    fuse->add_option("--t-steps", fu_t, "Subproblem count for gamma = 0 (else from ckpt)",
                     true);
    fuse->add_option("--seed", fu_seed, "RNG seed", true);
    fuse->add_option("--reduction", fu_reduction, "Prior pixel reduction: sum|mean", true)
        ->check(CLI::IsMember({"sum", "mean"}));
    fuse->add_flag("--reset-adam", fu_reset, "Reset Adam moments at each t-subproblem");
    fuse->add_option("--profile", fu_profile, "Parameter profile: paviau|ksc|dc|toy")
        ->check(CLI::IsMember({"paviau", "ksc", "dc", "toy"}));

    // eval ----------------------------------------------------------------
    auto* eval = app.add_subcommand("eval", "Score a fused cube");
    std::string ev_ref, ev_est, ev_out, ev_lr, ev_msi, ev_srf;
    PsfArgs ev_psf;
    int ev_ratio = 8, ev_factor = 8;
    bool ev_noref = false;
    eval->add_option("--est", ev_est, "Estimated cube (.hsc)")->required();
    eval->add_option("--out-dir", ev_out, "Output directory")->required();
    eval->add_option("--ref", ev_ref, "Reference cube (full-reference mode)");
    eval->add_option("--ratio", ev_ratio, "Resolution ratio for ERGAS", true);
    eval->add_flag("--no-ref", ev_noref, "No-reference (QNR) mode");
    eval->add_option("--lr-hsi", ev_lr, "LR-HSI observation (no-ref mode)");
    eval->add_option("--hr-msi", ev_msi, "HR-MSI observation (no-ref mode)");
    ev_psf.add_to(eval);
    eval->add_option("--srf", ev_srf, "SRF CSV (no-ref mode)");
    eval->add_option("--factor", ev_factor, "Downsampling factor (no-ref mode)", true);

    CLI11_PARSE(app, argc, argv);
    sdp::set_threads(threads);

    try {
        if (synth->parsed())
            return run_synth(sy_ref, sy_out, sy_psf, sy_srf, sy_factor, sy_snr_hsi, sy_snr_msi,
                             sy_seed, sy_scale, sy_nosplit);
        if (train->parsed())
            return run_train(tr_spectra, tr_out, tr_t, tr_beta1, tr_betaT, tr_layers, tr_hidden,
                             tr_embed, tr_dropout, tr_act, tr_skip, tr_batch, tr_steps, tr_lr,
                             tr_nosched, tr_repl, tr_seed, tr_resume);
        if (sample->parsed()) return run_sample(sa_ckpt, sa_out, sa_n, sa_checkpoints, sa_seed);
        if (fidc->parsed())
            return run_fid_curve(fc_ckpt, fc_real, fc_out, fc_checkpoints, fc_n, fc_seed);
        if (fuse->parsed())
            return run_fuse(fu_lr, fu_msi, fu_ckpt, fu_out, fu_psf, fu_srf, fu_factor, fu_lambda,
                            fu_gamma, fu_k, fu_mu, fu_mu_opt->count() > 0, fu_t, fu_seed,
                            fu_reduction, fu_reset, fu_profile);
        if (eval->parsed())
            return run_eval(ev_ref, ev_est, ev_ratio, ev_out, ev_noref, ev_lr, ev_msi, ev_psf,
                            ev_srf, ev_factor);
    } catch (const sdp::Error& e) {
        std::cerr << "error [" << e.kind() << "]: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
