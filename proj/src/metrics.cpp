#include "sdp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sdp/error.hpp"
#include "sdp/linalg.hpp"

namespace sdp {

double q_index_windowed(const double* a, const double* b, int height, int width, int win) {
    const int w = std::max(1, std::min({win, height, width}));
    double sum = 0.0;
    long count = 0;
    for (int r0 = 0; r0 + w <= height; r0 += w)
        for (int c0 = 0; c0 + w <= width; c0 += w) {
            const long n = static_cast<long>(w) * w;
            if (n < 2) continue;
            double ma = 0.0, mb = 0.0;
            for (int r = r0; r < r0 + w; ++r)
                for (int c = c0; c < c0 + w; ++c) {
                    ma += a[static_cast<std::size_t>(r) * width + c];
                    mb += b[static_cast<std::size_t>(r) * width + c];
                }
            ma /= static_cast<double>(n);
            mb /= static_cast<double>(n);
            double va = 0.0, vb = 0.0, vab = 0.0;
            for (int r = r0; r < r0 + w; ++r)
                for (int c = c0; c < c0 + w; ++c) {
                    const double da = a[static_cast<std::size_t>(r) * width + c] - ma;
                    const double db = b[static_cast<std::size_t>(r) * width + c] - mb;
                    va += da * da;
                    vb += db * db;
                    vab += da * db;
                }
            va /= static_cast<double>(n - 1);
            vb /= static_cast<double>(n - 1);
            vab /= static_cast<double>(n - 1);
            const double denom_v = va + vb;
            const double denom_m = ma * ma + mb * mb;
            if (denom_v == 0.0 || denom_m == 0.0) continue;
            sum += 4.0 * vab * ma * mb / (denom_v * denom_m);
            ++count;
        }
    return count > 0 ? sum / static_cast<double>(count) : 0.0;
}

MetricsReport full_reference(const HyperCube& ref, const HyperCube& est, int ratio) {
    require(ref.same_shape(est), "shape_mismatch", "full_reference: cubes differ in shape");
    require(ratio >= 1, "bad_argument", "full_reference: ratio must be >= 1");

    const int nb = ref.bands;
    const std::size_t np = ref.pixels();
    MetricsReport rep;
    rep.per_band_psnr.resize(static_cast<std::size_t>(nb));

    double mse_total = 0.0;
    double ergas_acc = 0.0;
    double uiqi_acc = 0.0;
    for (int b = 0; b < nb; ++b) {
        const double* pr = ref.data.data() + static_cast<std::size_t>(b) * np;
        const double* pe = est.data.data() + static_cast<std::size_t>(b) * np;
        double mse = 0.0, mean_ref = 0.0;
        for (std::size_t i = 0; i < np; ++i) {
            const double d = pr[i] - pe[i];
            mse += d * d;
            mean_ref += pr[i];
        }
        mse /= static_cast<double>(np);
        mean_ref /= static_cast<double>(np);
        mse_total += mse;
        rep.per_band_psnr[static_cast<std::size_t>(b)] =
            mse == 0.0 ? std::numeric_limits<double>::infinity() : 10.0 * std::log10(1.0 / mse);
        ergas_acc += mean_ref == 0.0 ? std::numeric_limits<double>::infinity()
                                     : mse / (mean_ref * mean_ref);
        uiqi_acc += q_index_windowed(pr, pe, ref.height, ref.width);
    }
    mse_total /= static_cast<double>(nb);
    rep.rmse = std::sqrt(mse_total);
    rep.psnr_db = 0.0;
    for (double v : rep.per_band_psnr) rep.psnr_db += v;
    rep.psnr_db /= static_cast<double>(nb);
    rep.ergas = 100.0 / static_cast<double>(ratio) * std::sqrt(ergas_acc / nb);
    rep.uiqi = uiqi_acc / nb;

    // SAM over pixels; zero spectra on either side are skipped.
    rep.per_pixel_sam.reserve(np);
    double sam_acc = 0.0;
    long sam_count = 0;
    for (std::size_t i = 0; i < np; ++i) {
        double dot = 0.0, na = 0.0, nb2 = 0.0;
        for (int b = 0; b < nb; ++b) {
            const double a = ref.data[static_cast<std::size_t>(b) * np + i];
            const double e = est.data[static_cast<std::size_t>(b) * np + i];
            dot += a * e;
            na += a * a;
            nb2 += e * e;
        }
        if (na == 0.0 || nb2 == 0.0) continue;
        const double cosang = std::clamp(dot / (std::sqrt(na) * std::sqrt(nb2)), -1.0, 1.0);
        const double deg = std::acos(cosang) * 180.0 / std::numbers::pi;
        rep.per_pixel_sam.push_back(deg);
        sam_acc += deg;
        ++sam_count;
    }
    rep.sam_deg = sam_count > 0 ? sam_acc / static_cast<double>(sam_count) : 0.0;
    return rep;
}

double fid_spectra(const SpectrumBatch& real, const SpectrumBatch& gen) {
    require(real.count >= 2 && gen.count >= 2, "degenerate_input",
            "fid_spectra: need at least two spectra per set");
    require(real.bands == gen.bands, "shape_mismatch", "fid_spectra: band counts differ");

    const auto fit = [](const SpectrumBatch& s) {
        const Eigen::VectorXd mu = s.data.colwise().mean();
        Eigen::MatrixXd centered = s.data.rowwise() - mu.transpose();
        Eigen::MatrixXd cov =
            centered.transpose() * centered / static_cast<double>(s.count - 1);
        cov += 1e-6 * Eigen::MatrixXd::Identity(s.bands, s.bands);
        return std::make_pair(mu, cov);
    };
    const auto [mu1, cov1] = fit(real);
    const auto [mu2, cov2] = fit(gen);

    const Eigen::MatrixXd s1 = psd_sqrt(cov1);
    Eigen::MatrixXd inner = s1 * cov2 * s1;
    inner = 0.5 * (inner + inner.transpose().eval());
    const Eigen::MatrixXd cross = psd_sqrt(inner);

    return (mu1 - mu2).squaredNorm() + cov1.trace() + cov2.trace() - 2.0 * cross.trace();
}

std::vector<std::pair<int, double>> fid_curve(const DenoiserParams& denoiser,
                                              const VarianceSchedule& sched,
                                              const SpectrumBatch& real,
                                              const std::vector<int>& checkpoints, int n,
                                              RngStream& rng) {
    auto [final_batch, snaps] = generate_spectra(denoiser, n, sched, rng, checkpoints);
    (void)final_batch;
    std::vector<std::pair<int, double>> curve;
    curve.reserve(snaps.size());
    for (const auto& [t, batch] : snaps) curve.emplace_back(t, fid_spectra(real, batch));
    return curve;
}

} // namespace sdp
