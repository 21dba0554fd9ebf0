#ifndef SDP_METRICS_HPP
#define SDP_METRICS_HPP

#include <utility>
#include <vector>

#include "sdp/cube.hpp"
#include "sdp/denoiser.hpp"
#include "sdp/diffusion.hpp"
#include "sdp/rng.hpp"
#include "sdp/schedule.hpp"

namespace sdp {

struct MetricsReport {
    double psnr_db = 0.0;
    double sam_deg = 0.0;
    double rmse = 0.0;
    double ergas = 0.0;
    double uiqi = 0.0;
    std::vector<double> per_band_psnr;
    std::vector<double> per_pixel_sam; // pixel order; sort for error curves
};

// Wang-Bovik Q index between two planes, averaged over non-degenerate
// win x win windows tiled at stride win (clamped to the image size).
double q_index_windowed(const double* a, const double* b, int height, int width, int win = 32);

// PSNR (peak 1, mean over bands), SAM (degrees, mean over non-zero pixels),
// global RMSE, ERGAS at the given resolution ratio, and windowed UIQI.
MetricsReport full_reference(const HyperCube& ref, const HyperCube& est, int ratio);

// Frechet distance between Gaussian fits of the two spectrum sets, in raw
// band space with 1e-6-regularized covariances.
double fid_spectra(const SpectrumBatch& real, const SpectrumBatch& gen);

// FID of the partially denoised batch at each checkpoint level against the
// real set; returned in ascending t.
std::vector<std::pair<int, double>> fid_curve(const DenoiserParams& denoiser,
                                              const VarianceSchedule& sched,
                                              const SpectrumBatch& real,
                                              const std::vector<int>& checkpoints, int n,
                                              RngStream& rng);

} // namespace sdp

#endif
