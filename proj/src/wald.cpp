#include "sdp/wald.hpp"

#include "sdp/error.hpp"

namespace sdp {

std::pair<HyperCube, HyperCube> wald_synthesize(const HyperCube& reference,
                                                const DegradationModel& deg, RngStream& rng) {
    deg.validate();
    require(reference.bands == deg.srf.cols(), "shape_mismatch",
            "wald_synthesize: reference bands must match srf input dimension");
    require(reference.height % deg.factor == 0 && reference.width % deg.factor == 0,
            "bad_argument", "wald_synthesize: dims must be divisible by the factor");

    RngStream rng_hsi = rng.split("hsi_noise");
    RngStream rng_msi = rng.split("msi_noise");

    HyperCube lr = downsample(blur(reference, deg.psf), deg.factor);
    lr = add_awgn(lr, deg.hsi_snr_db, rng_hsi);

    HyperCube msi = apply_srf(reference, deg.srf);
    msi = add_awgn(msi, deg.msi_snr_db, rng_msi);

    return {std::move(lr), std::move(msi)};
}

} // namespace sdp
