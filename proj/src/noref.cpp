#include "sdp/noref.hpp"

#include <cmath>

#include "sdp/error.hpp"
#include "sdp/metrics.hpp"

namespace sdp {

NoRefReport no_reference(const HyperCube& fused, const HyperCube& lr_hsi,
                         const HyperCube& hr_msi, const DegradationModel& deg) {
    deg.validate();
    require(fused.bands == lr_hsi.bands, "shape_mismatch", "no_reference: band counts differ");
    require(fused.height == lr_hsi.height * deg.factor &&
                fused.width == lr_hsi.width * deg.factor,
            "shape_mismatch", "no_reference: fused/LR grid mismatch");
    require(hr_msi.height == fused.height && hr_msi.width == fused.width, "shape_mismatch",
            "no_reference: MSI grid mismatch");
    require(hr_msi.bands == deg.srf.rows(), "shape_mismatch",
            "no_reference: MSI bands do not match the SRF");

    const int nb = fused.bands;
    const int mb = hr_msi.bands;
    const std::size_t np_hr = fused.pixels();
    const std::size_t np_lr = lr_hsi.pixels();

    auto hr_plane = [&](const HyperCube& c, int b) { return c.data.data() + b * np_hr; };
    auto lr_plane = [&](const HyperCube& c, int b) { return c.data.data() + b * np_lr; };

    NoRefReport rep;

    // Spectral distortion: inter-band Q structure should survive fusion.
    if (nb > 1) {
        double acc = 0.0;
        for (int i = 0; i < nb; ++i)
            for (int j = 0; j < nb; ++j) {
                if (i == j) continue;
                const double q_f = q_index_windowed(hr_plane(fused, i), hr_plane(fused, j),
                                                    fused.height, fused.width);
                const double q_l = q_index_windowed(lr_plane(lr_hsi, i), lr_plane(lr_hsi, j),
                                                    lr_hsi.height, lr_hsi.width);
                acc += std::abs(q_f - q_l);
            }
        rep.d_lambda = acc / (static_cast<double>(nb) * (nb - 1));
    }

    // Spatial distortion: band-vs-MSI Q at the two scales.
    const HyperCube msi_lr = downsample(blur(hr_msi, deg.psf), deg.factor);
    {
        double acc = 0.0;
        for (int l = 0; l < nb; ++l)
            for (int m = 0; m < mb; ++m) {
                const double q_hr = q_index_windowed(hr_plane(fused, l), hr_plane(hr_msi, m),
                                                     fused.height, fused.width);
                const double q_lr = q_index_windowed(lr_plane(lr_hsi, l), lr_plane(msi_lr, m),
                                                     lr_hsi.height, lr_hsi.width);
                acc += std::abs(q_hr - q_lr);
            }
        rep.d_s = acc / (static_cast<double>(nb) * mb);
    }

    rep.qnr = (1.0 - rep.d_lambda) * (1.0 - rep.d_s);
    return rep;
}

} // namespace sdp
