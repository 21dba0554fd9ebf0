#ifndef SDP_NOREF_HPP
#define SDP_NOREF_HPP

#include "sdp/cube.hpp"
#include "sdp/degradation.hpp"

namespace sdp {

struct NoRefReport {
    double d_lambda = 0.0;
    double d_s = 0.0;
    double qnr = 0.0;
};

// QNR protocol with exponents p = q = 1. D_lambda compares inter-band Q
// indices of the fused cube against those of the LR-HSI; D_s compares
// band-vs-MSI Q indices at full scale against the same indices at low scale,
// with the MSI degraded through deg's blur + decimation for the latter.
NoRefReport no_reference(const HyperCube& fused, const HyperCube& lr_hsi,
                         const HyperCube& hr_msi, const DegradationModel& deg);

} // namespace sdp

#endif
