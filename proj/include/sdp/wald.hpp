#ifndef SDP_WALD_HPP
#define SDP_WALD_HPP

#include <utility>

#include "sdp/cube.hpp"
#include "sdp/degradation.hpp"
#include "sdp/rng.hpp"

namespace sdp {

// Wald's protocol: degrade a reference cube into the two observations.
// lr_hsi = decimate(blur(reference)) + AWGN at the HSI SNR;
// hr_msi = srf * reference + AWGN at the MSI SNR.
std::pair<HyperCube, HyperCube> wald_synthesize(const HyperCube& reference,
                                                const DegradationModel& deg, RngStream& rng);

} // namespace sdp

#endif
